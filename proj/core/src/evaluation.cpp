#include "ucp/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "ucp/error.hpp"

namespace ucp::eval {

namespace {

// Runs fn(i) for i in [0, n) on up to `threads` workers. The first failure by
// index is rethrown.
template <class Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  if (threads == 0) threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<std::string> ids_of(const Dataset& d) {
  std::vector<std::string> out;
  out.reserve(d.size());
  for (const auto& p : d) out.push_back(p.id());
  return out;
}

}  // namespace

EvaluationReport loocv_run(const Dataset& dataset, const locality::PartitionScheme& scheme, ModelKind model,
                           const LoocvConfig& config, std::uint64_t seed) {
  if (dataset.size() < kMinLoocvProjects) {
    throw DomainError("leave-one-out needs at least " + std::to_string(kMinLoocvProjects) + " projects, got " +
                      std::to_string(dataset.size()));
  }
  if (config.min_local == 0) throw DomainError("min_local must be >= 1");
  if (!(config.pdr_floor > 0)) throw DomainError("PDR floor must be > 0");
  locality::PartitionScheme fold_scheme = scheme;
  if (auto* k = std::get_if<locality::KMeansEnv>(&fold_scheme)) k->seed = seed;
  locality::validate(fold_scheme);

  EvaluationReport report;
  report.dataset = dataset.name();
  report.scheme = locality::scheme_label(fold_scheme);
  report.model = model;
  report.config = config;
  report.seed = seed;
  report.folds.resize(dataset.size());

  parallel_for(dataset.size(), config.threads, [&](std::size_t test) {
    const Dataset training = dataset.without(test);
    const Project& target = dataset[test];
    const auto partitioning = locality::build_partitioning(training, fold_scheme);

    FoldTrace& trace = report.folds[test];
    trace.test_id = target.id();
    trace.scheme = report.scheme;
    trace.ucp = target.ucp();
    trace.actual_effort = target.effort();

    const auto idx = locality::assign(target.env(), partitioning);
    const bool local_ok = idx && partitioning.partitions[*idx].members.size() >= config.min_local;
    const Dataset local = local_ok ? training.subset(partitioning.partitions[*idx].members) : training;
    trace.fallback = !local_ok;
    trace.partition = local_ok ? partitioning.partitions[*idx].label : "all";

    const auto fitted = fit_model(model, local, config.model);
    const auto inputs = target.inputs();
    trace.predicted_pdr = std::max(fitted.predict_pdr(inputs), config.pdr_floor);
    trace.predicted_effort = compute_effort(trace.predicted_pdr, trace.ucp);
    if (const auto* e = fitted.ensemble()) {
      trace.member_pdrs = fitted.member_pdrs(inputs);
      trace.weights = e->weights;
    }
    if (config.record_ids) {
      trace.partitioned_ids = partitioning.ids;
      trace.fit_ids = ids_of(local);
    }
  });

  std::vector<double> actual;
  std::vector<double> estimate;
  for (const auto& f : report.folds) {
    actual.push_back(f.actual_effort);
    estimate.push_back(f.predicted_effort);
  }
  report.metrics = evaluate(actual, estimate);
  return report;
}

std::vector<locality::PartitionScheme> locality_schemes(std::uint64_t seed) {
  std::vector<locality::PartitionScheme> out;
  for (int f = 1; f <= static_cast<int>(kFactorCount); ++f) out.emplace_back(locality::FactorLevels{f});
  out.emplace_back(locality::KMeansEnv{.seed = seed});
  return out;
}

const EvaluationReport& BenchmarkResult::at(const std::string& scheme, ModelKind model) const {
  const auto& pool = scheme == "none" ? no_locality : locality;
  for (const auto& r : pool) {
    if (r.scheme == scheme && r.model == model) return r;
  }
  throw Error("benchmark has no report for " + scheme + "/" + std::string(to_string(model)));
}

BenchmarkResult benchmark_all(const Dataset& dataset, const LoocvConfig& config, std::uint64_t seed) {
  BenchmarkResult out;
  out.dataset = dataset.name();
  out.seed = seed;
  for (const auto& scheme : locality_schemes(seed)) {
    for (const auto kind : kLocalityModels) out.locality.push_back(loocv_run(dataset, scheme, kind, config, seed));
  }
  for (const auto kind : kNoLocalityModels) {
    out.no_locality.push_back(loocv_run(dataset, locality::NoLocality{}, kind, config, seed));
  }
  return out;
}

}  // namespace ucp::eval
