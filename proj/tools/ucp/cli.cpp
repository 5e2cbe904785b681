#include "ucp/cli.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ucp/csv.hpp"
#include "ucp/dataset.hpp"
#include "ucp/error.hpp"
#include "ucp/evaluation.hpp"
#include "ucp/model.hpp"
#include "ucp/preprocess.hpp"
#include "ucp/report.hpp"
#include "ucp/stats.hpp"
#include "ucp/svg.hpp"
#include "ucp/table.hpp"

namespace ucp::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string data;
  std::string out;
  std::uint64_t seed = 42;
  std::string format = "csv";
  std::string scheme = "all";
  std::string model = "all";
  double svr_c = 1.0;
  double svr_eps = 0.1;
  double svr_gamma = 0.0;
  double alpha = ensemble::kDefaultAlpha;
  double z_threshold = preprocess::kDefaultZThreshold;
  std::size_t min_local = 5;
  std::size_t threads = 0;
  CLI::Option* gamma_opt = nullptr;

  // predict
  std::string predictor;
  std::string save_predictor;
  double uaw = 0, uucw = 0, tcf = 0, ef = 0;
  std::string env;

  // synth
  std::size_t n = 110;
};

void add_data(CLI::App* cmd, Options& o, bool required = true) {
  auto* opt = cmd->add_option("--data", o.data, "Dataset CSV");
  if (required) opt->required();
}

void add_out(CLI::App* cmd, Options& o) { cmd->add_option("--out", o.out, "Output directory")->required(); }

void add_format(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "Table format")->check(CLI::IsMember({"csv", "json", "md"}));
}

void add_hyper(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "Seed for k-means restarts (default 42)");
  cmd->add_option("--svr-c", o.svr_c, "SVR regularization C")->check(CLI::PositiveNumber);
  cmd->add_option("--svr-eps", o.svr_eps, "SVR tube width epsilon")->check(CLI::NonNegativeNumber);
  o.gamma_opt = cmd->add_option("--svr-gamma", o.svr_gamma, "SVR RBF gamma (default: auto)")->check(CLI::PositiveNumber);
  cmd->add_option("--alpha", o.alpha, "Ensemble sigmoid scaling")->check(CLI::PositiveNumber);
  cmd->add_option("--min-local", o.min_local, "Smallest local set before falling back to all data")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1'000'000}));
}

ModelConfig model_config(const Options& o) {
  ModelConfig c;
  c.learners.svr.c = o.svr_c;
  c.learners.svr.epsilon = o.svr_eps;
  if (o.gamma_opt && o.gamma_opt->count() > 0) c.learners.svr.gamma = o.svr_gamma;
  c.ensemble.alpha = o.alpha;
  return c;
}

eval::LoocvConfig loocv_config(const Options& o) {
  eval::LoocvConfig c;
  c.model = model_config(o);
  c.min_local = o.min_local;
  c.threads = o.threads;
  c.record_ids = false;
  return c;
}

fs::path prepare_out(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec || !fs::is_directory(p)) throw Error("cannot create output directory '" + dir + "'");
  return p;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path.string() + "'");
  f << content;
  if (!f) throw Error("write failed for '" + path.string() + "'");
}

template <class Fn>
void write_with(const fs::path& path, Fn&& fn) {
  std::ostringstream s;
  fn(s);
  write_file(path, s.str());
}

std::string with_ext(std::string_view stem, eval::Format f) { return std::string(stem) + "." + std::string(eval::extension(f)); }

// --- validate ---------------------------------------------------------------

int cmd_validate(const Options& o, std::ostream& out) {
  const Dataset d = load_dataset(o.data);
  std::map<std::string, std::size_t> sources;
  for (const auto& p : d) sources[std::string(to_string(p.source()))]++;
  auto range = [&](auto get) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& p : d) {
      lo = std::min(lo, get(p));
      hi = std::max(hi, get(p));
    }
    return "[" + format_fixed(lo, 2) + ", " + format_fixed(hi, 2) + "]";
  };
  out << "ok: " << o.data << ": " << d.size() << " projects (";
  bool first = true;
  for (const auto& [name, count] : sources) {
    out << (first ? "" : ", ") << name << ' ' << count;
    first = false;
  }
  out << ")\n";
  out << "ucp " << range([](const Project& p) { return p.ucp(); }) << ", pdr "
      << range([](const Project& p) { return p.pdr(); }) << ", effort "
      << range([](const Project& p) { return p.effort(); }) << '\n';
  return kExitOk;
}

// --- stats ------------------------------------------------------------------

int cmd_stats(const Options& o, std::ostream& out) {
  const Dataset d = load_dataset(o.data);
  const auto fmt = eval::parse_format(o.format);
  const auto dir = prepare_out(o.out);
  using preprocess::Feature;
  const std::array<Feature, 7> vars{Feature::Uaw, Feature::Uucw, Feature::Tcf, Feature::Ef,
                                    Feature::Ucp, Feature::Effort, Feature::Pdr};
  auto column = [&](Feature f) {
    std::vector<double> v;
    for (const auto& p : d) v.push_back(preprocess::value_of(p, f));
    return v;
  };

  Table desc{"Descriptive statistics", {"variable", "n", "mean", "stdev", "skewness", "kurtosis"}, {}};
  for (auto f : vars) {
    const auto m = stats::moments(column(f));
    desc.add({std::string(preprocess::to_string(f)), static_cast<long long>(d.size()), m.mean, m.stdev,
              m.skewness_defined ? m.skewness : NAN, m.kurtosis_defined ? m.kurtosis : NAN});
  }
  write_with(dir / with_ext("descriptive", fmt), [&](std::ostream& s) { write_table(desc, fmt, s); });

  const auto pdr = column(Feature::Pdr);
  Table corr{"Spearman rank correlation with PDR", {"variable", "r", "p_value"}, {}};
  for (auto f : {Feature::Uaw, Feature::Uucw, Feature::Tcf, Feature::Ef, Feature::Ucp}) {
    double r = NAN, p = NAN;
    try {
      const auto c = stats::spearman(column(f), pdr);
      r = c.r;
      p = c.p_value;
    } catch (const Error&) {
      // constant column: correlation undefined
    }
    corr.add({std::string(preprocess::to_string(f)), r, p});
  }
  write_with(dir / with_ext("spearman", fmt), [&](std::ostream& s) { write_table(corr, fmt, s); });

  const auto bins = histogram(pdr, 10);
  Table hist{"PDR histogram", {"bin", "low", "high", "count"}, {}};
  for (std::size_t i = 0; i < bins.counts.size(); ++i) {
    hist.add({static_cast<long long>(i + 1), bins.low + bins.width * static_cast<double>(i),
              bins.low + bins.width * static_cast<double>(i + 1), static_cast<long long>(bins.counts[i])});
  }
  write_with(dir / with_ext("pdr_histogram", fmt), [&](std::ostream& s) { write_table(hist, fmt, s); });
  write_file(dir / "pdr_histogram.svg", histogram_svg(bins, "Histogram of PDR", "PDR (hours/UCP)"));

  const auto m = stats::moments(pdr);
  out << "projects: " << d.size() << "\npdr mean " << format_fixed(m.mean, 2) << ", stdev " << format_fixed(m.stdev, 2);
  if (d.size() >= 5) {
    const auto norm = preprocess::normality_check(pdr);
    out << ", normality " << (norm.is_normal ? "not rejected" : "rejected") << " (KS " << format_fixed(norm.statistic, 4)
        << ", critical " << format_fixed(norm.critical_value, 4) << ")";
  }
  out << "\nwrote " << dir.string() << '\n';
  return kExitOk;
}

// --- rq1 --------------------------------------------------------------------

int cmd_rq1(const Options& o, std::ostream& out) {
  const Dataset d = load_dataset(o.data);
  const auto dir = prepare_out(o.out);
  Table counts{"Level occupancy", {"factor", "l0", "l1", "l2", "l3", "l4", "l5", "l12", "l3_merged", "l45"}, {}};
  for (int f = 1; f <= static_cast<int>(kFactorCount); ++f) {
    const std::string name = "e" + std::to_string(f);
    const auto levels = stats::interval_plot_data(d, f);
    write_with(dir / ("intervals_" + name + ".csv"), [&](std::ostream& s) {
      s << "level,count,mean,ci_low,ci_high,ci_defined\n";
      for (const auto& l : levels) {
        s << l.level << ',' << l.count << ',' << format_double(l.mean) << ',' << format_double(l.ci.low) << ','
          << format_double(l.ci.high) << ',' << (l.ci.defined ? "true" : "false") << '\n';
      }
    });
    std::string upper = name;
    upper[0] = 'E';
    write_file(dir / ("interval_" + name + ".svg"),
               interval_plot_svg(levels, "Interval plot of PDR vs. " + upper + " levels (95% CI)"));
    const auto c = stats::level_counts(d, f);
    std::vector<std::string> labels;
    std::vector<double> values;
    for (int l = 0; l <= 5; ++l) {
      labels.push_back(std::to_string(l));
      values.push_back(static_cast<double>(c[static_cast<std::size_t>(l)]));
    }
    write_file(dir / ("levels_" + name + ".svg"), bar_chart_svg(labels, values, "Projects per " + upper + " level"));
    std::vector<Cell> row{name};
    for (auto v : c) row.emplace_back(static_cast<long long>(v));
    row.emplace_back(static_cast<long long>(c[0] + c[1] + c[2]));
    row.emplace_back(static_cast<long long>(c[3]));
    row.emplace_back(static_cast<long long>(c[4] + c[5]));
    counts.add(std::move(row));
  }
  write_with(dir / "level_counts.csv", [&](std::ostream& s) { write_table(counts, eval::Format::Csv, s); });
  out << "wrote 8 interval plots, 8 bar charts, 8 interval tables to " << dir.string() << '\n';
  return kExitOk;
}

// --- benchmark --------------------------------------------------------------

std::vector<std::string> scheme_selection(const std::string& s) {
  if (s == "all") return {"e1", "e2", "e3", "e4", "e5", "e6", "e7", "e8", "kmeans", "none"};
  locality::parse_scheme(s);  // validates
  return {s};
}

std::vector<ModelKind> model_selection(const std::string& m) {
  if (m == "all") {
    return {ModelKind::Svr, ModelKind::Stepwise, ModelKind::Cart, ModelKind::Ensemble, ModelKind::Karner,
            ModelKind::SchneiderWinters};
  }
  return {parse_model_kind(m)};
}

void write_run_manifest(const fs::path& dir, const Options& o, const Dataset& raw, const Dataset& clean,
                        const preprocess::OutlierReport& outliers) {
  nlohmann::ordered_json j;
  j["dataset"] = raw.name();
  j["projects"] = raw.size();
  j["projects_after_outliers"] = clean.size();
  j["removed"] = outliers.removed_ids();
  j["seed"] = o.seed;
  j["scheme"] = o.scheme;
  j["model"] = o.model;
  j["z_threshold"] = o.z_threshold;
  j["min_local"] = o.min_local;
  j["pdr_floor"] = ensemble::kDefaultPdrFloor;
  j["alpha"] = o.alpha;
  j["svr"] = {{"c", o.svr_c},
              {"epsilon", o.svr_eps},
              {"gamma", o.gamma_opt && o.gamma_opt->count() ? nlohmann::ordered_json(o.svr_gamma) : "auto"}};
  write_file(dir / "run.json", j.dump(2) + "\n");
}

int cmd_benchmark(const Options& o, std::ostream& out) {
  const Dataset raw = load_dataset(o.data);
  const auto fmt = eval::parse_format(o.format);
  const auto schemes = scheme_selection(o.scheme);
  const auto models = model_selection(o.model);
  const auto dir = prepare_out(o.out);

  const auto features = preprocess::default_outlier_features();
  const auto outliers = preprocess::zscore_outliers(raw, features, o.z_threshold);
  const Dataset clean = preprocess::remove_outliers(raw, outliers);
  write_with(dir / "outliers.csv", [&](std::ostream& s) { preprocess::write_outlier_csv(outliers, s); });
  write_run_manifest(dir, o, raw, clean, outliers);
  out << "seed " << o.seed << "; outliers removed (|z| > " << format_double(o.z_threshold)
      << "): " << outliers.flagged_count();
  for (const auto& id : outliers.removed_ids()) out << ' ' << id;
  out << "\nprojects: " << clean.size() << '\n';

  const auto cfg = loocv_config(o);
  std::vector<eval::EvaluationReport> reports;
  if (o.scheme == "all" && o.model == "all") {
    const auto result = eval::benchmark_all(clean, cfg, o.seed);
    write_with(dir / with_ext("locality", fmt), [&](std::ostream& s) { eval::write_locality_table(result, fmt, s); });
    write_with(dir / with_ext("no_locality", fmt),
               [&](std::ostream& s) { eval::write_no_locality_table(result, fmt, s); });
    reports = result.locality;
    reports.insert(reports.end(), result.no_locality.begin(), result.no_locality.end());
    std::ostringstream md;
    eval::write_no_locality_table(result, eval::Format::Md, md);
    out << md.str();
  } else {
    for (const auto& s : schemes) {
      for (auto m : models) {
        const bool baseline = m == ModelKind::Karner || m == ModelKind::SchneiderWinters;
        if (baseline && s != "none" && o.model == "all") continue;
        reports.push_back(eval::loocv_run(clean, locality::parse_scheme(s, o.seed), m, cfg, o.seed));
      }
    }
    Table t{"Leave-one-out results", {"scheme", "model", "mae", "mbre", "mibre"}, {}};
    for (const auto& r : reports) {
      t.add({r.scheme, std::string(to_string(r.model)), r.metrics.mae, r.metrics.mbre, r.metrics.mibre});
    }
    write_with(dir / with_ext("results", fmt), [&](std::ostream& s) { write_table(t, fmt, s); });
    write_table(t, eval::Format::Md, out);
  }
  write_with(dir / "traces.csv", [&](std::ostream& s) { eval::write_traces_csv(reports, s); });
  write_with(dir / "weights.csv", [&](std::ostream& s) { eval::write_fold_weights_csv(reports, s); });
  out << "wrote " << dir.string() << '\n';
  return kExitOk;
}

// --- predict ----------------------------------------------------------------

EnvironmentalAssessment parse_env(const std::string& text) {
  const auto parts = split_csv_line(text);
  if (parts.size() != kFactorCount) throw DomainError("--env needs eight comma-separated scores e1..e8");
  std::array<int, kFactorCount> scores{};
  for (std::size_t i = 0; i < kFactorCount; ++i) {
    if (!parse_int(parts[i], scores[i])) throw DomainError("--env: '" + parts[i] + "' is not an integer");
  }
  return EnvironmentalAssessment(scores);
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot read '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

int cmd_predict(const Options& o, std::ostream& out) {
  ProjectInputs project{{o.uaw, o.uucw, o.tcf, o.ef}, parse_env(o.env)};
  for (std::size_t j = 0; j < project.size.size(); ++j) {
    if (!(project.size[j] > 0)) throw DomainError("--" + std::string(kFeatureNames[j]) + " must be > 0");
  }
  const auto fmt = eval::parse_format(o.format);

  LocalPredictor predictor;
  if (!o.predictor.empty()) {
    if (!o.data.empty()) throw DomainError("give either --data or --predictor, not both");
    predictor = predictor_from_json(read_text(o.predictor));
  } else {
    const std::string scheme = o.scheme == "all" ? "none" : o.scheme;
    const std::string model = o.model == "all" ? "ensemble" : o.model;
    const auto kind = parse_model_kind(model);
    const bool baseline = kind == ModelKind::Karner || kind == ModelKind::SchneiderWinters;
    if (o.data.empty() && !(baseline && scheme == "none")) {
      throw DomainError("--data (or --predictor) is required for trained models and locality schemes");
    }
    if (o.data.empty()) {
      // Baselines need no training data: no partitions, everything routes to the fallback.
      predictor.partitioning.scheme = locality::NoLocality{};
      predictor.fallback = fit_model(kind, Dataset("none", {}));
    } else {
      predictor = fit_local_predictor(load_dataset(o.data), locality::parse_scheme(scheme, o.seed), kind,
                                      model_config(o), o.min_local);
    }
  }
  if (!o.save_predictor.empty()) write_file(o.save_predictor, predictor_to_json(predictor));

  const Prediction p = predict(predictor, project);
  if (fmt == eval::Format::Json) {
    nlohmann::ordered_json j;
    j["model"] = to_string(p.kind);
    j["scheme"] = locality::scheme_label(predictor.partitioning.scheme);
    j["partition"] = p.partition;
    j["fallback"] = p.fallback;
    j["pdr"] = p.pdr;
    j["ucp"] = p.ucp;
    j["effort"] = p.effort;
    if (p.member_pdrs && p.weights) {
      nlohmann::ordered_json members = nlohmann::ordered_json::array();
      for (std::size_t i = 0; i < 3; ++i) {
        const auto& w = p.weights->models[i];
        members.push_back({{"model", to_string(ensemble::kMembers[i])},
                           {"pdr", (*p.member_pdrs)[i]},
                           {"w_mae", w.w_mae},
                           {"w_mbre", w.w_mbre},
                           {"w_mibre", w.w_mibre},
                           {"w", w.w}});
      }
      j["members"] = std::move(members);
    }
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  out << "model: " << to_string(p.kind) << "\nscheme: " << locality::scheme_label(predictor.partitioning.scheme)
      << "\npartition: " << p.partition << (p.fallback && !predictor.partitioning.partitions.empty() ? " (fallback to all training data)" : "")
      << "\npdr: " << format_double(p.pdr) << "\nucp: " << format_double(p.ucp)
      << "\neffort: " << format_double(p.effort) << '\n';
  if (p.member_pdrs && p.weights) {
    out << "model,pdr,w_mae,w_mbre,w_mibre,w\n";
    for (std::size_t i = 0; i < 3; ++i) {
      const auto& w = p.weights->models[i];
      out << to_string(ensemble::kMembers[i]) << ',' << format_double((*p.member_pdrs)[i]) << ','
          << format_double(w.w_mae) << ',' << format_double(w.w_mbre) << ',' << format_double(w.w_mibre) << ','
          << format_double(w.w) << '\n';
    }
  }
  return kExitOk;
}

// --- synth ------------------------------------------------------------------

int cmd_synth(const Options& o, std::ostream& out) {
  const Dataset d = generate_synthetic(o.seed, o.n);
  if (o.out.empty()) {
    write_dataset(d, out);
  } else {
    const fs::path path(o.out);
    if (path.has_parent_path()) prepare_out(path.parent_path().string());
    write_with(path, [&](std::ostream& s) { write_dataset(d, s); });
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Use case points productivity and effort estimation"};
  app.require_subcommand(1);
  Options o;

  auto* validate = app.add_subcommand("validate", "Check a dataset CSV against the ingestion schema");
  add_data(validate, o);

  auto* stats_cmd = app.add_subcommand("stats", "Descriptive statistics, Spearman correlations, PDR histogram");
  add_data(stats_cmd, o);
  add_out(stats_cmd, o);
  add_format(stats_cmd, o);

  auto* rq1 = app.add_subcommand("rq1", "Interval plots and level bar charts per environmental factor");
  add_data(rq1, o);
  add_out(rq1, o);

  auto* bench = app.add_subcommand("benchmark", "Leave-one-out benchmark of locality schemes and models");
  add_data(bench, o);
  add_out(bench, o);
  add_format(bench, o);
  add_hyper(bench, o);
  bench->add_option("--scheme", o.scheme, "e1..e8, kmeans, none or all");
  bench->add_option("--model", o.model, "svr, stepwise, cart, ensemble, karner, sw or all");
  bench->add_option("--z-threshold", o.z_threshold, "Outlier |z| threshold")->check(CLI::PositiveNumber);
  bench->add_option("--threads", o.threads, "Worker threads for folds (0 = all cores)");

  auto* pred = app.add_subcommand("predict", "Predict effort for one project");
  add_data(pred, o, false);
  add_format(pred, o);
  add_hyper(pred, o);
  o.scheme = "all";
  o.model = "all";
  pred->add_option("--scheme", o.scheme, "e1..e8, kmeans or none (default none)");
  pred->add_option("--model", o.model, "svr, stepwise, cart, ensemble, karner or sw (default ensemble)");
  pred->add_option("--predictor", o.predictor, "Saved predictor JSON instead of --data");
  pred->add_option("--save-predictor", o.save_predictor, "Write the fitted predictor as JSON");
  pred->add_option("--uaw", o.uaw, "Unadjusted actor weight")->required();
  pred->add_option("--uucw", o.uucw, "Unadjusted use case weight")->required();
  pred->add_option("--tcf", o.tcf, "Technical complexity factor")->required();
  pred->add_option("--ef", o.ef, "Environmental factor")->required();
  pred->add_option("--env", o.env, "Scores e1..e8, comma separated")->required();

  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth->add_option("--seed", o.seed, "Generator seed (default 42)");
  synth->add_option("--n", o.n, "Number of projects (>= 10)");
  synth->add_option("--out", o.out, "Output CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUser;
  }

  try {
    if (validate->parsed()) return cmd_validate(o, out);
    if (stats_cmd->parsed()) return cmd_stats(o, out);
    if (rq1->parsed()) return cmd_rq1(o, out);
    if (bench->parsed()) return cmd_benchmark(o, out);
    if (pred->parsed()) return cmd_predict(o, out);
    if (synth->parsed()) return cmd_synth(o, out);
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << " (column '" << e.column() << "')\n";
    return kExitUser;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUser;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace ucp::cli
