#include "ucp/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "ucp/error.hpp"

namespace ucp {

using nlohmann::json;

FittedModel::FittedModel(ModelKind kind, Body body, std::size_t n_train)
    : kind_(kind), body_(std::move(body)), n_train_(n_train) {
  const bool ok = is_base_learner(kind)           ? std::holds_alternative<regress::LearnerModel>(body_)
                  : kind == ModelKind::Ensemble ? std::holds_alternative<EnsembleModel>(body_)
                                                  : std::holds_alternative<std::monostate>(body_);
  if (!ok) throw Error("fitted model body does not match its kind");
}

std::array<double, 3> FittedModel::member_pdrs(const ProjectInputs& project) const {
  const auto* e = ensemble();
  if (!e) throw Error("member_pdrs: not an ensemble");
  std::array<double, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) out[i] = e->members[i].predict(project.size);
  return out;
}

double FittedModel::predict_pdr(const ProjectInputs& project) const {
  switch (kind_) {
    case ModelKind::Karner: return ensemble::kKarnerPdr;
    case ModelKind::SchneiderWinters: return ensemble::sw_productivity(project.env);
    case ModelKind::Ensemble: {
      const auto preds = member_pdrs(project);
      const auto& m = ensemble()->weights.models;
      const std::array<double, 3> w{m[0].w, m[1].w, m[2].w};
      return ensemble::ensemble_predict(preds, w);
    }
    default: return learner()->predict(project.size);
  }
}

FittedModel fit_model(ModelKind kind, const Dataset& training, const ModelConfig& config) {
  if (kind == ModelKind::Karner || kind == ModelKind::SchneiderWinters) {
    return FittedModel(kind, std::monostate{}, training.size());
  }
  if (training.empty()) throw Error("fit_model: empty training set");
  const auto x = training.features();
  const auto y = training.pdrs();
  if (is_base_learner(kind)) {
    return FittedModel(kind, regress::fit_learner(kind, x, y, config.learners), training.size());
  }
  EnsembleModel e;
  for (std::size_t i = 0; i < 3; ++i) {
    e.members[i] = regress::fit_learner(ensemble::kMembers[i], x, y, config.learners);
  }
  e.profile = ensemble::inner_error_profile(training, config.learners, config.ensemble.pdr_floor);
  e.weights = ensemble::weights_from_profile(e.profile, config.ensemble.alpha);
  return FittedModel(kind, std::move(e), training.size());
}

namespace {

// JSON has no NaN/inf; store them as null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double num(const json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

json scaler_json(const preprocess::ScalerParams& s) {
  json out = json::array();
  for (const auto& r : s.ranges()) out.push_back({r.min, r.max});
  return out;
}

preprocess::ScalerParams scaler_from(const json& j) {
  std::vector<preprocess::ScalerParams::Range> ranges;
  for (const auto& r : j) ranges.push_back({r.at(0).get<double>(), r.at(1).get<double>()});
  return preprocess::ScalerParams(std::move(ranges));
}

json learner_json(const regress::LearnerModel& m) {
  json out;
  out["kind"] = to_string(m.kind);
  out["n_train"] = m.n_train;
  out["scaler"] = m.scaler ? scaler_json(*m.scaler) : json(nullptr);
  if (const auto* c = std::get_if<regress::CartModel>(&m.model)) {
    out["config"] = {{"min_split", c->config.min_split}, {"min_leaf", c->config.min_leaf},
                     {"max_depth", c->config.max_depth}};
    json nodes = json::array();
    for (const auto& n : c->nodes) {
      nodes.push_back({n.feature, n.threshold, n.left, n.right, n.value, n.count, n.depth});
    }
    out["nodes"] = std::move(nodes);
  } else if (const auto* s = std::get_if<regress::SvrModel>(&m.model)) {
    out["gamma"] = s->gamma;
    out["c"] = s->c;
    out["epsilon"] = s->epsilon;
    out["bias"] = s->bias;
    out["bias_only"] = s->bias_only;
    out["converged"] = s->converged;
    out["iterations"] = s->iterations;
    out["support_vectors"] = s->support_vectors;
    out["coefficients"] = s->coefficients;
  } else {
    const auto& w = std::get<regress::StepwiseModel>(m.model);
    out["log_feature"] = w.log_feature;
    out["retained"] = w.retained;
    out["coefficients"] = w.coefficients;
    json p = json::array();
    for (double v : w.p_values) p.push_back(num(v));
    out["p_values"] = std::move(p);
    out["intercept"] = w.intercept;
    out["removed"] = w.removed;
    out["n"] = w.n;
  }
  return out;
}

regress::LearnerModel learner_from(const json& j) {
  regress::LearnerModel m;
  m.kind = parse_model_kind(j.at("kind").get<std::string>());
  m.n_train = j.at("n_train").get<std::size_t>();
  if (!j.at("scaler").is_null()) m.scaler = scaler_from(j.at("scaler"));
  switch (m.kind) {
    case ModelKind::Cart: {
      regress::CartModel c;
      const auto& cfg = j.at("config");
      c.config = {cfg.at("min_split").get<std::size_t>(), cfg.at("min_leaf").get<std::size_t>(),
                  cfg.at("max_depth").get<std::size_t>()};
      for (const auto& n : j.at("nodes")) {
        regress::CartNode node;
        node.feature = n.at(0).get<int>();
        node.threshold = n.at(1).get<double>();
        node.left = n.at(2).get<int>();
        node.right = n.at(3).get<int>();
        node.value = n.at(4).get<double>();
        node.count = n.at(5).get<std::size_t>();
        node.depth = n.at(6).get<std::size_t>();
        const auto limit = static_cast<int>(j.at("nodes").size());
        if (node.feature >= 4 || node.left >= limit || node.right >= limit ||
            (node.feature >= 0 && (node.left < 0 || node.right < 0))) {
          throw Error("model JSON: malformed tree node");
        }
        c.nodes.push_back(node);
      }
      if (c.nodes.empty()) throw Error("model JSON: tree without nodes");
      m.model = std::move(c);
      break;
    }
    case ModelKind::Svr: {
      regress::SvrModel s;
      s.gamma = j.at("gamma").get<double>();
      s.c = j.at("c").get<double>();
      s.epsilon = j.at("epsilon").get<double>();
      s.bias = j.at("bias").get<double>();
      s.bias_only = j.at("bias_only").get<bool>();
      s.converged = j.at("converged").get<bool>();
      s.iterations = j.at("iterations").get<std::size_t>();
      s.support_vectors = j.at("support_vectors").get<std::vector<FeatureVector>>();
      s.coefficients = j.at("coefficients").get<std::vector<double>>();
      if (s.support_vectors.size() != s.coefficients.size()) throw Error("model JSON: SVR size mismatch");
      m.model = std::move(s);
      break;
    }
    case ModelKind::Stepwise: {
      regress::StepwiseModel w;
      w.log_feature = j.at("log_feature").get<std::array<bool, 4>>();
      w.retained = j.at("retained").get<std::vector<std::size_t>>();
      w.coefficients = j.at("coefficients").get<std::vector<double>>();
      for (const auto& p : j.at("p_values")) w.p_values.push_back(num(p));
      w.intercept = j.at("intercept").get<double>();
      w.removed = j.at("removed").get<std::vector<std::size_t>>();
      w.n = j.at("n").get<std::size_t>();
      if (w.retained.size() != w.coefficients.size()) throw Error("model JSON: stepwise size mismatch");
      for (auto r : w.retained) {
        if (r >= 4) throw Error("model JSON: stepwise feature index out of range");
      }
      m.model = std::move(w);
      break;
    }
    default: throw Error("model JSON: not a base learner");
  }
  return m;
}

json triple_json(const eval::MetricTriple& t) { return {{"mae", num(t.mae)}, {"mbre", num(t.mbre)}, {"mibre", num(t.mibre)}}; }

eval::MetricTriple triple_from(const json& j) { return {num(j.at("mae")), num(j.at("mbre")), num(j.at("mibre"))}; }

json weights_json(const ensemble::EnsembleWeights& w) {
  json models = json::array();
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& m = w.models[i];
    models.push_back({{"model", to_string(ensemble::kMembers[i])},
                      {"w_mae", m.w_mae},
                      {"w_mbre", m.w_mbre},
                      {"w_mibre", m.w_mibre},
                      {"w", m.w}});
  }
  return {{"alpha", w.alpha}, {"models", std::move(models)}};
}

json model_json(const FittedModel& model) {
  json out;
  out["kind"] = to_string(model.kind());
  out["n_train"] = model.n_train();
  if (const auto* l = model.learner()) {
    out["learner"] = learner_json(*l);
  } else if (const auto* e = model.ensemble()) {
    json members = json::array();
    for (const auto& m : e->members) members.push_back(learner_json(m));
    out["members"] = std::move(members);
    out["weights"] = weights_json(e->weights);
    json raw = json::array();
    json norm = json::array();
    for (std::size_t i = 0; i < 3; ++i) {
      raw.push_back(triple_json(e->profile.raw[i]));
      norm.push_back(triple_json(e->profile.normalized[i]));
    }
    out["profile"] = {{"fallback", e->profile.fallback}, {"raw", std::move(raw)}, {"normalized", std::move(norm)}};
  }
  return out;
}

FittedModel model_from(const json& j) {
  const auto kind = parse_model_kind(j.at("kind").get<std::string>());
  const auto n = j.at("n_train").get<std::size_t>();
  if (is_base_learner(kind)) {
    auto l = learner_from(j.at("learner"));
    if (l.kind != kind) throw Error("model JSON: learner kind mismatch");
    return FittedModel(kind, std::move(l), n);
  }
  if (kind != ModelKind::Ensemble) return FittedModel(kind, std::monostate{}, n);
  EnsembleModel e;
  const auto& members = j.at("members");
  if (members.size() != 3) throw Error("model JSON: ensemble needs three members");
  for (std::size_t i = 0; i < 3; ++i) {
    e.members[i] = learner_from(members.at(i));
    if (e.members[i].kind != ensemble::kMembers[i]) throw Error("model JSON: ensemble member order");
  }
  const auto& w = j.at("weights");
  e.weights.alpha = w.at("alpha").get<double>();
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& m = w.at("models").at(i);
    e.weights.models[i] = {m.at("w_mae").get<double>(), m.at("w_mbre").get<double>(),
                           m.at("w_mibre").get<double>(), m.at("w").get<double>()};
  }
  const auto& p = j.at("profile");
  e.profile.fallback = p.at("fallback").get<bool>();
  for (std::size_t i = 0; i < 3; ++i) {
    e.profile.raw[i] = triple_from(p.at("raw").at(i));
    e.profile.normalized[i] = triple_from(p.at("normalized").at(i));
  }
  return FittedModel(kind, std::move(e), n);
}

template <class F>
auto parse_guarded(std::string_view text, F&& f) {
  try {
    return f(json::parse(text));
  } catch (const json::exception& e) {
    throw Error(std::string("model JSON: ") + e.what());
  }
}

}  // namespace

std::string model_to_json(const FittedModel& model) { return model_json(model).dump(2) + "\n"; }

FittedModel model_from_json(std::string_view text) {
  return parse_guarded(text, [](const json& j) { return model_from(j); });
}

LocalPredictor fit_local_predictor(const Dataset& dataset, const locality::PartitionScheme& scheme, ModelKind kind,
                                   const ModelConfig& config, std::size_t min_local, double pdr_floor) {
  LocalPredictor out;
  out.partitioning = locality::build_partitioning(dataset, scheme);
  out.min_local = min_local;
  out.pdr_floor = pdr_floor;
  out.fallback = fit_model(kind, dataset, config);
  for (const auto& part : out.partitioning.partitions) {
    out.partition_sizes.push_back(part.members.size());
    if (part.members.size() < min_local) {
      out.local.emplace_back();
    } else {
      out.local.emplace_back(fit_model(kind, dataset.subset(part.members), config));
    }
  }
  return out;
}

Prediction predict(const LocalPredictor& predictor, const ProjectInputs& project) {
  Prediction p;
  const FittedModel* model = &predictor.fallback;
  p.partition = "all";
  p.fallback = true;
  if (const auto idx = locality::assign(project.env, predictor.partitioning)) {
    if (*idx < predictor.local.size() && predictor.local[*idx]) {
      model = &*predictor.local[*idx];
      p.partition = predictor.partitioning.partitions[*idx].label;
      p.fallback = false;
    }
  }
  p.kind = model->kind();
  p.ucp = project.ucp();
  p.pdr = std::max(model->predict_pdr(project), predictor.pdr_floor);
  p.effort = compute_effort(p.pdr, p.ucp);
  if (const auto* e = model->ensemble()) {
    p.member_pdrs = model->member_pdrs(project);
    p.weights = e->weights;
  }
  return p;
}

std::string predictor_to_json(const LocalPredictor& predictor) {
  const auto& part = predictor.partitioning;
  json j;
  j["format"] = "ucp-predictor";
  j["version"] = 1;
  j["scheme"] = locality::scheme_label(part.scheme);
  if (const auto* k = std::get_if<locality::KMeansEnv>(&part.scheme)) {
    j["kmeans"] = {{"k_min", k->k_min}, {"k_max", k->k_max}, {"seed", k->seed}, {"cap_at_half", k->cap_at_half}};
  }
  j["min_local"] = predictor.min_local;
  j["pdr_floor"] = predictor.pdr_floor;
  json parts = json::array();
  for (std::size_t i = 0; i < part.partitions.size(); ++i) {
    parts.push_back({{"label", part.partitions[i].label},
                     {"size", predictor.partition_sizes.at(i)},
                     {"model", predictor.local[i] ? model_json(*predictor.local[i]) : json(nullptr)}});
  }
  j["partitions"] = std::move(parts);
  if (part.clusters) {
    j["clusters"] = {{"scaler", scaler_json(part.clusters->scaler)},
                     {"centroids", part.clusters->centroids},
                     {"k", part.clusters->k},
                     {"dunn", num(part.clusters->dunn)}};
  }
  j["fallback"] = model_json(predictor.fallback);
  return j.dump(2) + "\n";
}

LocalPredictor predictor_from_json(std::string_view text) {
  return parse_guarded(text, [](const json& j) {
    if (j.value("format", "") != "ucp-predictor") throw Error("not a predictor document (format field)");
    LocalPredictor p;
    p.partitioning.scheme = locality::parse_scheme(j.at("scheme").get<std::string>());
    if (auto* k = std::get_if<locality::KMeansEnv>(&p.partitioning.scheme)) {
      const auto& c = j.at("kmeans");
      k->k_min = c.at("k_min").get<std::size_t>();
      k->k_max = c.at("k_max").get<std::size_t>();
      k->seed = c.at("seed").get<std::uint64_t>();
      k->cap_at_half = c.at("cap_at_half").get<bool>();
      const auto& cl = j.at("clusters");
      locality::ClusterModel cm;
      cm.scaler = scaler_from(cl.at("scaler"));
      cm.centroids = cl.at("centroids").get<std::vector<locality::EnvPoint>>();
      cm.k = cl.at("k").get<std::size_t>();
      cm.dunn = num(cl.at("dunn"));
      if (cm.scaler.dimension() != kFactorCount || cm.centroids.size() != cm.k) {
        throw Error("predictor JSON: malformed cluster model");
      }
      p.partitioning.clusters = std::move(cm);
    }
    p.min_local = j.at("min_local").get<std::size_t>();
    p.pdr_floor = j.at("pdr_floor").get<double>();
    for (const auto& part : j.at("partitions")) {
      p.partitioning.partitions.push_back({part.at("label").get<std::string>(), {}});
      p.partition_sizes.push_back(part.at("size").get<std::size_t>());
      const auto& m = part.at("model");
      p.local.push_back(m.is_null() ? std::nullopt : std::optional<FittedModel>(model_from(m)));
    }
    if (p.partitioning.clusters && p.partitioning.partitions.size() != p.partitioning.clusters->k) {
      throw Error("predictor JSON: cluster count does not match partitions");
    }
    p.fallback = model_from(j.at("fallback"));
    return p;
  });
}

}  // namespace ucp
