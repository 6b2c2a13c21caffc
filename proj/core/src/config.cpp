#include "dladmm/config.hpp"

#include <fstream>

#include <json.hpp>

namespace dladmm {

namespace {

using nlohmann::json;

std::string activation_name(const Activation& a) {
  return a.kind == ActivationKind::relu ? "relu" : "leaky_relu";
}

Activation activation_from(const json& j) {
  Activation a;
  const std::string kind = j.value("activation", "relu");
  if (kind == "relu")
    a.kind = ActivationKind::relu;
  else if (kind == "leaky_relu")
    a.kind = ActivationKind::leaky_relu;
  else
    throw Error(ErrorKind::config, "unknown activation: " + kind);
  a.leaky_slope = j.value("leaky_slope", 0.01);
  return a;
}

RegularizerSpec regularizer_from(const json& j) {
  RegularizerSpec r;
  const std::string kind = j.value("kind", "none");
  if (kind == "none")
    r.kind = RegularizerKind::none;
  else if (kind == "l1")
    r.kind = RegularizerKind::l1;
  else if (kind == "l2")
    r.kind = RegularizerKind::l2;
  else
    throw Error(ErrorKind::config, "unknown regularizer: " + kind);
  r.lambda = j.value("lambda", 0.0);
  return r;
}

json regularizer_to(const RegularizerSpec& r) {
  const char* kind = r.kind == RegularizerKind::none ? "none"
                     : r.kind == RegularizerKind::l1 ? "l1"
                                                     : "l2";
  return json{{"kind", kind}, {"lambda", r.lambda}};
}

RhoSchedule schedule_from(const json& j) {
  RhoSchedule s;
  const std::string kind = j.value("kind", "fixed");
  if (kind == "fixed")
    s.kind = RhoScheduleKind::fixed;
  else if (kind == "geometric")
    s.kind = RhoScheduleKind::geometric;
  else
    throw Error(ErrorKind::config, "unknown rho schedule: " + kind);
  s.factor = j.value("factor", 10.0);
  s.every_k_iters = j.value("every_k_iters", 100);
  s.cap = j.value("cap", std::numeric_limits<double>::infinity());
  return s;
}

json schedule_to(const RhoSchedule& s) {
  json j{{"kind", s.kind == RhoScheduleKind::fixed ? "fixed" : "geometric"}};
  if (s.kind == RhoScheduleKind::geometric) {
    j["factor"] = s.factor;
    j["every_k_iters"] = s.every_k_iters;
    if (std::isfinite(s.cap)) j["cap"] = s.cap;
  }
  return j;
}

OptimizerSpec optimizer_from(const json& j) {
  OptimizerSpec o;
  const std::string kind = j.value("kind", "adam");
  if (kind == "sgd")
    o.kind = OptimizerKind::sgd;
  else if (kind == "adagrad")
    o.kind = OptimizerKind::adagrad;
  else if (kind == "adadelta")
    o.kind = OptimizerKind::adadelta;
  else if (kind == "adam")
    o.kind = OptimizerKind::adam;
  else
    throw Error(ErrorKind::config, "unknown optimizer: " + kind);
  o.lr = j.value("lr", o.kind == OptimizerKind::adadelta ? 0.1 : 1e-3);
  o.eps = j.value("eps", 1e-8);
  o.beta1 = j.value("beta1", 0.9);
  o.beta2 = j.value("beta2", 0.999);
  o.decay = j.value("decay", 0.95);
  return o;
}

json optimizer_to(const OptimizerSpec& o) {
  const char* kind = o.kind == OptimizerKind::sgd        ? "sgd"
                     : o.kind == OptimizerKind::adagrad  ? "adagrad"
                     : o.kind == OptimizerKind::adadelta ? "adadelta"
                                                         : "adam";
  return json{{"kind", kind},     {"lr", o.lr},       {"eps", o.eps},
              {"beta1", o.beta1}, {"beta2", o.beta2}, {"decay", o.decay}};
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::config, std::string("config parse error: ") + e.what());
  }

  try {
    RunConfig c;
    if (j.contains("dataset")) {
      const json& d = j["dataset"];
      c.dataset.train_images = d.value("train_images", "");
      c.dataset.train_labels = d.value("train_labels", "");
      c.dataset.test_images = d.value("test_images", "");
      c.dataset.test_labels = d.value("test_labels", "");
      c.dataset.num_classes = d.value("num_classes", 10);
      c.dataset.subsample_n = d.value("subsample_n", std::size_t{0});
      c.dataset.drop_train_to = d.value("drop_train_to", std::size_t{0});
      c.dataset.name = d.value("name", "");
    }
    {
      const json& a = j.at("arch");
      c.arch.layer_dims = a.at("layer_dims").get<std::vector<int>>();
      c.arch.activation = activation_from(a);
      c.arch.validate();
    }
    if (j.contains("hyper")) {
      const json& h = j["hyper"];
      Hyperparams& hp = c.hyper;
      hp.nu = h.value("nu", hp.nu);
      hp.rho0 = h.value("rho0", hp.rho0);
      if (h.contains("rho_schedule")) hp.rho_schedule = schedule_from(h["rho_schedule"]);
      hp.eta_bar = h.value("eta_bar", hp.eta_bar);
      hp.eta = h.value("eta", hp.eta);
      hp.gamma_bar = h.value("gamma_bar", hp.gamma_bar);
      hp.gamma = h.value("gamma", hp.gamma);
      hp.t0 = h.value("t0", hp.t0);
      if (h.contains("regularizer")) hp.regularizer = regularizer_from(h["regularizer"]);
      hp.fista_max_iters = h.value("fista_max_iters", hp.fista_max_iters);
      hp.fista_tol = h.value("fista_tol", hp.fista_tol);
      hp.max_iters = h.value("max_iters", hp.max_iters);
      hp.seed = h.value("seed", hp.seed);
      hp.validate();
    }
    if (j.contains("optimizer")) c.optimizer = optimizer_from(j["optimizer"]);
    if (j.contains("bench")) {
      const json& b = j["bench"];
      BenchConfig bc;
      if (b.contains("hidden_sizes")) bc.hidden_sizes = b["hidden_sizes"].get<std::vector<int>>();
      if (b.contains("sample_counts")) bc.sample_counts = b["sample_counts"].get<std::vector<int>>();
      if (b.contains("rhos")) bc.rhos = b["rhos"].get<std::vector<double>>();
      bc.warmup_iters = b.value("warmup_iters", bc.warmup_iters);
      bc.timed_iters = b.value("timed_iters", bc.timed_iters);
      bc.n_features = b.value("n_features", bc.n_features);
      bc.num_classes = b.value("num_classes", bc.num_classes);
      bc.fixed_hidden = b.value("fixed_hidden", bc.fixed_hidden);
      bc.fixed_samples = b.value("fixed_samples", bc.fixed_samples);
      c.bench = bc;
    }
    c.output_dir = j.value("output_dir", ".");
    const std::string fmt = j.value("metrics_format", "csv");
    if (fmt == "csv")
      c.metrics_format = MetricsFormat::csv;
    else if (fmt == "json-lines" || fmt == "jsonl")
      c.metrics_format = MetricsFormat::json_lines;
    else
      throw Error(ErrorKind::config, "unknown metrics_format: " + fmt);
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::config, std::string("config field error: ") + e.what());
  }
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config, "cannot open config " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_config_text(text);
}

std::string serialize_config(const RunConfig& c) {
  json j;
  j["dataset"] = {{"train_images", c.dataset.train_images},
                  {"train_labels", c.dataset.train_labels},
                  {"test_images", c.dataset.test_images},
                  {"test_labels", c.dataset.test_labels},
                  {"num_classes", c.dataset.num_classes},
                  {"subsample_n", c.dataset.subsample_n},
                  {"drop_train_to", c.dataset.drop_train_to},
                  {"name", c.dataset.name}};
  j["arch"] = {{"layer_dims", c.arch.layer_dims},
               {"activation", activation_name(c.arch.activation)},
               {"leaky_slope", c.arch.activation.leaky_slope}};
  j["hyper"] = {{"nu", c.hyper.nu},
                {"rho0", c.hyper.rho0},
                {"rho_schedule", schedule_to(c.hyper.rho_schedule)},
                {"eta_bar", c.hyper.eta_bar},
                {"eta", c.hyper.eta},
                {"gamma_bar", c.hyper.gamma_bar},
                {"gamma", c.hyper.gamma},
                {"t0", c.hyper.t0},
                {"regularizer", regularizer_to(c.hyper.regularizer)},
                {"fista_max_iters", c.hyper.fista_max_iters},
                {"fista_tol", c.hyper.fista_tol},
                {"max_iters", c.hyper.max_iters},
                {"seed", c.hyper.seed}};
  if (c.optimizer) j["optimizer"] = optimizer_to(*c.optimizer);
  if (c.bench) {
    const BenchConfig& b = *c.bench;
    j["bench"] = {{"hidden_sizes", b.hidden_sizes},
                  {"sample_counts", b.sample_counts},
                  {"rhos", b.rhos},
                  {"warmup_iters", b.warmup_iters},
                  {"timed_iters", b.timed_iters},
                  {"n_features", b.n_features},
                  {"num_classes", b.num_classes},
                  {"fixed_hidden", b.fixed_hidden},
                  {"fixed_samples", b.fixed_samples}};
  }
  j["output_dir"] = c.output_dir;
  j["metrics_format"] =
      c.metrics_format == MetricsFormat::csv ? "csv" : "json-lines";
  return j.dump(2);
}

}  // namespace dladmm
