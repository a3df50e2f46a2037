/*
 * Copyright 2026 The faithmask Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "faithmask/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace faithmask {
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kModelSeedTag = 1;
constexpr std::uint64_t kTrainSeedTag = 2;
constexpr std::uint64_t kCellSeedTag = 3;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

std::string indexed(const std::string& where, std::size_t i) {
  return where + "[" + std::to_string(i) + "]";
}

void reject_unknown(const Json& obj, const std::vector<std::string>& known, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError(where + "." + key + ": unknown field");
    }
  }
}

template <typename T>
T positive(T v, const std::string& what) {
  if (!(v > T(0))) throw ConfigError(what + ": must be > 0");
  return v;
}

std::string amplitude_name(AmplitudeRule r) { return r == AmplitudeRule::kLiteral ? "literal" : "sqrt_power"; }
std::string norm_name(Norm n) { return n == Norm::kL2 ? "l2" : "linf"; }
std::string target_name(Target t) { return t == Target::kLogProbability ? "log_probability" : "logit"; }
std::string optimizer_name(Optimizer o) { return o == Optimizer::kSgd ? "sgd" : "momentum"; }

ModelSpec parse_model(const Json& j, ModelSpec m, const std::string& where) {
  reject_unknown(j, {"architecture", "hidden1", "hidden2", "filters", "kernel", "seed"}, where);
  m.architecture = field_or(j, "architecture", m.architecture, where);
  if (m.architecture != "mlp" && m.architecture != "conv1d") {
    throw ConfigError(where + ".architecture: expected \"mlp\" or \"conv1d\"");
  }
  m.hidden1 = positive(field_or(j, "hidden1", m.hidden1, where), where + ".hidden1");
  m.hidden2 = positive(field_or(j, "hidden2", m.hidden2, where), where + ".hidden2");
  m.filters = positive(field_or(j, "filters", m.filters, where), where + ".filters");
  m.kernel = positive(field_or(j, "kernel", m.kernel, where), where + ".kernel");
  if (j.contains("seed")) m.seed = field<std::uint64_t>(j, "seed", where);
  return m;
}

void parse_train(const Json& j, ExperimentSpec& e, const std::string& where) {
  reject_unknown(j, {"learning_rate", "epochs", "batch_size", "optimizer", "momentum", "weight_decay", "seed"}, where);
  TrainConfig& t = e.train;
  t.learning_rate = positive(field_or(j, "learning_rate", t.learning_rate, where), where + ".learning_rate");
  t.epochs = field_or(j, "epochs", t.epochs, where);
  if (t.epochs < 1) throw ConfigError(where + ".epochs: must be >= 1");
  t.batch_size = positive(field_or(j, "batch_size", t.batch_size, where), where + ".batch_size");
  const auto opt = field_or<std::string>(j, "optimizer", optimizer_name(t.optimizer), where);
  if (opt == "sgd") {
    t.optimizer = Optimizer::kSgd;
  } else if (opt == "momentum") {
    t.optimizer = Optimizer::kMomentum;
  } else {
    throw ConfigError(where + ".optimizer: expected \"sgd\" or \"momentum\"");
  }
  t.momentum = field_or(j, "momentum", t.momentum, where);
  if (t.momentum < 0.0 || t.momentum >= 1.0) throw ConfigError(where + ".momentum: must lie in [0, 1)");
  t.weight_decay = field_or(j, "weight_decay", t.weight_decay, where);
  if (t.weight_decay < 0.0) throw ConfigError(where + ".weight_decay: must be >= 0");
  if (j.contains("seed")) e.train_seed = field<std::uint64_t>(j, "seed", where);
}

ExperimentSpec parse_experiment(const Json& j, const std::string& where) {
  if (j.is_string()) {
    try {
      return shipped_experiment(parse_task(j.get<std::string>()));
    } catch (const InvalidArgument& err) {
      throw ConfigError(where + ": " + err.what());
    }
  }
  reject_unknown(j, {"name", "task", "test_per_class", "model", "train", "domains"}, where);
  const Json& task = require_field(j, "task", where);
  ExperimentSpec e;
  if (task.is_string()) {
    try {
      e = shipped_experiment(parse_task(task.get<std::string>()));
    } catch (const InvalidArgument& err) {
      throw ConfigError(where + ".task: " + err.what());
    }
  } else {
    const TaskSpec spec = task_spec_from_json(task, where + ".task");
    e = shipped_experiment(spec.kind);
    e.task = spec;
  }
  e.name = field_or(j, "name", e.name, where);
  if (e.name.empty() || e.name.find_first_not_of("abcdefghijklmnopqrstuvwxyz0123456789_-") != std::string::npos) {
    throw ConfigError(where + ".name: use lower-case letters, digits, '_' or '-'");
  }
  e.test_per_class = positive(field_or(j, "test_per_class", e.test_per_class, where), where + ".test_per_class");
  if (j.contains("model")) e.model = parse_model(j["model"], e.model, where + ".model");
  if (e.model.architecture == "conv1d" && e.task.kind == TaskKind::kGrid) {
    throw ConfigError(where + ".model.architecture: conv1d needs channels x time data");
  }
  if (j.contains("train")) parse_train(j["train"], e, where + ".train");
  if (j.contains("domains")) {
    const auto names = field<std::vector<std::string>>(j, "domains", where);
    if (names.empty()) throw ConfigError(where + ".domains: at least one domain is required");
    e.domains.clear();
    for (std::size_t i = 0; i < names.size(); ++i) {
      try {
        e.domains.push_back(parse_domain(names[i]));
      } catch (const InvalidArgument& err) {
        throw ConfigError(indexed(where + ".domains", i) + ": " + err.what());
      }
    }
  }
  return e;
}

OperatorConfig parse_operator_entry(const Json& j, const std::string& where) {
  OperatorConfig op;
  const Json obj = j.is_string() ? Json{{"kind", j.get<std::string>()}} : j;
  reject_unknown(obj, {"kind", "laplacian_noise_fraction", "hurst", "amplitude", "band_tolerance", "epsilon",
                       "step_size", "iterations", "norm", "calibrate", "epsilon_grid", "calibration_tolerance",
                       "amplitude_only", "half_frequency"},
                 where);
  try {
    op.kind = parse_operator(upper(field<std::string>(obj, "kind", where)));
  } catch (const InvalidArgument& err) {
    throw ConfigError(where + ".kind: " + err.what());
  }
  op.laplacian_noise_fraction = field_or(obj, "laplacian_noise_fraction", op.laplacian_noise_fraction, where);
  if (op.laplacian_noise_fraction < 0.0) throw ConfigError(where + ".laplacian_noise_fraction: must be >= 0");
  op.hurst = field_or(obj, "hurst", op.hurst, where);
  if (!(op.hurst > 0.0 && op.hurst < 1.0)) throw ConfigError(where + ".hurst: must lie in (0, 1)");
  const auto amp = field_or<std::string>(obj, "amplitude", amplitude_name(op.amplitude), where);
  if (amp == "sqrt_power") {
    op.amplitude = AmplitudeRule::kSqrtPower;
  } else if (amp == "literal") {
    op.amplitude = AmplitudeRule::kLiteral;
  } else {
    throw ConfigError(where + ".amplitude: expected \"sqrt_power\" or \"literal\"");
  }
  op.band_tolerance = field_or(obj, "band_tolerance", op.band_tolerance, where);
  if (op.band_tolerance < 0.0) throw ConfigError(where + ".band_tolerance: must be >= 0");
  op.adversarial.epsilon = positive(field_or(obj, "epsilon", op.adversarial.epsilon, where), where + ".epsilon");
  if (obj.contains("step_size")) op.adversarial.step_size = positive(field<double>(obj, "step_size", where), where + ".step_size");
  op.adversarial.iterations = positive(field_or(obj, "iterations", op.adversarial.iterations, where), where + ".iterations");
  const auto norm = field_or<std::string>(obj, "norm", norm_name(op.adversarial.norm), where);
  if (norm == "linf") {
    op.adversarial.norm = Norm::kLinf;
  } else if (norm == "l2") {
    op.adversarial.norm = Norm::kL2;
  } else {
    throw ConfigError(where + ".norm: expected \"linf\" or \"l2\"");
  }
  op.calibrate = field_or(obj, "calibrate", op.calibrate, where);
  if (obj.contains("epsilon_grid")) {
    const Json& g = obj["epsilon_grid"];
    const std::string gw = where + ".epsilon_grid";
    reject_unknown(g, {"start", "factor", "count"}, gw);
    op.epsilon_grid.start = positive(field_or(g, "start", op.epsilon_grid.start, gw), gw + ".start");
    op.epsilon_grid.factor = field_or(g, "factor", op.epsilon_grid.factor, gw);
    if (!(op.epsilon_grid.factor > 1.0)) throw ConfigError(gw + ".factor: must be > 1");
    op.epsilon_grid.count = positive(field_or(g, "count", op.epsilon_grid.count, gw), gw + ".count");
  }
  op.calibration_tolerance = field_or(obj, "calibration_tolerance", op.calibration_tolerance, where);
  if (op.calibration_tolerance < 0.0) throw ConfigError(where + ".calibration_tolerance: must be >= 0");
  op.aim_amplitude_only = field_or(obj, "amplitude_only", op.aim_amplitude_only, where);
  op.half_frequency = field_or(obj, "half_frequency", op.half_frequency, where);
  return op;
}

Json operator_to_json(const OperatorConfig& op) {
  Json j;
  j["kind"] = operator_name(op.kind);
  j["laplacian_noise_fraction"] = op.laplacian_noise_fraction;
  j["hurst"] = op.hurst;
  j["amplitude"] = amplitude_name(op.amplitude);
  j["band_tolerance"] = op.band_tolerance;
  j["epsilon"] = op.adversarial.epsilon;
  if (op.adversarial.step_size) j["step_size"] = *op.adversarial.step_size;
  j["iterations"] = op.adversarial.iterations;
  j["norm"] = norm_name(op.adversarial.norm);
  j["calibrate"] = op.calibrate;
  j["epsilon_grid"] = {{"start", op.epsilon_grid.start}, {"factor", op.epsilon_grid.factor}, {"count", op.epsilon_grid.count}};
  j["calibration_tolerance"] = op.calibration_tolerance;
  j["amplitude_only"] = op.aim_amplitude_only;
  j["half_frequency"] = op.half_frequency;
  return j;
}

Json experiment_to_json(const ExperimentSpec& e) {
  Json j;
  j["name"] = e.name;
  j["task"] = task_spec_to_json(e.task);
  j["test_per_class"] = e.test_per_class;
  Json m;
  m["architecture"] = e.model.architecture;
  m["hidden1"] = e.model.hidden1;
  m["hidden2"] = e.model.hidden2;
  m["filters"] = e.model.filters;
  m["kernel"] = e.model.kernel;
  if (e.model.seed) m["seed"] = *e.model.seed;
  j["model"] = m;
  Json t;
  t["learning_rate"] = e.train.learning_rate;
  t["epochs"] = e.train.epochs;
  t["batch_size"] = e.train.batch_size;
  t["optimizer"] = optimizer_name(e.train.optimizer);
  t["momentum"] = e.train.momentum;
  t["weight_decay"] = e.train.weight_decay;
  if (e.train_seed) t["seed"] = *e.train_seed;
  j["train"] = t;
  Json d = Json::array();
  for (Domain dom : e.domains) d.push_back(domain_name(dom));
  j["domains"] = d;
  return j;
}

std::uint64_t cell_seed(const RunConfig& config, std::size_t experiment, OperatorKind op, Domain domain) {
  return derive_seed(config.seed, {static_cast<std::uint64_t>(experiment), kCellSeedTag,
                                   static_cast<std::uint64_t>(op), static_cast<std::uint64_t>(domain)});
}

MaskingContext context_for(const TaskSpec& task) {
  MaskingContext ctx;
  ctx.layout = task.kind == TaskKind::kGrid ? Layout::kGrid : Layout::kChannelsTime;
  ctx.sampling_rate = task.sampling_rate;
  if (ctx.layout == Layout::kChannelsTime && task.montage_rows * task.montage_cols == task.channels &&
      task.montage_rows > 0) {
    ctx.montage = NeighborGraph::lattice(task.montage_rows, task.montage_cols);
  }
  return ctx;
}

std::string oracle_problem(const ExperimentSpec& e, Domain domain) {
  const bool spectral_task = e.task.kind == TaskKind::kSpectral;
  if (spectral_task != (domain == Domain::kSpectral)) {
    return "the planted-feature indicator of the " + task_name(e.task.kind) + " task does not live in the " +
           domain_name(domain) + " domain";
  }
  return {};
}

Json curve_meta_json(const CellResult& c, std::size_t m) {
  Json j;
  j["experiment"] = c.experiment;
  j["operator"] = operator_name(c.op);
  j["domain"] = domain_name(c.domain);
  j["method"] = c.methods[m];
  return j;
}

Json area_json(const AreaMetrics& a) { return Json{{"aoc", a.aoc}, {"abc", a.abc}, {"auc", a.auc}}; }

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

RunConfig parse_run_config(const Json& j) {
  reject_unknown(j, {"experiments", "methods", "attribution", "operators", "ratios", "n_perm", "seed", "output_dir"},
                 "config");
  RunConfig c;
  const Json& exps = require_field(j, "experiments", "config");
  if (!exps.is_array() || exps.empty()) throw ConfigError("config.experiments: expected a non-empty array");
  std::set<std::string> names;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    c.experiments.push_back(parse_experiment(exps[i], indexed("config.experiments", i)));
    if (!names.insert(c.experiments.back().name).second) {
      throw ConfigError(indexed("config.experiments", i) + ".name: duplicate experiment name '" +
                        c.experiments.back().name + "'");
    }
  }
  c.methods = field<std::vector<std::string>>(j, "methods", "config");
  if (c.methods.empty()) throw ConfigError("config.methods: at least one method is required");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < c.methods.size(); ++i) {
    std::string& tag = c.methods[i];
    tag = upper(tag);
    if (tag != "ORACLE") {
      try {
        parse_method(tag);
      } catch (const InvalidArgument& err) {
        throw ConfigError(indexed("config.methods", i) + ": " + err.what());
      }
    }
    if (!seen.insert(tag).second) throw ConfigError(indexed("config.methods", i) + ": duplicate method " + tag);
  }
  if (j.contains("attribution")) {
    const Json& a = j["attribution"];
    const std::string w = "config.attribution";
    reject_unknown(a, {"noise_fraction", "n_samples", "ig_steps", "target"}, w);
    c.attribution.noise_fraction = field_or(a, "noise_fraction", c.attribution.noise_fraction, w);
    if (c.attribution.noise_fraction < 0.0) throw ConfigError(w + ".noise_fraction: must be >= 0");
    c.attribution.n_samples = positive(field_or(a, "n_samples", c.attribution.n_samples, w), w + ".n_samples");
    c.attribution.ig_steps = positive(field_or(a, "ig_steps", c.attribution.ig_steps, w), w + ".ig_steps");
    const auto target = field_or<std::string>(a, "target", target_name(c.attribution.target), w);
    if (target == "logit") {
      c.attribution.target = Target::kLogit;
    } else if (target == "log_probability") {
      c.attribution.target = Target::kLogProbability;
    } else {
      throw ConfigError(w + ".target: expected \"logit\" or \"log_probability\"");
    }
  }
  const Json& ops = require_field(j, "operators", "config");
  if (!ops.is_array() || ops.empty()) throw ConfigError("config.operators: expected a non-empty array");
  for (std::size_t i = 0; i < ops.size(); ++i) {
    c.operators.push_back(parse_operator_entry(ops[i], indexed("config.operators", i)));
  }
  c.ratios = field_or(j, "ratios", c.ratios, "config");
  try {
    validate_ratios(c.ratios);
  } catch (const InvalidArgument& err) {
    throw ConfigError(std::string("config.ratios: ") + err.what());
  }
  c.n_perm = field_or(j, "n_perm", c.n_perm, "config");
  if (c.n_perm < 0) throw ConfigError("config.n_perm: must be >= 0");
  c.seed = field_or(j, "seed", c.seed, "config");
  c.output_dir = field_or(j, "output_dir", c.output_dir, "config");
  return c;
}

RunConfig load_run_config(const fs::path& path) { return parse_run_config(read_json(path)); }

Json run_config_to_json(const RunConfig& config) {
  Json j;
  Json exps = Json::array();
  for (const auto& e : config.experiments) exps.push_back(experiment_to_json(e));
  j["experiments"] = exps;
  j["methods"] = config.methods;
  j["attribution"] = {{"noise_fraction", config.attribution.noise_fraction},
                      {"n_samples", config.attribution.n_samples},
                      {"ig_steps", config.attribution.ig_steps},
                      {"target", target_name(config.attribution.target)}};
  Json ops = Json::array();
  for (const auto& op : config.operators) ops.push_back(operator_to_json(op));
  j["operators"] = ops;
  j["ratios"] = config.ratios;
  j["n_perm"] = config.n_perm;
  j["seed"] = config.seed;
  j["output_dir"] = config.output_dir;
  return j;
}

RunConfig resolve_seeds(RunConfig config) {
  for (std::size_t e = 0; e < config.experiments.size(); ++e) {
    ExperimentSpec& x = config.experiments[e];
    if (!x.model.seed) x.model.seed = derive_seed(config.seed, {static_cast<std::uint64_t>(e), kModelSeedTag});
    if (!x.train_seed) x.train_seed = derive_seed(config.seed, {static_cast<std::uint64_t>(e), kTrainSeedTag});
    x.train.seed = *x.train_seed;
  }
  return config;
}

ExperimentSpec shipped_experiment(TaskKind kind) {
  ExperimentSpec e;
  e.name = task_name(kind);
  e.task = shipped_task(kind);
  e.test_per_class = 64;
  e.domains = {matching_domain(kind)};
  e.train.learning_rate = 0.05;
  e.train.epochs = 40;
  e.train.batch_size = 32;
  e.train.weight_decay = 1e-2;
  if (kind == TaskKind::kSpectral) {
    e.model.architecture = "conv1d";
    e.model.filters = 8;
    e.model.kernel = 16;
    e.train.weight_decay = 3e-3;
  }
  return e;
}

RunConfig shipped_run_config() {
  RunConfig c;
  for (TaskKind k : {TaskKind::kSpatial, TaskKind::kTemporal, TaskKind::kSpectral, TaskKind::kGrid}) {
    c.experiments.push_back(shipped_experiment(k));
  }
  c.methods = {"GD", "GI", "SG", "SS", "VG", "IG", "GDA", "GIA", "SGA", "IGA", "RANDOM", "ORACLE"};
  for (OperatorKind k : {OperatorKind::kZeroing, OperatorKind::kMdRoad, OperatorKind::kAim}) {
    OperatorConfig op;
    op.kind = k;
    c.operators.push_back(op);
  }
  c.output_dir = "runs/shipped";
  return c;
}

Model build_model(const ModelSpec& spec, const TaskSpec& task) {
  const std::uint64_t seed = spec.seed.value_or(0);
  if (spec.architecture == "conv1d") {
    if (spec.kernel > task.time) throw ConfigError("model.kernel: longer than the input");
    return make_conv1d(task.channels, task.time, spec.filters, spec.kernel, task.classes, seed);
  }
  return make_mlp(task.channels, task.time, spec.hidden1, spec.hidden2, task.classes, seed);
}

TrainedExperiment train_experiment(const ExperimentSpec& spec) {
  if (!spec.model.seed || !spec.train_seed) throw InvalidArgument("experiment seeds are not resolved");
  TrainedExperiment t{spec, make_split(spec.task, spec.test_per_class), build_model(spec.model, spec.task), 0.0, 0.0};
  TrainConfig cfg = spec.train;
  cfg.seed = *spec.train_seed;
  t.model = train(std::move(t.model), t.split.train, cfg);
  t.train_accuracy = *t.model.train_accuracy;
  t.test_accuracy = accuracy(t.model, t.split.test);
  return t;
}

MethodSpec resolve_method(const std::string& tag, const RunConfig& config, const ExperimentSpec& experiment,
                          Domain domain) {
  if (tag == "ORACLE") {
    if (const std::string why = oracle_problem(experiment, domain); !why.empty()) throw ConfigError(why);
    return oracle_attribution(experiment.task);
  }
  AttributionConfig cfg = parse_method(tag);
  cfg.noise_fraction = config.attribution.noise_fraction;
  cfg.n_samples = config.attribution.n_samples;
  cfg.ig_steps = config.attribution.ig_steps;
  cfg.target = config.attribution.target;
  return cfg;
}

std::string compatibility_matrix(const RunConfig& config) {
  std::ostringstream out;
  for (const auto& e : config.experiments) {
    const MaskingContext ctx = context_for(e.task);
    out << e.name << " (" << task_name(e.task.kind) << ")\n" << pad("", 10);
    for (Domain d : {Domain::kSpatial, Domain::kTemporal, Domain::kSpectral, Domain::kGrid}) {
      out << pad(domain_name(d), 10);
    }
    out << "\n";
    for (const auto& op : config.operators) {
      out << pad(operator_name(op.kind), 10);
      for (Domain d : {Domain::kSpatial, Domain::kTemporal, Domain::kSpectral, Domain::kGrid}) {
        out << pad(incompatibility(op.kind, d, ctx).empty() ? "ok" : "--", 10);
      }
      out << "\n";
    }
  }
  return out.str();
}

void check_compatibility(const RunConfig& config) {
  std::ostringstream problems;
  for (const auto& e : config.experiments) {
    const MaskingContext ctx = context_for(e.task);
    for (const auto& op : config.operators) {
      for (Domain d : e.domains) {
        if (const std::string why = incompatibility(op.kind, d, ctx); !why.empty()) {
          problems << "  " << e.name << ": " << operator_name(op.kind) << " x " << domain_name(d) << ": " << why << "\n";
        }
      }
    }
    if (std::find(config.methods.begin(), config.methods.end(), "ORACLE") != config.methods.end()) {
      for (Domain d : e.domains) {
        if (const std::string why = oracle_problem(e, d); !why.empty()) {
          problems << "  " << e.name << ": ORACLE x " << domain_name(d) << ": " << why << "\n";
        }
      }
    }
  }
  if (!problems.str().empty()) {
    throw ConfigError("incompatible operator/domain pairs:\n" + problems.str() + "compatibility matrix:\n" +
                      compatibility_matrix(config));
  }
}

std::string cell_file_stem(const CellResult& cell, const std::string& method) {
  return cell.experiment + "__" + lower(operator_name(cell.op)) + "__" + domain_name(cell.domain) + "__" +
         lower(method);
}

std::vector<TrainedExperiment> cmd_train(const RunConfig& config, const fs::path& out, std::ostream& log) {
  const RunConfig resolved = resolve_seeds(config);
  std::vector<TrainedExperiment> trained;
  Json summary;
  summary["schema_version"] = kRunSchemaVersion;
  summary["tool_version"] = kToolVersion;
  Json rows = Json::array();
  for (const auto& e : resolved.experiments) {
    trained.push_back(train_experiment(e));
    const TrainedExperiment& t = trained.back();
    const fs::path model_path = out / "models" / (e.name + ".json");
    save_model(model_path, t.model);
    save_dataset(out / "data" / (e.name + "_train.csv"), t.split.train, e.task);
    TaskSpec test_spec = e.task;
    test_spec.samples_per_class = e.test_per_class;
    save_dataset(out / "data" / (e.name + "_test.csv"), t.split.test, test_spec);
    log << e.name << ": train accuracy " << fixed(t.train_accuracy) << ", test accuracy "
        << fixed(t.test_accuracy) << "\n";
    rows.push_back({{"name", e.name},
                    {"train_accuracy", t.train_accuracy},
                    {"test_accuracy", t.test_accuracy},
                    {"model_file", "models/" + e.name + ".json"},
                    {"model_sha256", sha256_file(model_path)}});
  }
  summary["experiments"] = rows;
  summary["config"] = run_config_to_json(resolved);
  write_json(out / "train_metrics.json", summary);
  return trained;
}

EvaluateResult cmd_evaluate(const RunConfig& config, const fs::path& out, std::ostream& log) {
  check_compatibility(config);
  const RunConfig resolved = resolve_seeds(config);
  EvaluateResult result;
  Json metrics_curves = Json::array();
  Json calibrations = Json::array();
  Json experiments_json = Json::array();
  Json seeds_json = Json::array();
  std::string index = "experiment,operator,domain,method,file,acc0,acc_full\n";

  for (std::size_t ei = 0; ei < resolved.experiments.size(); ++ei) {
    const ExperimentSpec& e = resolved.experiments[ei];
    result.experiments.push_back(train_experiment(e));
    const TrainedExperiment& t = result.experiments.back();
    save_model(out / "models" / (e.name + ".json"), t.model);
    log << e.name << ": test accuracy " << fixed(t.test_accuracy) << "\n";
    experiments_json.push_back({{"name", e.name},
                                {"train_accuracy", t.train_accuracy},
                                {"test_accuracy", t.test_accuracy},
                                {"model_file", "models/" + e.name + ".json"}});
    Json cell_seeds = Json::array();
    for (const OperatorConfig& op : resolved.operators) {
      for (Domain domain : e.domains) {
        CellResult cell;
        cell.experiment = e.name;
        cell.op = op.kind;
        cell.domain = domain;
        cell.seed = cell_seed(resolved, ei, op.kind, domain);
        cell_seeds.push_back({{"operator", operator_name(op.kind)}, {"domain", domain_name(domain)}, {"seed", cell.seed}});
        const PreparedOperator prepared = prepare_operator(t.model, t.split.test, op, domain, cell.seed);
        cell.calibration = prepared.calibration;
        if (prepared.calibration) {
          calibrations.push_back({{"experiment", e.name},
                                  {"operator", operator_name(op.kind)},
                                  {"domain", domain_name(domain)},
                                  {"epsilon", prepared.calibration->epsilon},
                                  {"chance", prepared.calibration->chance},
                                  {"epsilons", prepared.calibration->epsilons},
                                  {"accuracies", prepared.calibration->accuracies}});
        }
        for (const std::string& tag : resolved.methods) {
          const MethodSpec method = resolve_method(tag, resolved, e, domain);
          DegradationCurve curve = run_curve(t.model, t.split.test, method, prepared, resolved.ratios,
                                             derive_seed(cell.seed, {fnv1a(tag)}));
          curve.meta.model = e.model.architecture;
          cell.methods.push_back(tag);
          const std::string file = "curves/" + cell_file_stem(cell, tag) + ".csv";
          write_text_atomic(out / file, curve_csv(curve));
          index += e.name + "," + operator_name(op.kind) + "," + domain_name(domain) + "," + tag + "," + file + "," +
                   format_double(curve.acc0) + "," + format_double(curve.acc_full) + "\n";
          cell.curve_files.push_back(file);
          Json row = curve_meta_json(cell, cell.methods.size() - 1);
          row["file"] = file;
          row["acc0"] = curve.acc0;
          row["acc_full"] = curve.acc_full;
          try {
            const AreaMetrics m = area_metrics(curve);
            cell.metrics.emplace_back(m);
            cell.degenerate.emplace_back();
            row["metrics"] = area_json(m);
          } catch (const DegenerateError& err) {
            cell.metrics.emplace_back(std::nullopt);
            cell.degenerate.emplace_back(err.what());
            row["metrics"] = nullptr;
            row["degenerate"] = err.what();
          }
          metrics_curves.push_back(row);
          cell.curves.push_back(std::move(curve));
        }
        if (cell.curves.size() >= 2) cell.consistency = ranking_consistency(cell.curves);
        if (resolved.n_perm > 0) {
          try {
            cell.bias = random_bias(t.model, t.split.test, prepared, resolved.ratios, resolved.n_perm,
                                    derive_seed(cell.seed, {0xb1a5}));
          } catch (const DegenerateError& err) {
            log << "  random bias skipped: " << err.what() << "\n";
          }
        }
        log << "  " << operator_name(op.kind) << " x " << domain_name(domain) << ": acc0 " << fixed(prepared.acc0)
            << ", acc_full " << fixed(prepared.acc_full);
        if (cell.bias) log << ", random ABC " << fixed(cell.bias->mean) << " +- " << fixed(cell.bias->std);
        log << "\n";
        result.cells.push_back(std::move(cell));
      }
    }
    seeds_json.push_back({{"experiment", e.name},
                          {"data", e.task.seed},
                          {"test_data", derive_seed(e.task.seed, {0x7e57})},
                          {"model_init", *e.model.seed},
                          {"train", *e.train_seed},
                          {"cells", cell_seeds}});
  }
  write_text_atomic(out / "curves" / "index.csv", index);

  Json metrics;
  metrics["schema_version"] = kRunSchemaVersion;
  metrics["experiments"] = experiments_json;
  metrics["curves"] = metrics_curves;
  metrics["calibration"] = calibrations;
  write_json(out / "metrics.json", metrics);

  Json bias_json = Json::array();
  Json consistency_json = Json::array();
  std::map<std::pair<std::string, std::string>, std::vector<AreaMetrics>> per_method;
  for (const CellResult& c : result.cells) {
    const Json where = {{"experiment", c.experiment}, {"operator", operator_name(c.op)}, {"domain", domain_name(c.domain)}};
    if (c.bias) {
      Json b = where;
      b["n_perm"] = c.bias->n_perm();
      b["mean"] = c.bias->mean;
      b["std"] = c.bias->std;
      b["within_clt_band"] = c.bias->within_clt_band();
      b["abc"] = c.bias->abc;
      bias_json.push_back(b);
    }
    if (c.consistency) {
      Json r = where;
      r["methods"] = c.methods;
      r["ratios"] = c.consistency->ratios;
      r["rho"] = c.consistency->rho;
      r["degenerate"] = c.consistency->degenerate;
      r["mean_rho"] = c.consistency->mean_rho;
      Json mr = Json::array(), lr = Json::array();
      for (const Vector& v : c.consistency->morf_ranks) mr.push_back(std::vector<double>(v.data(), v.data() + v.size()));
      for (const Vector& v : c.consistency->lerf_ranks) lr.push_back(std::vector<double>(v.data(), v.data() + v.size()));
      r["morf_ranks"] = mr;
      r["lerf_ranks"] = lr;
      consistency_json.push_back(r);
    }
    for (std::size_t m = 0; m < c.methods.size(); ++m) {
      if (c.metrics[m]) per_method[{operator_name(c.op), c.methods[m]}].push_back(*c.metrics[m]);
    }
  }
  Json stability_json = Json::array();
  for (const auto& [key, values] : per_method) {
    const AreaMetrics s = stability(values);
    stability_json.push_back({{"operator", key.first},
                              {"method", key.second},
                              {"configurations", values.size()},
                              {"aoc_std", s.aoc},
                              {"abc_std", s.abc},
                              {"auc_std", s.auc}});
  }
  Json reliability;
  reliability["schema_version"] = kRunSchemaVersion;
  reliability["random_bias"] = bias_json;
  reliability["consistency"] = consistency_json;
  reliability["stability"] = stability_json;
  write_json(out / "reliability.json", reliability);

  Json files = Json::array();
  std::vector<fs::path> paths;
  for (const auto& entry : fs::recursive_directory_iterator(out)) {
    if (entry.is_regular_file() && entry.path().filename() != "manifest.json") paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  for (const fs::path& p : paths) {
    files.push_back({{"path", fs::relative(p, out).generic_string()},
                     {"bytes", fs::file_size(p)},
                     {"sha256", sha256_file(p)}});
  }
  Json manifest;
  manifest["schema_version"] = kRunSchemaVersion;
  manifest["tool_version"] = kToolVersion;
  manifest["config"] = run_config_to_json(resolved);
  manifest["seeds"] = {{"run", resolved.seed}, {"experiments", seeds_json}};
  manifest["files"] = files;
  write_json(out / "manifest.json", manifest);
  return result;
}

RunConfig config_from_manifest(const fs::path& manifest_path) {
  const Json m = read_json(manifest_path);
  return parse_run_config(require_field(m, "config", manifest_path.string()));
}

Report build_report(const fs::path& run_dir) {
  if (!fs::is_directory(run_dir)) throw NotFoundError("run directory not found: " + run_dir.string());
  const fs::path index_path = run_dir / "curves" / "index.csv";
  if (!fs::exists(index_path)) throw NotFoundError("no curves/index.csv in " + run_dir.string());

  struct Entry {
    std::string experiment, op, domain, method;
    DegradationCurve curve;
  };
  std::vector<Entry> entries;
  std::istringstream in(read_text(index_path));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7) throw ConfigError(index_path.string() + ": malformed row '" + line + "'");
    Entry e{cells[0], cells[1], cells[2], cells[3], {}};
    e.curve = parse_curve_csv(read_text(run_dir / cells[4]), cells[4]);
    e.curve.acc0 = std::stod(cells[5]);
    e.curve.acc_full = std::stod(cells[6]);
    e.curve.meta = {e.method, e.op, e.domain, "", 0};
    entries.push_back(std::move(e));
  }

  std::vector<std::string> op_order;
  for (const Entry& e : entries) {
    if (std::find(op_order.begin(), op_order.end(), e.op) == op_order.end()) op_order.push_back(e.op);
  }
  Json reliability;
  if (fs::exists(run_dir / "reliability.json")) reliability = read_json(run_dir / "reliability.json");

  Report report;
  std::ostringstream text;
  std::string csv = "section,operator,method,metric,mean,std,n\n";
  auto csv_row = [&](const std::string& section, const std::string& op, const std::string& method,
                     const std::string& metric, double mean, double std, Index n) {
    csv += section + "," + op + "," + method + "," + metric + "," + format_double(mean) + "," + format_double(std) +
           "," + std::to_string(n) + "\n";
  };
  for (const std::string& op : op_order) {
    OperatorSummary s;
    s.op = op;
    std::vector<std::string> method_order;
    std::map<std::string, std::vector<AreaMetrics>> values;
    std::map<std::tuple<std::string, std::string>, std::vector<DegradationCurve>> cells;
    for (const Entry& e : entries) {
      if (e.op != op) continue;
      if (std::find(method_order.begin(), method_order.end(), e.method) == method_order.end()) {
        method_order.push_back(e.method);
      }
      cells[{e.experiment, e.domain}].push_back(e.curve);
      try {
        values[e.method].push_back(area_metrics(e.curve));
      } catch (const DegenerateError&) {
      }
    }
    for (const std::string& m : method_order) {
      MethodSummary ms;
      ms.method = m;
      const auto& v = values[m];
      ms.configurations = static_cast<Index>(v.size());
      if (!v.empty()) {
        for (const AreaMetrics& a : v) {
          ms.mean.aoc += a.aoc / static_cast<double>(v.size());
          ms.mean.abc += a.abc / static_cast<double>(v.size());
          ms.mean.auc += a.auc / static_cast<double>(v.size());
        }
        ms.std = stability(v);
      }
      s.methods.push_back(ms);
    }
    // Reference maps compete only when nothing else was evaluated.
    double best = -std::numeric_limits<double>::infinity();
    const bool only_reference = std::all_of(s.methods.begin(), s.methods.end(), [](const MethodSummary& m) {
      return m.method == "RANDOM" || m.method == "ORACLE";
    });
    for (const MethodSummary& m : s.methods) {
      if (m.configurations == 0) continue;
      if (!only_reference && (m.method == "RANDOM" || m.method == "ORACLE")) continue;
      if (m.mean.abc > best) {
        best = m.mean.abc;
        s.most_faithful = m.method;
      }
    }
    std::vector<double> pooled;
    if (reliability.contains("random_bias")) {
      for (const Json& b : reliability["random_bias"]) {
        if (b.at("operator").get<std::string>() != op) continue;
        for (const Json& v : b.at("abc")) pooled.push_back(v.get<double>());
      }
    }
    if (!pooled.empty()) s.random_bias = summarize_bias(pooled);
    std::vector<double> rhos;
    for (const auto& [key, curves] : cells) {
      if (curves.size() >= 2) rhos.push_back(ranking_consistency(curves).mean_rho);
    }
    if (!rhos.empty()) {
      double mean = 0.0;
      for (double r : rhos) mean += r / static_cast<double>(rhos.size());
      s.consistency_mean = mean;
      s.consistency_std = stability(rhos);
      s.consistency_cells = static_cast<Index>(rhos.size());
    }

    text << "Operator " << op << "\n";
    text << pad("method", 10) << pad("n", 4) << pad("AOC", 20) << pad("ABC", 20) << "AUC\n";
    for (const MethodSummary& m : s.methods) {
      text << pad(m.method, 10) << pad(std::to_string(m.configurations), 4);
      if (m.configurations == 0) {
        text << "degenerate\n";
        continue;
      }
      text << pad(fixed(m.mean.aoc) + " +- " + fixed(m.std.aoc), 20) << pad(fixed(m.mean.abc) + " +- " + fixed(m.std.abc), 20)
           << fixed(m.mean.auc) + " +- " + fixed(m.std.auc) << "\n";
      csv_row("metrics", op, m.method, "aoc", m.mean.aoc, m.std.aoc, m.configurations);
      csv_row("metrics", op, m.method, "abc", m.mean.abc, m.std.abc, m.configurations);
      csv_row("metrics", op, m.method, "auc", m.mean.auc, m.std.auc, m.configurations);
    }
    text << "most faithful by ABC: " << (s.most_faithful.empty() ? "none" : s.most_faithful) << "\n";
    if (!s.most_faithful.empty()) csv += "most_faithful," + op + "," + s.most_faithful + ",abc,,,\n";
    if (s.random_bias) {
      text << "random-bias ABC: " << fixed(s.random_bias->mean) << " +- " << fixed(s.random_bias->std) << " over "
           << s.random_bias->n_perm() << " permutations\n";
      csv_row("random_bias", op, "RANDOM", "abc", s.random_bias->mean, s.random_bias->std, s.random_bias->n_perm());
    }
    if (s.consistency_mean) {
      text << "consistency rho: " << fixed(*s.consistency_mean) << " +- " << fixed(s.consistency_std) << " over "
           << s.consistency_cells << " configurations\n";
      csv_row("consistency", op, "", "rho", *s.consistency_mean, s.consistency_std, s.consistency_cells);
    }
    text << "\n";
    report.operators.push_back(std::move(s));
  }
  report.text = text.str();
  report.csv = csv;
  return report;
}

Report cmd_report(const fs::path& run_dir, const std::optional<fs::path>& out) {
  Report r = build_report(run_dir);
  const fs::path dest = out.value_or(run_dir);
  write_text_atomic(dest / "report.txt", r.text);
  write_text_atomic(dest / "report.csv", r.csv);
  return r;
}

SignDistortion cmd_demo_sign_distortion(const fs::path& out, double frequency, double sampling_rate,
                                        Index resolution) {
  const SignDistortion d = sign_distortion(frequency, sampling_rate, resolution);
  std::string trace = "t,signed,absolute\n";
  for (Index i = 0; i < d.time.size(); ++i) {
    trace += format_double(d.time(i)) + "," + format_double(d.signed_trace(i)) + "," +
             format_double(d.absolute_trace(i)) + "\n";
  }
  write_text_atomic(out / "trace.csv", trace);
  std::string spectrum = "frequency,signed_amplitude,absolute_amplitude\n";
  for (Index f = 0; f < d.frequencies.size(); ++f) {
    spectrum += format_double(d.frequencies(f)) + "," + format_double(d.signed_amplitude(f)) + "," +
                format_double(d.absolute_amplitude(f)) + "\n";
  }
  write_text_atomic(out / "spectrum.csv", spectrum);

  // Two stacked panels: traces over time, amplitude spectra up to 5x the
  // trace frequency.
  constexpr double kW = 720, kH = 220, kPad = 40;
  auto polyline = [&](const Vector& xs, const Vector& ys, double x_max, double y_min, double y_max, double top,
                      const char* color) {
    std::string pts;
    for (Index i = 0; i < xs.size(); ++i) {
      if (xs(i) > x_max) break;
      const double px = kPad + (kW - 2 * kPad) * xs(i) / x_max;
      const double py = top + kH - kPad - (kH - 2 * kPad) * (ys(i) - y_min) / (y_max - y_min);
      pts += fixed(px, 2) + "," + fixed(py, 2) + " ";
    }
    return "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
  };
  const double t_max = std::min(d.time(d.time.size() - 1), 3.0 / frequency);
  const double f_max = std::min(d.frequencies(d.frequencies.size() - 1), 5.0 * frequency);
  const double a_max = std::max(d.signed_amplitude.tail(d.signed_amplitude.size() - 1).maxCoeff(),
                                d.absolute_amplitude.maxCoeff());
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"440\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"720\" height=\"440\" fill=\"white\"/>\n";
  svg += "<text x=\"40\" y=\"20\">saliency trace: signed (blue) and absolute (red)</text>\n";
  svg += polyline(d.time, d.signed_trace, t_max, -1.05, 1.05, 0, "#1f77b4");
  svg += polyline(d.time, d.absolute_trace, t_max, -1.05, 1.05, 0, "#d62728");
  svg += "<text x=\"40\" y=\"240\">amplitude spectrum; signed peak " + fixed(d.signed_peak_hz, 1) +
         " Hz, absolute peak " + fixed(d.absolute_peak_hz, 1) + " Hz</text>\n";
  svg += polyline(d.frequencies, d.signed_amplitude, f_max, 0.0, a_max * 1.05, kH, "#1f77b4");
  svg += polyline(d.frequencies, d.absolute_amplitude, f_max, 0.0, a_max * 1.05, kH, "#d62728");
  svg += "</svg>\n";
  write_text_atomic(out / "sign_distortion.svg", svg);
  return d;
}

}  // namespace faithmask
