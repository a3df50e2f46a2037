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

#ifndef FAITHMASK_RUNNER_HPP_
#define FAITHMASK_RUNNER_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "faithmask/io.hpp"
#include "faithmask/masking.hpp"
#include "faithmask/metrics.hpp"
#include "faithmask/model.hpp"
#include "faithmask/protocol.hpp"
#include "faithmask/sign_distortion.hpp"
#include "faithmask/tasks.hpp"

namespace faithmask {

inline constexpr const char* kToolVersion = "faithmask 0.1.0";

struct ModelSpec {
  std::string architecture = "mlp";  // "mlp" or "conv1d"
  Index hidden1 = 32;
  Index hidden2 = 16;
  Index filters = 8;
  Index kernel = 16;
  // Derived from the run seed when unset.
  std::optional<std::uint64_t> seed;
};

struct ExperimentSpec {
  std::string name;
  TaskSpec task;
  Index test_per_class = 64;
  ModelSpec model;
  TrainConfig train;
  // Derived from the run seed when unset.
  std::optional<std::uint64_t> train_seed;
  std::vector<Domain> domains;
};

struct RunConfig {
  std::vector<ExperimentSpec> experiments;
  // Method tags ("GD", "IGA", "RANDOM", ...) and "ORACLE" for the task's
  // planted-feature indicator.
  std::vector<std::string> methods;
  // Shared SG/SS/VG/IG parameters.
  AttributionConfig attribution;
  std::vector<OperatorConfig> operators;
  std::vector<double> ratios = default_ratios();
  // Random-attribution permutations per cell; 0 skips the bias estimate.
  Index n_perm = 200;
  std::uint64_t seed = 2026;
  std::string output_dir = "runs/default";
};

// Parses a run configuration. Diagnostics name the offending field, e.g.
// "experiments[1].train.epochs: must be >= 1".
RunConfig parse_run_config(const Json& j);
RunConfig load_run_config(const std::filesystem::path& path);
// Every default and derived seed written out explicitly.
Json run_config_to_json(const RunConfig& config);
// Fills unset model and training seeds from the run seed.
RunConfig resolve_seeds(RunConfig config);

// Four experiments (spatial, temporal, spectral, grid) in their matching
// domains under ZEROING, MDROAD and AIM.
RunConfig shipped_run_config();
ExperimentSpec shipped_experiment(TaskKind kind);

Model build_model(const ModelSpec& spec, const TaskSpec& task);

struct TrainedExperiment {
  ExperimentSpec spec;
  TaskSplit split;
  Model model;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
};
// `spec` must have resolved seeds.
TrainedExperiment train_experiment(const ExperimentSpec& spec);

// Method list entry for one experiment and domain.
MethodSpec resolve_method(const std::string& tag, const RunConfig& config,
                          const ExperimentSpec& experiment, Domain domain);

// Rows: operators. Columns: domains. One block per experiment.
std::string compatibility_matrix(const RunConfig& config);
// Throws ConfigError listing every incompatible (experiment, operator,
// domain) triple together with the matrix.
void check_compatibility(const RunConfig& config);

// One (experiment, operator, domain) combination.
struct CellResult {
  std::string experiment;
  OperatorKind op = OperatorKind::kZeroing;
  Domain domain = Domain::kSpatial;
  std::uint64_t seed = 0;
  std::vector<std::string> methods;
  std::vector<DegradationCurve> curves;
  std::vector<std::optional<AreaMetrics>> metrics;
  std::vector<std::string> degenerate;
  std::vector<std::string> curve_files;
  std::optional<RandomBias> bias;
  std::optional<ConsistencyResult> consistency;
  std::optional<CalibrationResult> calibration;
};

struct EvaluateResult {
  std::vector<TrainedExperiment> experiments;
  std::vector<CellResult> cells;
};

std::string cell_file_stem(const CellResult& cell, const std::string& method);

// Trains every experiment and writes models/<name>.json plus
// train_metrics.json under `out`.
std::vector<TrainedExperiment> cmd_train(const RunConfig& config, const std::filesystem::path& out,
                                         std::ostream& log);

// Full evaluation matrix. Writes models/, curves/*.csv, curves/index.csv,
// metrics.json, reliability.json and finally manifest.json.
EvaluateResult cmd_evaluate(const RunConfig& config, const std::filesystem::path& out,
                            std::ostream& log);
// Replays the resolved configuration stored in a manifest.
RunConfig config_from_manifest(const std::filesystem::path& manifest_path);

struct MethodSummary {
  std::string method;
  Index configurations = 0;
  AreaMetrics mean;
  AreaMetrics std;
};
struct OperatorSummary {
  std::string op;
  std::vector<MethodSummary> methods;
  std::string most_faithful;
  // All permutations of every cell pooled.
  std::optional<RandomBias> random_bias;
  // Mean over cells of the mean Spearman rho, with its std.
  std::optional<double> consistency_mean;
  double consistency_std = 0.0;
  Index consistency_cells = 0;
};
struct Report {
  std::vector<OperatorSummary> operators;
  std::string text;
  std::string csv;
};
// Rebuilds every number from the persisted raw curves and permutation
// values of a run directory. Throws NotFoundError for a missing run.
Report build_report(const std::filesystem::path& run_dir);
// Writes report.txt and report.csv into `out` (the run directory by
// default) and returns the report.
Report cmd_report(const std::filesystem::path& run_dir, const std::optional<std::filesystem::path>& out);

// trace.csv (resolution rows), spectrum.csv and sign_distortion.svg.
SignDistortion cmd_demo_sign_distortion(const std::filesystem::path& out, double frequency,
                                        double sampling_rate, Index resolution);

}  // namespace faithmask

#endif  // FAITHMASK_RUNNER_HPP_
