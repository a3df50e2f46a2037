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

// Command-line front end: train, evaluate, report, demo-sign-distortion.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "faithmask/runner.hpp"

namespace fs = std::filesystem;
using namespace faithmask;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kNotFound = 3 };

RunConfig load_config(const std::string& config_path, const std::string& manifest_path,
                      const std::optional<std::uint64_t>& seed) {
  RunConfig c;
  if (!manifest_path.empty()) {
    c = config_from_manifest(manifest_path);
  } else if (!config_path.empty()) {
    c = load_run_config(config_path);
  } else {
    throw ConfigError("either --config or --manifest is required");
  }
  if (seed) {
    // A new run seed re-derives every seed that was derived from the old one.
    c.seed = *seed;
    for (auto& e : c.experiments) {
      e.model.seed.reset();
      e.train_seed.reset();
    }
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Faithfulness evaluation of saliency maps under Zeroing, mdROAD and AIM masking"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string config_path, manifest_path, out_dir, run_dir;
  std::optional<std::uint64_t> seed;
  double frequency = 10.0, sampling_rate = 1000.0;
  Index resolution = 1000;

  auto* train = app.add_subcommand("train", "Train every experiment of a run configuration");
  train->add_option("-c,--config", config_path, "Run configuration (JSON)")->required();
  train->add_option("-s,--seed", seed, "Override the run seed");
  train->add_option("-o,--out", out_dir, "Output directory (default: output_dir of the config)");

  auto* evaluate = app.add_subcommand("evaluate", "Run the full methods x operators x domains matrix");
  auto* cfg_opt = evaluate->add_option("-c,--config", config_path, "Run configuration (JSON)");
  evaluate->add_option("-m,--manifest", manifest_path, "Replay the configuration stored in a run manifest")
      ->excludes(cfg_opt);
  evaluate->add_option("-s,--seed", seed, "Override the run seed");
  evaluate->add_option("-o,--out", out_dir, "Output directory (default: output_dir of the config)");

  auto* report = app.add_subcommand("report", "Summarize a run directory");
  report->add_option("run", run_dir, "Run directory written by evaluate")->required();
  report->add_option("-o,--out", out_dir, "Where to write report.txt and report.csv (default: the run directory)");

  auto* demo = app.add_subcommand("demo-sign-distortion", "Spectrum of a signed vs rectified sinusoidal saliency trace");
  demo->add_option("-o,--out", out_dir, "Output directory")->required();
  demo->add_option("--frequency", frequency, "Trace frequency in Hz")->capture_default_str();
  demo->add_option("--sampling-rate", sampling_rate, "Samples per second")->capture_default_str();
  demo->add_option("--resolution", resolution, "Number of samples")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit 0; usage errors share the config exit code.
    app.exit(e);
    return e.get_exit_code() == 0 ? kOk : kConfig;
  }

  try {
    if (*train) {
      const RunConfig c = load_config(config_path, "", seed);
      cmd_train(c, out_dir.empty() ? fs::path(c.output_dir) : fs::path(out_dir), std::cout);
    } else if (*evaluate) {
      const RunConfig c = load_config(config_path, manifest_path, seed);
      const fs::path out = out_dir.empty() ? fs::path(c.output_dir) : fs::path(out_dir);
      std::cout << "compatibility matrix:\n" << compatibility_matrix(c) << "\n";
      cmd_evaluate(c, out, std::cout);
      std::cout << "wrote " << (out / "manifest.json").string() << "\n";
    } else if (*report) {
      const Report r = cmd_report(run_dir, out_dir.empty() ? std::nullopt : std::optional<fs::path>(out_dir));
      std::cout << r.text;
    } else if (*demo) {
      const SignDistortion d = cmd_demo_sign_distortion(out_dir, frequency, sampling_rate, resolution);
      std::cout << "signed trace peak: " << d.signed_peak_hz << " Hz\n"
                << "absolute trace peak: " << d.absolute_peak_hz << " Hz\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const NotFoundError& e) {
    std::cerr << "not found: " << e.what() << "\n";
    return kNotFound;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}
