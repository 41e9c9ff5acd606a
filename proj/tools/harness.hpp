// Copyright 2026 The liecca Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Experiment harness behind the command-line tool: configuration, the
// generate/fit/eval/compare pipelines, and the report/CSV writers. The
// compare pipeline runs its replicate experiments concurrently; each
// replicate is fully determined by the base seed and its index, so reports
// are byte-identical across runs regardless of scheduling.

#ifndef LIECCA_HARNESS_HPP
#define LIECCA_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "liecca/cca.hpp"
#include "liecca/datagen.hpp"
#include "liecca/io.hpp"

namespace liecca::harness {

/// Exit codes: hard failures throw and map to 1; flagged results (a fit
/// that did not meet tolerance) complete but return 2.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFlagged = 2;

struct ExperimentConfig {
  std::uint64_t seed = 42;
  int n_experiments = 10;
  int n_per_experiment = 1500;
  int k = 1;
  IccaMode mode = IccaMode::Paper;
  double split_ratio = 2.0 / 3.0;

  // Generator settings.
  int horizon = 20;
  double action_std = 0.05;
  double config_sigma2 = 0.02;
  double action_sigma = 0.01;

  // Optimizer settings.
  double fit_tol = 1e-6;
  int fit_max_iter = 200;
  double init_tol = 1e-8;
  int init_max_iter = 300;
  int multistart = 8;

  std::string out_dir = "out";
  std::string method = "icca";  // fit subcommand: icca|cca

  ChainSpec chain() const;
  NoiseSpec noise_for_experiment(int experiment) const;
  IccaOptions icca_options(int experiment) const;
};

/// Parses a flat key = value config file ('#' comments allowed); unknown
/// keys are errors.
ExperimentConfig load_config_file(const std::filesystem::path& path);
/// Applies one key/value pair (shared by the file parser and tests).
void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value);
/// Config echo embedded in reports and manifests.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

struct ScatterRow {
  int index;  // dataset pair index
  double t_star;
  double s_star;
};

struct ExperimentResult {
  int experiment = 0;
  double icca_train_mse = 0.0;
  double icca_test_mse = 0.0;
  double icca_train_mse_intrinsic = 0.0;
  double icca_test_mse_intrinsic = 0.0;
  double cca_train_mse = 0.0;
  double cca_test_mse = 0.0;
  double r2 = 0.0;
  bool converged = true;
  std::vector<std::vector<double>> loss_traces;
  std::vector<ScatterRow> scatter;
  int icca_invariant_violations = 0;  // at 1e-9 over test reconstructions
  int cca_manifold_violations = 0;    // at 1e-3 over test reconstructions
  int test_count = 0;
};

struct ComparisonReport {
  std::vector<ExperimentResult> experiments;
  double icca_train_mse = 0.0;
  double icca_test_mse = 0.0;
  double cca_train_mse = 0.0;
  double cca_test_mse = 0.0;
  double improvement_train = 0.0;  // (cca - icca) / cca
  double improvement_test = 0.0;
  double gap_icca = 0.0;  // (test - train) / train
  double gap_cca = 0.0;
  double r2_first_pair = 0.0;  // mean over experiments
  bool all_converged = true;
};

/// One replicate end to end: generate, fit both methods on the training
/// split, evaluate both splits.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const ChainSpec& chain, int experiment);

/// All replicates (concurrently) plus aggregation.
ComparisonReport run_compare(const ExperimentConfig& cfg);

nlohmann::json report_to_json(const ComparisonReport& report,
                              const ExperimentConfig& cfg);
/// Writes report.json, mse.csv, scatter.csv, and loss.csv under out_dir.
void write_report_files(const ComparisonReport& report,
                        const ExperimentConfig& cfg);

/// Subcommand bodies; each returns a process exit code.
int cmd_generate(const ExperimentConfig& cfg, std::ostream& log);
int cmd_fit(const ExperimentConfig& cfg, const std::filesystem::path& dataset,
            std::ostream& log);
int cmd_eval(const std::filesystem::path& dataset,
             const std::filesystem::path& model, std::ostream& out);
int cmd_compare(const ExperimentConfig& cfg, std::ostream& log);
int cmd_smoke(ExperimentConfig cfg, std::ostream& log);

}  // namespace liecca::harness

#endif  // LIECCA_HARNESS_HPP
