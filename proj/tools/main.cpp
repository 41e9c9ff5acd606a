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
// liecca command line: generate synthetic paired datasets on the
// articulated-chain group, fit intrinsic or Euclidean CCA models, evaluate
// reconstructions, and run the full comparison pipeline.

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>

#include "harness.hpp"

namespace {

using liecca::harness::ExperimentConfig;

// CLI values only override the config file when the user actually passed
// them, so definition order (file first, flags second) behaves as expected.
struct Overrides {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<int> experiments;
  std::optional<int> n;
  std::optional<int> k;
  std::optional<std::string> mode;
  std::optional<std::string> out;
  std::optional<std::string> method;
};

void add_common_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--config", ov.config, "flat key = value config file");
  cmd->add_option("--seed", ov.seed, "base RNG seed");
  cmd->add_option("--experiments", ov.experiments, "number of replicates");
  cmd->add_option("--n", ov.n, "pairs per experiment");
  cmd->add_option("--k", ov.k, "number of canonical pairs");
  cmd->add_option("--mode", ov.mode, "time-update rule: paper|joint")
      ->check(CLI::IsMember({"paper", "joint"}));
  cmd->add_option("--out", ov.out, "output directory");
  cmd->add_option("--method", ov.method, "fit method: icca|cca")
      ->check(CLI::IsMember({"icca", "cca"}));
}

ExperimentConfig resolve(const Overrides& ov) {
  ExperimentConfig cfg;
  if (ov.config) cfg = liecca::harness::load_config_file(*ov.config);
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.experiments) cfg.n_experiments = *ov.experiments;
  if (ov.n) cfg.n_per_experiment = *ov.n;
  if (ov.k) cfg.k = *ov.k;
  if (ov.mode) cfg.mode = liecca::icca_mode_from_string(*ov.mode);
  if (ov.out) cfg.out_dir = *ov.out;
  if (ov.method) cfg.method = *ov.method;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Structure-preserving canonical correlation analysis on products of "
      "planar and spatial rotations"};
  app.require_subcommand(1);

  Overrides ov;
  std::string dataset_path;
  std::string model_path;

  CLI::App* generate =
      app.add_subcommand("generate", "write synthetic paired datasets");
  add_common_flags(generate, ov);

  CLI::App* fit = app.add_subcommand("fit", "fit a model on a dataset");
  fit->add_option("dataset", dataset_path, "dataset JSONL file")
      ->required()
      ->check(CLI::ExistingFile);
  add_common_flags(fit, ov);

  CLI::App* eval = app.add_subcommand("eval", "evaluate a model on a dataset");
  eval->add_option("dataset", dataset_path, "dataset JSONL file")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("model", model_path, "model JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  add_common_flags(eval, ov);

  CLI::App* compare = app.add_subcommand(
      "compare", "run the full generate/fit/eval comparison pipeline");
  add_common_flags(compare, ov);

  CLI::App* smoke =
      app.add_subcommand("smoke", "tiny end-to-end run with sanity checks");
  add_common_flags(smoke, ov);

  CLI11_PARSE(app, argc, argv);

  try {
    const ExperimentConfig cfg = resolve(ov);
    if (generate->parsed()) {
      return liecca::harness::cmd_generate(cfg, std::cout);
    }
    if (fit->parsed()) {
      return liecca::harness::cmd_fit(cfg, dataset_path, std::cout);
    }
    if (eval->parsed()) {
      return liecca::harness::cmd_eval(dataset_path, model_path, std::cout);
    }
    if (compare->parsed()) {
      return liecca::harness::cmd_compare(cfg, std::cout);
    }
    return liecca::harness::cmd_smoke(cfg, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return liecca::harness::kExitError;
  }
}
