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

#include "harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "liecca/stats.hpp"

namespace liecca::harness {

namespace fs = std::filesystem;
using nlohmann::json;

ChainSpec ExperimentConfig::chain() const {
  return make_hand_spec(seed, horizon, action_std);
}

NoiseSpec ExperimentConfig::noise_for_experiment(int experiment) const {
  return NoiseSpec{config_sigma2, action_sigma,
                   seed + 1 + static_cast<std::uint64_t>(experiment)};
}

IccaOptions ExperimentConfig::icca_options(int experiment) const {
  IccaOptions opts;
  opts.tol = fit_tol;
  opts.max_iter = fit_max_iter;
  opts.mode = mode;
  opts.sphere.tol = init_tol;
  opts.sphere.max_iter = init_max_iter;
  opts.sphere.multistart = multistart;
  opts.sphere.seed =
      seed + 100003ull * (static_cast<std::uint64_t>(experiment) + 1);
  return opts;
}

void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value) {
  try {
    if (key == "seed") {
      cfg.seed = std::stoull(value);
    } else if (key == "experiments") {
      cfg.n_experiments = std::stoi(value);
    } else if (key == "n") {
      cfg.n_per_experiment = std::stoi(value);
    } else if (key == "k") {
      cfg.k = std::stoi(value);
    } else if (key == "mode") {
      cfg.mode = icca_mode_from_string(value);
    } else if (key == "split_ratio") {
      cfg.split_ratio = std::stod(value);
    } else if (key == "horizon") {
      cfg.horizon = std::stoi(value);
    } else if (key == "action_std") {
      cfg.action_std = std::stod(value);
    } else if (key == "config_sigma2") {
      cfg.config_sigma2 = std::stod(value);
    } else if (key == "action_sigma") {
      cfg.action_sigma = std::stod(value);
    } else if (key == "fit_tol") {
      cfg.fit_tol = std::stod(value);
    } else if (key == "fit_max_iter") {
      cfg.fit_max_iter = std::stoi(value);
    } else if (key == "init_tol") {
      cfg.init_tol = std::stod(value);
    } else if (key == "init_max_iter") {
      cfg.init_max_iter = std::stoi(value);
    } else if (key == "multistart") {
      cfg.multistart = std::stoi(value);
    } else if (key == "out") {
      cfg.out_dir = value;
    } else if (key == "method") {
      if (value != "icca" && value != "cca") {
        throw Error("config: method must be icca or cca");
      }
      cfg.method = value;
    } else {
      throw Error("config: unknown key '" + key + "'");
    }
  } catch (const std::invalid_argument&) {
    throw Error("config: bad value '" + value + "' for key '" + key + "'");
  } catch (const std::out_of_range&) {
    throw Error("config: value out of range for key '" + key + "'");
  }
}

ExperimentConfig load_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path.string());
  ExperimentConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) {
        throw Error("config " + path.string() + ":" + std::to_string(line_no) +
                    ": expected key = value");
      }
      continue;
    }
    auto trim = [](std::string s) {
      const size_t a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      const size_t b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw Error("config " + path.string() + ":" + std::to_string(line_no) +
                  ": empty key");
    }
    apply_config_entry(cfg, key, value);
  }
  return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
  return json{{"seed", cfg.seed},
              {"experiments", cfg.n_experiments},
              {"n", cfg.n_per_experiment},
              {"k", cfg.k},
              {"mode", to_string(cfg.mode)},
              {"split_ratio", cfg.split_ratio},
              {"horizon", cfg.horizon},
              {"action_std", cfg.action_std},
              {"config_sigma2", cfg.config_sigma2},
              {"action_sigma", cfg.action_sigma},
              {"fit_tol", cfg.fit_tol},
              {"fit_max_iter", cfg.fit_max_iter},
              {"init_tol", cfg.init_tol},
              {"init_max_iter", cfg.init_max_iter},
              {"multistart", cfg.multistart}};
}

namespace {

std::vector<Eigen::VectorXd> embeddings(std::span<const GroupElement> pts) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(pts.size());
  for (const GroupElement& p : pts) out.push_back(p.embedding());
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const ChainSpec& chain, int experiment) {
  const PairedDataset ds = generate(chain, cfg.noise_for_experiment(experiment),
                                    cfg.n_per_experiment, cfg.split_ratio);
  const std::vector<GroupElement> train_x = ds.train_x();
  const std::vector<GroupElement> train_y = ds.train_y();
  const std::vector<GroupElement> test_x = ds.test_x();
  const std::vector<GroupElement> test_y = ds.test_y();

  const IccaFit icca = fit_icca(train_x, train_y, cfg.k,
                                cfg.icca_options(experiment));
  const EuclideanCcaModel cca =
      fit_euclidean_cca(embeddings(train_x), embeddings(train_y), cfg.k);

  ExperimentResult result;
  result.experiment = experiment;
  result.loss_traces = icca.model.loss_traces;
  result.r2 = icca.model.pairs.empty()
                  ? 0.0
                  : icca.model.pairs[0].regression.r_squared;
  result.converged = !icca.model.pair_converged.empty();
  for (bool c : icca.model.pair_converged) result.converged = result.converged && c;
  result.test_count = static_cast<int>(test_x.size());

  if (!icca.pair_times.empty()) {
    const TimePairs& times = icca.pair_times[0];
    result.scatter.reserve(times.t_star.size());
    for (size_t j = 0; j < times.t_star.size(); ++j) {
      result.scatter.push_back(
          ScatterRow{ds.train_idx[j], times.t_star[j], times.s_star[j]});
    }
  }

  auto eval_split = [&](const std::vector<GroupElement>& xs,
                        const std::vector<GroupElement>& ys, bool is_test) {
    std::vector<GroupElement> icca_recon;
    std::vector<Eigen::VectorXd> cca_recon;
    icca_recon.reserve(xs.size());
    cca_recon.reserve(xs.size());
    for (const GroupElement& x : xs) {
      GroupElement r = reconstruct(x, icca.model);
      if (is_test && !r.satisfies_invariants(1e-9)) {
        ++result.icca_invariant_violations;
      }
      icca_recon.push_back(std::move(r));
      Eigen::VectorXd c = reconstruct(x.embedding(), cca);
      if (is_test &&
          ambient_manifold_defect(chain.structure, c) > 1e-3) {
        ++result.cca_manifold_violations;
      }
      cca_recon.push_back(std::move(c));
    }
    const double icca_amb = mse_ambient(icca_recon, ys);
    const double icca_intr = mse_intrinsic(icca_recon, ys);
    const double cca_amb = mse_ambient(cca_recon, ys);
    if (is_test) {
      result.icca_test_mse = icca_amb;
      result.icca_test_mse_intrinsic = icca_intr;
      result.cca_test_mse = cca_amb;
    } else {
      result.icca_train_mse = icca_amb;
      result.icca_train_mse_intrinsic = icca_intr;
      result.cca_train_mse = cca_amb;
    }
  };
  eval_split(train_x, train_y, false);
  eval_split(test_x, test_y, true);
  return result;
}

ComparisonReport run_compare(const ExperimentConfig& cfg) {
  const ChainSpec chain = cfg.chain();
  ComparisonReport report;
  report.experiments.resize(static_cast<size_t>(cfg.n_experiments));

  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto worker = [&]() {
    for (;;) {
      const int e = next.fetch_add(1);
      if (e >= cfg.n_experiments) return;
      try {
        report.experiments[static_cast<size_t>(e)] =
            run_experiment(cfg, chain, e);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  const int workers = std::max(
      1, std::min<int>(cfg.n_experiments,
                       static_cast<int>(std::thread::hardware_concurrency())));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  const double n = static_cast<double>(cfg.n_experiments);
  for (const ExperimentResult& r : report.experiments) {
    report.icca_train_mse += r.icca_train_mse / n;
    report.icca_test_mse += r.icca_test_mse / n;
    report.cca_train_mse += r.cca_train_mse / n;
    report.cca_test_mse += r.cca_test_mse / n;
    report.r2_first_pair += r.r2 / n;
    report.all_converged = report.all_converged && r.converged;
  }
  report.improvement_train =
      (report.cca_train_mse - report.icca_train_mse) / report.cca_train_mse;
  report.improvement_test =
      (report.cca_test_mse - report.icca_test_mse) / report.cca_test_mse;
  report.gap_icca =
      (report.icca_test_mse - report.icca_train_mse) / report.icca_train_mse;
  report.gap_cca =
      (report.cca_test_mse - report.cca_train_mse) / report.cca_train_mse;
  return report;
}

json report_to_json(const ComparisonReport& report,
                    const ExperimentConfig& cfg) {
  json experiments = json::array();
  for (const ExperimentResult& r : report.experiments) {
    const double imp_train = (r.cca_train_mse - r.icca_train_mse) / r.cca_train_mse;
    const double imp_test = (r.cca_test_mse - r.icca_test_mse) / r.cca_test_mse;
    experiments.push_back(
        json{{"experiment", r.experiment},
             {"icca_train_mse", r.icca_train_mse},
             {"icca_test_mse", r.icca_test_mse},
             {"icca_train_mse_intrinsic", r.icca_train_mse_intrinsic},
             {"icca_test_mse_intrinsic", r.icca_test_mse_intrinsic},
             {"cca_train_mse", r.cca_train_mse},
             {"cca_test_mse", r.cca_test_mse},
             {"improvement_train", imp_train},
             {"improvement_test", imp_test},
             {"gap_icca", (r.icca_test_mse - r.icca_train_mse) / r.icca_train_mse},
             {"gap_cca", (r.cca_test_mse - r.cca_train_mse) / r.cca_train_mse},
             {"r2", r.r2},
             {"converged", r.converged},
             {"icca_invariant_violations", r.icca_invariant_violations},
             {"cca_manifold_violations", r.cca_manifold_violations},
             {"test_count", r.test_count}});
  }
  return json{{"format_version", 1},
              {"config", config_to_json(cfg)},
              {"experiments", std::move(experiments)},
              {"aggregate",
               json{{"icca_train_mse", report.icca_train_mse},
                    {"icca_test_mse", report.icca_test_mse},
                    {"cca_train_mse", report.cca_train_mse},
                    {"cca_test_mse", report.cca_test_mse},
                    {"improvement_train", report.improvement_train},
                    {"improvement_test", report.improvement_test},
                    {"gap_icca", report.gap_icca},
                    {"gap_cca", report.gap_cca},
                    {"r2_first_pair", report.r2_first_pair},
                    {"all_converged", report.all_converged}}}};
}

void write_report_files(const ComparisonReport& report,
                        const ExperimentConfig& cfg) {
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  write_text_file(dir / "report.json",
                  report_to_json(report, cfg).dump(2) + "\n");

  std::ostringstream mse;
  mse << "experiment,method,split,mse\n";
  for (const ExperimentResult& r : report.experiments) {
    mse << r.experiment << ",icca,train," << format_double(r.icca_train_mse) << "\n";
    mse << r.experiment << ",icca,test," << format_double(r.icca_test_mse) << "\n";
    mse << r.experiment << ",cca,train," << format_double(r.cca_train_mse) << "\n";
    mse << r.experiment << ",cca,test," << format_double(r.cca_test_mse) << "\n";
  }
  write_text_file(dir / "mse.csv", mse.str());

  std::ostringstream scatter;
  scatter << "experiment,i,t_star,s_star\n";
  for (const ExperimentResult& r : report.experiments) {
    for (const ScatterRow& row : r.scatter) {
      scatter << r.experiment << "," << row.index << ","
              << format_double(row.t_star) << "," << format_double(row.s_star)
              << "\n";
    }
  }
  write_text_file(dir / "scatter.csv", scatter.str());

  std::ostringstream loss;
  loss << "experiment,pair,iteration,loss\n";
  for (const ExperimentResult& r : report.experiments) {
    for (size_t pair = 0; pair < r.loss_traces.size(); ++pair) {
      for (size_t it = 0; it < r.loss_traces[pair].size(); ++it) {
        loss << r.experiment << "," << pair << "," << it << ","
             << format_double(r.loss_traces[pair][it]) << "\n";
      }
    }
  }
  write_text_file(dir / "loss.csv", loss.str());
}

int cmd_generate(const ExperimentConfig& cfg, std::ostream& log) {
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  const ChainSpec chain = cfg.chain();
  json files = json::array();
  for (int e = 0; e < cfg.n_experiments; ++e) {
    const PairedDataset ds = generate(chain, cfg.noise_for_experiment(e),
                                      cfg.n_per_experiment, cfg.split_ratio);
    char name[32];
    std::snprintf(name, sizeof(name), "dataset_%02d.jsonl", e);
    save_dataset_jsonl(ds, dir / name);
    char csv_name[32];
    std::snprintf(csv_name, sizeof(csv_name), "dataset_%02d.csv", e);
    write_dataset_csv(ds, dir / csv_name);
    files.push_back(name);
    log << "wrote " << (dir / name).string() << " (" << ds.X.size()
        << " pairs)\n";
  }
  const json manifest{{"format_version", 1},
                      {"config", config_to_json(cfg)},
                      {"files", std::move(files)}};
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
  return kExitOk;
}

int cmd_fit(const ExperimentConfig& cfg, const fs::path& dataset,
            std::ostream& log) {
  const PairedDataset ds = load_dataset_jsonl(dataset);
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  const std::string stem = dataset.stem().string();

  bool flagged = false;
  if (cfg.method == "icca") {
    const IccaFit fit = fit_icca(ds.train_x(), ds.train_y(), cfg.k,
                                 cfg.icca_options(0));
    write_text_file(dir / (stem + "_icca_model.json"),
                    to_json(fit.model).dump(2) + "\n");
    write_loss_csv(fit.model, dir / (stem + "_icca_loss.csv"));
    for (bool c : fit.model.pair_converged) flagged = flagged || !c;
    log << "icca fit: " << fit.model.pairs.size() << " pair(s), final loss "
        << (fit.model.loss_traces.empty() ? 0.0
                                          : fit.model.loss_traces.back().back())
        << (flagged ? " [not converged]" : "") << "\n";
  } else {
    std::vector<Eigen::VectorXd> ex, ey;
    for (const GroupElement& g : ds.train_x()) ex.push_back(g.embedding());
    for (const GroupElement& g : ds.train_y()) ey.push_back(g.embedding());
    const EuclideanCcaModel model = fit_euclidean_cca(ex, ey, cfg.k);
    write_text_file(dir / (stem + "_cca_model.json"),
                    to_json(model).dump(2) + "\n");
    // The baseline solve is closed-form; the loss CSV stays header-only.
    write_text_file(dir / (stem + "_cca_loss.csv"), "pair,iteration,loss\n");
    log << "cca fit: " << model.correlations.size()
        << " component(s), top correlation " << model.correlations[0] << "\n";
  }
  return flagged ? kExitFlagged : kExitOk;
}

int cmd_eval(const fs::path& dataset, const fs::path& model,
             std::ostream& out) {
  const PairedDataset ds = load_dataset_jsonl(dataset);
  const json mj = json::parse(read_text_file(model));

  json result{{"dataset", dataset.filename().string()},
              {"model", model.filename().string()}};
  if (is_icca_model_json(mj)) {
    const IccaModel m = icca_model_from_json(mj);
    if (!(m.structure == ds.spec.structure)) {
      throw StructureMismatch("eval: model and dataset structures differ");
    }
    auto eval_split = [&](const std::vector<GroupElement>& xs,
                          const std::vector<GroupElement>& ys) {
      std::vector<GroupElement> recon;
      recon.reserve(xs.size());
      for (const GroupElement& x : xs) recon.push_back(reconstruct(x, m));
      return json{{"mse_ambient", mse_ambient(recon, ys)},
                  {"mse_intrinsic", mse_intrinsic(recon, ys)}};
    };
    result["method"] = "icca";
    result["train"] = eval_split(ds.train_x(), ds.train_y());
    result["test"] = eval_split(ds.test_x(), ds.test_y());
  } else {
    const EuclideanCcaModel m = euclidean_cca_model_from_json(mj);
    if (m.mean_x.size() != ds.spec.structure.ambient_dim()) {
      throw StructureMismatch("eval: model and dataset structures differ");
    }
    auto eval_split = [&](const std::vector<GroupElement>& xs,
                          const std::vector<GroupElement>& ys) {
      std::vector<Eigen::VectorXd> recon;
      recon.reserve(xs.size());
      for (const GroupElement& x : xs) {
        recon.push_back(reconstruct(x.embedding(), m));
      }
      return json{{"mse_ambient", mse_ambient(recon, ys)}};
    };
    result["method"] = "cca";
    result["train"] = eval_split(ds.train_x(), ds.train_y());
    result["test"] = eval_split(ds.test_x(), ds.test_y());
  }
  out << result.dump(2) << "\n";
  return kExitOk;
}

int cmd_compare(const ExperimentConfig& cfg, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  const ComparisonReport report = run_compare(cfg);
  write_report_files(report, cfg);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  log << "compare: " << cfg.n_experiments << " experiment(s), "
      << cfg.n_per_experiment << " pairs each\n"
      << "  icca test mse " << report.icca_test_mse << " | cca test mse "
      << report.cca_test_mse << " | test improvement "
      << 100.0 * report.improvement_test << "%\n"
      << "  gap icca " << 100.0 * report.gap_icca << "% | gap cca "
      << 100.0 * report.gap_cca << "% | first-pair r2 "
      << report.r2_first_pair << "\n"
      << "  wall clock " << secs << " s; report in " << cfg.out_dir << "\n";
  return report.all_converged ? kExitOk : kExitFlagged;
}

int cmd_smoke(ExperimentConfig cfg, std::ostream& log) {
  cfg.n_experiments = 1;
  cfg.n_per_experiment = 60;
  cfg.k = 1;
  const auto start = std::chrono::steady_clock::now();
  const ComparisonReport report = run_compare(cfg);
  write_report_files(report, cfg);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  bool ok = true;
  auto expect = [&](bool cond, const char* what) {
    log << (cond ? "  ok: " : "  FAIL: ") << what << "\n";
    ok = ok && cond;
  };
  const ExperimentResult& r = report.experiments.at(0);
  expect(std::isfinite(r.icca_test_mse) && r.icca_test_mse >= 0.0,
         "finite icca test mse");
  expect(std::isfinite(r.cca_test_mse) && r.cca_test_mse >= 0.0,
         "finite cca test mse");
  expect(r.icca_invariant_violations == 0,
         "intrinsic reconstructions stay on the manifold");
  expect(!r.scatter.empty(), "scatter rows present");
  expect(fs::exists(fs::path(cfg.out_dir) / "report.json"), "report written");
  log << "smoke finished in " << secs << " s\n";
  if (!ok) return kExitError;
  return report.all_converged ? kExitOk : kExitFlagged;
}

}  // namespace liecca::harness
