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

#include "liecca/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace liecca {

using nlohmann::json;

namespace {

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(j.size());
  Eigen::Index i = 0;
  for (const auto& entry : j) v[i++] = entry.get<double>();
  return v;
}

json regression_to_json(const TimeRegression& reg) {
  return json{{"slope", reg.slope},
              {"intercept", reg.intercept},
              {"r2", reg.r_squared},
              {"degenerate", reg.degenerate}};
}

TimeRegression regression_from_json(const json& j) {
  TimeRegression reg;
  reg.slope = j.at("slope").get<double>();
  reg.intercept = j.at("intercept").get<double>();
  reg.r_squared = j.value("r2", 0.0);
  reg.degenerate = j.value("degenerate", false);
  return reg;
}

}  // namespace

json to_json(const GroupStructure& structure) {
  json arr = json::array();
  for (BlockKind k : structure.kinds()) arr.push_back(to_string(k));
  return arr;
}

GroupStructure structure_from_json(const json& j) {
  std::vector<BlockKind> kinds;
  kinds.reserve(j.size());
  for (const auto& name : j) {
    kinds.push_back(block_kind_from_string(name.get<std::string>()));
  }
  return GroupStructure(std::move(kinds));
}

json to_json(const GroupElement& element) {
  const GroupStructure& s = element.structure();
  json blocks = json::array();
  for (int b = 0; b < s.block_count(); ++b) {
    const int entries = s.kind(b) == BlockKind::SO2 ? 4 : 9;
    json block = json::array();
    for (int e = 0; e < entries; ++e) {
      block.push_back(element.embedding()[s.ambient_offset(b) + e]);
    }
    blocks.push_back(std::move(block));
  }
  return json{{"structure", to_json(s)}, {"blocks", std::move(blocks)}};
}

GroupElement group_element_from_json(const json& j) {
  GroupStructure s = structure_from_json(j.at("structure"));
  Eigen::VectorXd embedding(s.ambient_dim());
  const json& blocks = j.at("blocks");
  if (static_cast<int>(blocks.size()) != s.block_count()) {
    throw Error("group_element_from_json: block count mismatch");
  }
  for (int b = 0; b < s.block_count(); ++b) {
    const int entries = s.kind(b) == BlockKind::SO2 ? 4 : 9;
    const json& block = blocks[static_cast<size_t>(b)];
    if (static_cast<int>(block.size()) != entries) {
      throw Error("group_element_from_json: block entry count mismatch");
    }
    for (int e = 0; e < entries; ++e) {
      embedding[s.ambient_offset(b) + e] = block[static_cast<size_t>(e)].get<double>();
    }
  }
  return GroupElement::from_embedding(s, std::move(embedding));
}

json to_json(const IccaModel& model) {
  json pairs = json::array();
  for (size_t k = 0; k < model.pairs.size(); ++k) {
    const CanonicalPair& p = model.pairs[k];
    pairs.push_back(json{{"v", vector_to_json(p.v.coords())},
                         {"u", vector_to_json(p.u.coords())},
                         {"slope", p.regression.slope},
                         {"intercept", p.regression.intercept},
                         {"r2", p.regression.r_squared},
                         {"loss", p.pair_loss},
                         {"converged", static_cast<bool>(model.pair_converged[k])},
                         {"degenerate", static_cast<bool>(model.pair_degenerate[k])}});
  }
  json trace = json::array();
  for (const auto& pair_trace : model.loss_traces) {
    for (size_t it = 0; it < pair_trace.size(); ++it) {
      trace.push_back(json::array({it, pair_trace[it]}));
    }
  }
  return json{{"format_version", 1},
              {"mode", to_string(model.mode)},
              {"structure", to_json(model.structure)},
              {"mu_x", to_json(model.mu_x)},
              {"mu_y", to_json(model.mu_y)},
              {"pairs", std::move(pairs)},
              {"loss_trace", std::move(trace)},
              {"early_stopped", model.early_stopped}};
}

IccaModel icca_model_from_json(const json& j) {
  if (j.value("format_version", 0) != 1) {
    throw Error("icca_model_from_json: unsupported format_version");
  }
  GroupStructure s = structure_from_json(j.at("structure"));
  IccaModel model{group_element_from_json(j.at("mu_x")),
                  group_element_from_json(j.at("mu_y")),
                  s,
                  {},
                  {},
                  icca_mode_from_string(j.at("mode").get<std::string>()),
                  {},
                  {},
                  j.value("early_stopped", false)};
  for (const auto& pj : j.at("pairs")) {
    TimeRegression reg;
    reg.slope = pj.at("slope").get<double>();
    reg.intercept = pj.at("intercept").get<double>();
    reg.r_squared = pj.value("r2", 0.0);
    model.pairs.push_back(CanonicalPair{
        AlgebraVector(s, vector_from_json(pj.at("v"))),
        AlgebraVector(s, vector_from_json(pj.at("u"))), reg,
        pj.at("loss").get<double>()});
    model.pair_converged.push_back(pj.value("converged", true));
    model.pair_degenerate.push_back(pj.value("degenerate", false));
  }
  // The flat (iteration, loss) list restarts at iteration 0 per pair.
  model.loss_traces.assign(model.pairs.size(), {});
  size_t pair_idx = 0;
  for (const auto& entry : j.at("loss_trace")) {
    const size_t it = entry.at(0).get<size_t>();
    if (it == 0 && !model.loss_traces.empty() &&
        !model.loss_traces[pair_idx].empty()) {
      ++pair_idx;
    }
    if (pair_idx < model.loss_traces.size()) {
      model.loss_traces[pair_idx].push_back(entry.at(1).get<double>());
    }
  }
  return model;
}

json to_json(const EuclideanCcaModel& model) {
  json components = json::array();
  for (size_t c = 0; c < model.x_directions.size(); ++c) {
    components.push_back(
        json{{"a", vector_to_json(model.x_directions[c])},
             {"b", vector_to_json(model.y_directions[c])},
             {"correlation", model.correlations[c]},
             {"regression", regression_to_json(model.score_regressions[c])},
             {"loading", vector_to_json(model.loadings[c])}});
  }
  return json{{"format_version", 1},
              {"method", "cca"},
              {"mean_x", vector_to_json(model.mean_x)},
              {"mean_y", vector_to_json(model.mean_y)},
              {"components", std::move(components)}};
}

EuclideanCcaModel euclidean_cca_model_from_json(const json& j) {
  if (j.value("format_version", 0) != 1) {
    throw Error("euclidean_cca_model_from_json: unsupported format_version");
  }
  EuclideanCcaModel model;
  model.mean_x = vector_from_json(j.at("mean_x"));
  model.mean_y = vector_from_json(j.at("mean_y"));
  for (const auto& cj : j.at("components")) {
    model.x_directions.push_back(vector_from_json(cj.at("a")));
    model.y_directions.push_back(vector_from_json(cj.at("b")));
    model.correlations.push_back(cj.at("correlation").get<double>());
    model.score_regressions.push_back(regression_from_json(cj.at("regression")));
    model.loadings.push_back(vector_from_json(cj.at("loading")));
  }
  return model;
}

bool is_icca_model_json(const json& j) {
  if (j.contains("pairs")) return true;
  if (j.contains("components")) return false;
  throw Error("unrecognized model file (neither intrinsic nor baseline schema)");
}

void save_dataset_jsonl(const PairedDataset& ds,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");

  json actions = json::array();
  for (const AlgebraVector& a : ds.spec.action_sequence) {
    actions.push_back(vector_to_json(a.coords()));
  }
  const json header{
      {"format_version", 1},
      {"n", ds.X.size()},
      {"split_ratio", ds.split_ratio},
      {"chain",
       json{{"structure", to_json(ds.spec.structure)},
            {"base_config", to_json(ds.spec.base_config)},
            {"action_sequence", std::move(actions)}}},
      {"noise",
       json{{"config_sigma2", ds.noise.config_sigma2},
            {"action_sigma", ds.noise.action_sigma},
            {"seed", ds.noise.seed}}}};
  out << header.dump() << "\n";

  std::vector<bool> is_train(ds.X.size(), false);
  for (int i : ds.train_idx) is_train[static_cast<size_t>(i)] = true;
  for (size_t i = 0; i < ds.X.size(); ++i) {
    const json record{{"i", i},
                      {"x", to_json(ds.X[i])},
                      {"y", to_json(ds.Y[i])},
                      {"split", is_train[i] ? "train" : "test"}};
    out << record.dump() << "\n";
  }
  if (!out) throw Error("failed writing " + path.string());
}

PairedDataset load_dataset_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error("empty dataset file " + path.string());
  const json header = json::parse(line);
  if (header.value("format_version", 0) != 1) {
    throw Error("load_dataset_jsonl: unsupported format_version");
  }

  const json& chain = header.at("chain");
  GroupStructure structure = structure_from_json(chain.at("structure"));
  std::vector<AlgebraVector> actions;
  for (const auto& aj : chain.at("action_sequence")) {
    actions.emplace_back(structure, vector_from_json(aj));
  }
  ChainSpec spec{structure, group_element_from_json(chain.at("base_config")),
                 std::move(actions)};
  NoiseSpec noise{header.at("noise").at("config_sigma2").get<double>(),
                  header.at("noise").at("action_sigma").get<double>(),
                  header.at("noise").at("seed").get<std::uint64_t>()};

  PairedDataset ds{{}, {}, {}, {}, std::move(spec), noise,
                   header.at("split_ratio").get<double>()};
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json record = json::parse(line);
    const int i = record.at("i").get<int>();
    if (i != static_cast<int>(ds.X.size())) {
      throw Error("load_dataset_jsonl: records out of order");
    }
    ds.X.push_back(group_element_from_json(record.at("x")));
    ds.Y.push_back(group_element_from_json(record.at("y")));
    if (record.at("split").get<std::string>() == "train") {
      ds.train_idx.push_back(i);
    } else {
      ds.test_idx.push_back(i);
    }
  }
  return ds;
}

void write_dataset_csv(const PairedDataset& ds,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  const int dim = ds.spec.structure.algebra_dim();
  out << "i,split,view";
  for (int c = 0; c < dim; ++c) out << ",c" << c;
  out << "\n";

  std::vector<bool> is_train(ds.X.size(), false);
  for (int i : ds.train_idx) is_train[static_cast<size_t>(i)] = true;
  for (size_t i = 0; i < ds.X.size(); ++i) {
    const char* split = is_train[i] ? "train" : "test";
    for (const char* view : {"x", "y"}) {
      const GroupElement& g = view[0] == 'x' ? ds.X[i] : ds.Y[i];
      const Eigen::VectorXd coords = log_map(g).coords();
      out << i << "," << split << "," << view;
      for (int c = 0; c < dim; ++c) out << "," << format_double(coords[c]);
      out << "\n";
    }
  }
  if (!out) throw Error("failed writing " + path.string());
}

void write_loss_csv(const IccaModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << "pair,iteration,loss\n";
  for (size_t k = 0; k < model.loss_traces.size(); ++k) {
    for (size_t it = 0; it < model.loss_traces[k].size(); ++it) {
      out << k << "," << it << "," << format_double(model.loss_traces[k][it])
          << "\n";
    }
  }
  if (!out) throw Error("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw Error("failed writing " + path.string());
}

std::string format_double(double value) {
  // Shortest representation that parses back to the same double.
  for (int precision = 15; precision <= 17; ++precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
    if (std::strtod(buf, nullptr) == value) return buf;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace liecca
