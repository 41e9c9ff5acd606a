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
// File formats:
//  - GroupElement JSON: {"structure": ["SO3","SO2",...],
//                        "blocks": [[row-major entries], ...]}
//  - Model JSON (format_version 1): means, canonical pairs with regression
//    coefficients, and the per-pair loss traces.
//  - Dataset JSON lines: a metadata header record followed by one record
//    per pair {"i":..., "x":..., "y":..., "split":"train"|"test"}.
//  - CSV exports: dataset algebra coordinates, loss traces, t*-s* scatter.
// Doubles are emitted with shortest round-trip precision, so rereading a
// file reproduces the values bit-exactly.

#ifndef LIECCA_IO_HPP
#define LIECCA_IO_HPP

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>

#include "liecca/cca.hpp"
#include "liecca/datagen.hpp"
#include "liecca/group.hpp"

namespace liecca {

nlohmann::json to_json(const GroupStructure& structure);
GroupStructure structure_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GroupElement& element);
GroupElement group_element_from_json(const nlohmann::json& j);

nlohmann::json to_json(const IccaModel& model);
IccaModel icca_model_from_json(const nlohmann::json& j);

nlohmann::json to_json(const EuclideanCcaModel& model);
EuclideanCcaModel euclidean_cca_model_from_json(const nlohmann::json& j);

/// True when the JSON carries an intrinsic model ("pairs"), false for the
/// Euclidean baseline schema; throws Error otherwise.
bool is_icca_model_json(const nlohmann::json& j);

void save_dataset_jsonl(const PairedDataset& ds,
                        const std::filesystem::path& path);
PairedDataset load_dataset_jsonl(const std::filesystem::path& path);

/// Algebra-coordinate export, one row per (pair, view):
/// i,split,view,c0..c{d-1}.
void write_dataset_csv(const PairedDataset& ds,
                       const std::filesystem::path& path);

/// Loss-trace CSV with header pair,iteration,loss.
void write_loss_csv(const IccaModel& model, const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

/// Shortest round-trip decimal form of a double (what the CSV writers use).
std::string format_double(double value);

}  // namespace liecca

#endif  // LIECCA_IO_HPP
