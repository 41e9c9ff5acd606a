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

#include "liecca/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace liecca {

namespace {

Eigen::VectorXd draw_normal(int dim, double stddev, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, stddev);
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = normal(rng);
  return v;
}

}  // namespace

ChainSpec make_hand_spec(std::uint64_t seed, int horizon, double action_std) {
  if (horizon < 1) throw Error("make_hand_spec: horizon must be >= 1");
  std::vector<BlockKind> kinds;
  kinds.push_back(BlockKind::SO3);
  for (int i = 0; i < 13; ++i) kinds.push_back(BlockKind::SO2);
  GroupStructure structure(std::move(kinds));

  std::mt19937_64 rng(seed);
  std::vector<AlgebraVector> actions;
  actions.reserve(static_cast<size_t>(horizon));
  for (int k = 0; k < horizon; ++k) {
    actions.emplace_back(structure,
                         draw_normal(structure.algebra_dim(), action_std, rng));
  }
  return ChainSpec{structure, GroupElement::identity(structure),
                   std::move(actions)};
}

std::vector<GroupElement> sample_initial(const ChainSpec& spec,
                                         const NoiseSpec& noise, int n,
                                         std::mt19937_64& rng) {
  if (n < 1) throw Error("sample_initial: n must be >= 1");
  const double stddev = std::sqrt(noise.config_sigma2);
  std::vector<GroupElement> out;
  out.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd eps =
        draw_normal(spec.structure.algebra_dim(), stddev, rng);
    out.push_back(
        compose(spec.base_config, exp_map(AlgebraVector(spec.structure, eps))));
  }
  return out;
}

std::vector<GroupElement> sample_initial(const ChainSpec& spec,
                                         const NoiseSpec& noise, int n) {
  std::mt19937_64 rng(noise.seed);
  return sample_initial(spec, noise, n, rng);
}

GroupElement roll_out(const ChainSpec& spec, const NoiseSpec& noise,
                      const GroupElement& x, std::mt19937_64& rng) {
  GroupElement y = x;
  for (const AlgebraVector& action : spec.action_sequence) {
    const Eigen::VectorXd eta =
        draw_normal(spec.structure.algebra_dim(), noise.action_sigma, rng);
    y = compose(y, exp_map(AlgebraVector(spec.structure,
                                         action.coords() + eta)));
  }
  return y;
}

GroupElement roll_out(const ChainSpec& spec, const NoiseSpec& noise,
                      const GroupElement& x) {
  std::mt19937_64 rng(noise.seed);
  return roll_out(spec, noise, x, rng);
}

std::vector<GroupElement> PairedDataset::gather(
    const std::vector<GroupElement>& all, const std::vector<int>& idx) {
  std::vector<GroupElement> out;
  out.reserve(idx.size());
  for (int i : idx) out.push_back(all[static_cast<size_t>(i)]);
  return out;
}

PairedDataset generate(const ChainSpec& spec, const NoiseSpec& noise, int n,
                       double split_ratio) {
  if (n < 3) throw Error("generate: n must be >= 3");
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) {
    throw Error("generate: split_ratio must be in (0, 1)");
  }

  std::mt19937_64 rng(noise.seed);
  PairedDataset ds{{}, {}, {}, {}, spec, noise, split_ratio};
  ds.X.reserve(static_cast<size_t>(n));
  ds.Y.reserve(static_cast<size_t>(n));
  const double stddev = std::sqrt(noise.config_sigma2);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd eps =
        draw_normal(spec.structure.algebra_dim(), stddev, rng);
    GroupElement x =
        compose(spec.base_config, exp_map(AlgebraVector(spec.structure, eps)));
    GroupElement y = roll_out(spec, noise, x, rng);
    ds.X.push_back(std::move(x));
    ds.Y.push_back(std::move(y));
  }

  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const int n_train =
      std::clamp(static_cast<int>(std::llround(split_ratio * n)), 1, n - 1);
  ds.train_idx.assign(order.begin(), order.begin() + n_train);
  ds.test_idx.assign(order.begin() + n_train, order.end());
  std::sort(ds.train_idx.begin(), ds.train_idx.end());
  std::sort(ds.test_idx.begin(), ds.test_idx.end());
  return ds;
}

}  // namespace liecca
