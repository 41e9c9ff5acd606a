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
// Seeded generators shared by the test suites.

#ifndef LIECCA_TEST_UTIL_HPP
#define LIECCA_TEST_UTIL_HPP

#include <numbers>
#include <random>
#include <vector>

#include "liecca/group.hpp"

namespace liecca::testutil {

inline GroupStructure so2_structure(int blocks) {
  return GroupStructure::uniform(BlockKind::SO2, blocks);
}

inline GroupStructure mixed_structure() {
  return GroupStructure({BlockKind::SO3, BlockKind::SO2, BlockKind::SO2,
                         BlockKind::SO3, BlockKind::SO2});
}

inline GroupStructure hand_structure() {
  std::vector<BlockKind> kinds{BlockKind::SO3};
  for (int i = 0; i < 13; ++i) kinds.push_back(BlockKind::SO2);
  return GroupStructure(std::move(kinds));
}

/// Random algebra vector with every SO(3) block norm <= so3_cap and SO(2)
/// coordinates uniform in (-so2_cap, so2_cap).
inline AlgebraVector random_algebra(const GroupStructure& s,
                                    std::mt19937_64& rng,
                                    double so3_cap = std::numbers::pi - 0.1,
                                    double so2_cap = std::numbers::pi - 1e-6) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> radius(0.0, 1.0);
  Eigen::VectorXd coords(s.algebra_dim());
  for (int b = 0; b < s.block_count(); ++b) {
    const int off = s.algebra_offset(b);
    if (s.kind(b) == BlockKind::SO2) {
      coords[off] = so2_cap * unit(rng);
    } else {
      Eigen::Vector3d dir(unit(rng), unit(rng), unit(rng));
      while (dir.norm() < 1e-6) dir = {unit(rng), unit(rng), unit(rng)};
      dir.normalize();
      coords.segment<3>(off) = so3_cap * radius(rng) * dir;
    }
  }
  return AlgebraVector(s, std::move(coords));
}

/// Random element well away from the logarithm cut.
inline GroupElement random_element(const GroupStructure& s,
                                   std::mt19937_64& rng, double scale = 0.8) {
  return exp_map(random_algebra(s, rng, scale * std::numbers::pi, scale * 2.0));
}

/// Random unit generator.
inline AlgebraVector random_unit(const GroupStructure& s,
                                 std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(s.algebra_dim());
  do {
    for (int i = 0; i < s.algebra_dim(); ++i) v[i] = normal(rng);
  } while (v.norm() < 1e-9);
  v.normalize();
  return AlgebraVector(s, std::move(v));
}

}  // namespace liecca::testutil

#endif  // LIECCA_TEST_UTIL_HPP
