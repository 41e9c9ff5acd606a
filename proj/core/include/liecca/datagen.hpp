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
// Synthetic paired-configuration generator for an articulated kinematic
// chain: initial configurations are the base configuration perturbed by
// Gaussian noise through the exponential map, final configurations follow
// from composing a frozen action sequence with per-action noise. Rollouts
// are exact group compositions, so every generated element stays on the
// manifold.

#ifndef LIECCA_DATAGEN_HPP
#define LIECCA_DATAGEN_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "liecca/group.hpp"

namespace liecca {

/// Kinematic chain description: block structure, base configuration, and
/// the frozen action sequence applied by roll_out.
struct ChainSpec {
  GroupStructure structure;
  GroupElement base_config;
  std::vector<AlgebraVector> action_sequence;
};

/// Noise model: per-coordinate variance of the initial-configuration
/// perturbation and per-coordinate standard deviation of each action
/// perturbation.
struct NoiseSpec {
  double config_sigma2 = 0.02;
  double action_sigma = 0.01;
  std::uint64_t seed = 0;
};

/// Articulated-hand chain: one SO(3) block (inner joint) followed by 13
/// SO(2) joints, base at the identity, and `horizon` actions drawn once
/// from per-coordinate Normal(0, action_std^2) with the given seed.
ChainSpec make_hand_spec(std::uint64_t seed, int horizon = 20,
                         double action_std = 0.05);

/// n perturbed initial configurations base * exp(eps), eps per-coordinate
/// Normal(0, config_sigma2), drawn from `rng`.
std::vector<GroupElement> sample_initial(const ChainSpec& spec,
                                         const NoiseSpec& noise, int n,
                                         std::mt19937_64& rng);
/// Convenience overload seeding a fresh stream from noise.seed.
std::vector<GroupElement> sample_initial(const ChainSpec& spec,
                                         const NoiseSpec& noise, int n);

/// Final configuration: x composed left-to-right with exp(a_k + eta_k) for
/// every action in the sequence, eta per-coordinate
/// Normal(0, action_sigma^2) drawn from `rng`.
GroupElement roll_out(const ChainSpec& spec, const NoiseSpec& noise,
                      const GroupElement& x, std::mt19937_64& rng);
/// Convenience overload seeding a fresh stream from noise.seed.
GroupElement roll_out(const ChainSpec& spec, const NoiseSpec& noise,
                      const GroupElement& x);

/// Aligned (initial, final) configuration pairs with a disjoint covering
/// train/test split and the generation metadata.
struct PairedDataset {
  std::vector<GroupElement> X;
  std::vector<GroupElement> Y;
  std::vector<int> train_idx;
  std::vector<int> test_idx;
  ChainSpec spec;
  NoiseSpec noise;
  double split_ratio = 2.0 / 3.0;

  std::vector<GroupElement> train_x() const { return gather(X, train_idx); }
  std::vector<GroupElement> train_y() const { return gather(Y, train_idx); }
  std::vector<GroupElement> test_x() const { return gather(X, test_idx); }
  std::vector<GroupElement> test_y() const { return gather(Y, test_idx); }

 private:
  static std::vector<GroupElement> gather(const std::vector<GroupElement>& all,
                                          const std::vector<int>& idx);
};

/// Generates n pairs from a single stream seeded with noise.seed, then
/// splits them with a deterministic shuffle: round(n * split_ratio) train,
/// the rest test. Identical inputs give bit-identical datasets.
PairedDataset generate(const ChainSpec& spec, const NoiseSpec& noise, int n,
                       double split_ratio = 2.0 / 3.0);

}  // namespace liecca

#endif  // LIECCA_DATAGEN_HPP
