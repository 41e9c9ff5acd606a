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
// Microbenchmarks of the operations that dominate fitting: group maps,
// distances, subgroup projection, and the joint pair loss.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "liecca/cca.hpp"
#include "liecca/datagen.hpp"
#include "liecca/stats.hpp"

namespace {

using namespace liecca;

GroupStructure hand() {
  std::vector<BlockKind> kinds{BlockKind::SO3};
  for (int i = 0; i < 13; ++i) kinds.push_back(BlockKind::SO2);
  return GroupStructure(std::move(kinds));
}

AlgebraVector random_vector(const GroupStructure& s, std::mt19937_64& rng,
                            double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::VectorXd c(s.algebra_dim());
  for (int i = 0; i < s.algebra_dim(); ++i) c[i] = normal(rng);
  return AlgebraVector(s, std::move(c));
}

void BM_ExpLogRoundtrip(benchmark::State& state) {
  const GroupStructure s = hand();
  std::mt19937_64 rng(1);
  const AlgebraVector v = random_vector(s, rng, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_map(exp_map(v)));
  }
}
BENCHMARK(BM_ExpLogRoundtrip);

void BM_Compose(benchmark::State& state) {
  const GroupStructure s = hand();
  std::mt19937_64 rng(2);
  const GroupElement a = exp_map(random_vector(s, rng, 0.3));
  const GroupElement b = exp_map(random_vector(s, rng, 0.3));
  for (auto _ : state) {
    benchmark::DoNotOptimize(compose(a, b));
  }
}
BENCHMARK(BM_Compose);

void BM_RiemannianDistance(benchmark::State& state) {
  const GroupStructure s = hand();
  std::mt19937_64 rng(3);
  const GroupElement a = exp_map(random_vector(s, rng, 0.3));
  const GroupElement b = exp_map(random_vector(s, rng, 0.3));
  for (auto _ : state) {
    benchmark::DoNotOptimize(riemannian_distance(a, b));
  }
}
BENCHMARK(BM_RiemannianDistance);

void BM_ProjectToSubgroup(benchmark::State& state) {
  const GroupStructure s = hand();
  std::mt19937_64 rng(4);
  const GroupElement x = exp_map(random_vector(s, rng, 0.3));
  AlgebraVector v = random_vector(s, rng, 1.0);
  v = v.scaled(1.0 / v.norm());
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_to_subgroup(x, v));
  }
}
BENCHMARK(BM_ProjectToSubgroup);

void BM_PairLoss(benchmark::State& state) {
  const GroupStructure s = hand();
  std::mt19937_64 rng(5);
  std::vector<GroupElement> xs, ys;
  for (int i = 0; i < state.range(0); ++i) {
    xs.push_back(exp_map(random_vector(s, rng, 0.15)));
    ys.push_back(exp_map(random_vector(s, rng, 0.15)));
  }
  AlgebraVector v = random_vector(s, rng, 1.0);
  v = v.scaled(1.0 / v.norm());
  AlgebraVector u = random_vector(s, rng, 1.0);
  u = u.scaled(1.0 / u.norm());
  for (auto _ : state) {
    benchmark::DoNotOptimize(icca_pair_loss(xs, ys, v, u));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PairLoss)->Range(16, 512)->Complexity(benchmark::oN);

void BM_IntrinsicMean(benchmark::State& state) {
  const GroupStructure s = hand();
  std::mt19937_64 rng(6);
  std::vector<GroupElement> pts;
  for (int i = 0; i < state.range(0); ++i) {
    pts.push_back(exp_map(random_vector(s, rng, 0.15)));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(intrinsic_mean(pts));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_IntrinsicMean)->Range(16, 512)->Complexity(benchmark::oN);

void BM_Rollout(benchmark::State& state) {
  const ChainSpec spec = make_hand_spec(7);
  const NoiseSpec noise{0.02, 0.01, 7};
  std::mt19937_64 rng(noise.seed);
  const GroupElement x = GroupElement::identity(spec.structure);
  for (auto _ : state) {
    benchmark::DoNotOptimize(roll_out(spec, noise, x, rng));
  }
}
BENCHMARK(BM_Rollout);

}  // namespace

BENCHMARK_MAIN();
