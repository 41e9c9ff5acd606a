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

#include <doctest.h>

#include <numbers>
#include <random>
#include <vector>

#include "liecca/stats.hpp"
#include "test_util.hpp"

using namespace liecca;
using testutil::hand_structure;
using testutil::mixed_structure;
using testutil::random_algebra;
using testutil::random_element;
using testutil::random_unit;
using testutil::so2_structure;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent projection oracle: dense scan of the generic distance.
struct DenseGridResult {
  double t;
  double residual;
};

DenseGridResult dense_grid_projection(const GroupElement& x,
                                      const AlgebraVector& v, double bound,
                                      int nodes) {
  DenseGridResult best{0.0, std::numeric_limits<double>::infinity()};
  for (int j = 0; j < nodes; ++j) {
    const double t = -bound + 2.0 * bound * j / (nodes - 1);
    double d;
    try {
      d = riemannian_distance(x, exp_map(v.scaled(t)));
    } catch (const AngleAtCut&) {
      continue;
    }
    if (d < best.residual) best = {t, d};
  }
  return best;
}

}  // namespace

TEST_CASE("riemannian distance basics") {
  GroupStructure s = mixed_structure();
  std::mt19937_64 rng(23);
  GroupElement g = random_element(s, rng);
  CHECK(riemannian_distance(g, g) == doctest::Approx(0.0).epsilon(1e-12));

  SUBCASE("geodesic arc length from the identity") {
    AlgebraVector v = random_unit(s, rng);
    for (double theta : {0.3, -1.1, 2.5}) {
      CHECK(riemannian_distance(GroupElement::identity(s),
                                exp_map(v.scaled(theta))) ==
            doctest::Approx(std::abs(theta)).epsilon(1e-9));
    }
  }
  SUBCASE("symmetry on random pairs") {
    for (int i = 0; i < 100; ++i) {
      GroupElement a = random_element(s, rng);
      GroupElement b = random_element(s, rng);
      CHECK(riemannian_distance(a, b) ==
            doctest::Approx(riemannian_distance(b, a)).epsilon(1e-12));
    }
  }
}

TEST_CASE("distance is left-invariant") {
  GroupStructure s = mixed_structure();
  std::mt19937_64 rng(29);
  for (int i = 0; i < 40; ++i) {
    GroupElement g = random_element(s, rng, 0.4);
    GroupElement x = random_element(s, rng, 0.4);
    GroupElement y = random_element(s, rng, 0.4);
    CHECK(std::abs(riemannian_distance(compose(g, x), compose(g, y)) -
                   riemannian_distance(x, y)) < 1e-9);
  }
}

TEST_CASE("triangle inequality on random triples") {
  GroupStructure s = mixed_structure();
  std::mt19937_64 rng(31);
  for (int i = 0; i < 60; ++i) {
    GroupElement a = random_element(s, rng, 0.4);
    GroupElement b = random_element(s, rng, 0.4);
    GroupElement c = random_element(s, rng, 0.4);
    CHECK(riemannian_distance(a, c) <=
          riemannian_distance(a, b) + riemannian_distance(b, c) + 1e-9);
  }
}

TEST_CASE("bch distance") {
  SUBCASE("exact on abelian structures") {
    GroupStructure s = so2_structure(5);
    std::mt19937_64 rng(37);
    for (int i = 0; i < 30; ++i) {
      GroupElement a = random_element(s, rng, 0.4);
      GroupElement b = random_element(s, rng, 0.4);
      CHECK(std::abs(bch_distance(a, b) - riemannian_distance(a, b)) < 1e-12);
    }
  }
  SUBCASE("coincident points give zero") {
    GroupStructure s = mixed_structure();
    std::mt19937_64 rng(41);
    GroupElement g = random_element(s, rng);
    CHECK(bch_distance(g, g) == doctest::Approx(0.0));
  }
  SUBCASE("small SO3 rotations: commutator-sized error") {
    // Both routes computed on fixed seeds; the gap is second order in the
    // block angles (0.1 rad here).
    GroupStructure s = GroupStructure::uniform(BlockKind::SO3, 1);
    std::mt19937_64 rng(43);
    for (int i = 0; i < 20; ++i) {
      GroupElement a = exp_map(random_algebra(s, rng, 0.1, 0.0));
      GroupElement b = exp_map(random_algebra(s, rng, 0.1, 0.0));
      const double gap = std::abs(bch_distance(a, b) - riemannian_distance(a, b));
      CHECK(gap < 0.01);
    }
  }
}

TEST_CASE("intrinsic mean") {
  SUBCASE("single point") {
    GroupStructure s = mixed_structure();
    std::mt19937_64 rng(47);
    GroupElement g = random_element(s, rng);
    std::vector<GroupElement> pts{g};
    CHECK(riemannian_distance(intrinsic_mean(pts), g) < 1e-12);
  }
  SUBCASE("symmetric SO2 pair averages to the identity") {
    GroupStructure s = so2_structure(1);
    std::vector<GroupElement> pts{
        exp_map(AlgebraVector(s, Eigen::VectorXd::Constant(1, 0.4))),
        exp_map(AlgebraVector(s, Eigen::VectorXd::Constant(1, -0.4)))};
    CHECK(log_map(intrinsic_mean(pts)).norm() < 1e-9);
  }
  SUBCASE("abelian mean is the arithmetic angle mean") {
    GroupStructure s = so2_structure(1);
    std::vector<GroupElement> pts;
    for (double a : {0.1, 0.2, 0.3}) {
      pts.push_back(exp_map(AlgebraVector(s, Eigen::VectorXd::Constant(1, a))));
    }
    CHECK(log_map(intrinsic_mean(pts)).coords()[0] ==
          doctest::Approx(0.2).epsilon(1e-9));
  }
  SUBCASE("no convergence reports the final step norm") {
    GroupStructure s = so2_structure(1);
    std::vector<GroupElement> pts{
        exp_map(AlgebraVector(s, Eigen::VectorXd::Constant(1, 1.0))),
        exp_map(AlgebraVector(s, Eigen::VectorXd::Constant(1, -1.0)))};
    try {
      intrinsic_mean(pts, 1e-30, 1);
      FAIL("expected NoConvergence");
    } catch (const NoConvergence& e) {
      CHECK(e.final_step() > 0.0);
    }
  }
}

TEST_CASE("intrinsic mean is left-equivariant") {
  GroupStructure s = mixed_structure();
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<GroupElement> pts;
    for (int i = 0; i < 20; ++i) pts.push_back(random_element(s, rng, 0.2));
    GroupElement g = random_element(s, rng);
    std::vector<GroupElement> shifted;
    for (const GroupElement& p : pts) shifted.push_back(compose(g, p));
    CHECK(riemannian_distance(intrinsic_mean(shifted),
                              compose(g, intrinsic_mean(pts))) < 1e-6);
  }
}

TEST_CASE("intrinsic mean minimizes the summed squared distance") {
  GroupStructure s = mixed_structure();
  std::mt19937_64 rng(59);
  std::vector<GroupElement> pts;
  for (int i = 0; i < 15; ++i) pts.push_back(random_element(s, rng, 0.25));
  GroupElement mu = intrinsic_mean(pts);
  auto cost = [&](const GroupElement& c) {
    double total = 0.0;
    for (const GroupElement& p : pts) {
      const double d = riemannian_distance(c, p);
      total += d * d;
    }
    return total;
  };
  const double mean_cost = cost(mu);
  for (const GroupElement& p : pts) CHECK(mean_cost <= cost(p) + 1e-12);
  for (int i = 0; i < 50; ++i) {
    AlgebraVector w = random_unit(s, rng);
    GroupElement perturbed = compose(exp_map(w.scaled(1e-3)), mu);
    CHECK(mean_cost <= cost(perturbed) + 1e-12);
  }
}

TEST_CASE("extrinsic mean") {
  SUBCASE("identical points reproduce the embedding") {
    GroupStructure s = mixed_structure();
    std::mt19937_64 rng(61);
    GroupElement g = random_element(s, rng);
    std::vector<GroupElement> pts{g, g, g};
    CHECK((extrinsic_mean(pts) - g.embedding()).lpNorm<Eigen::Infinity>() <
          1e-15);
  }
  SUBCASE("symmetric SO2 pair leaves the manifold") {
    GroupStructure s = so2_structure(1);
    const double theta = 0.4;
    std::vector<GroupElement> pts{
        exp_map(AlgebraVector(s, Eigen::VectorXd::Constant(1, theta))),
        exp_map(AlgebraVector(s, Eigen::VectorXd::Constant(1, -theta)))};
    Eigen::VectorXd m = extrinsic_mean(pts);
    CHECK(m[0] == doctest::Approx(std::cos(theta)));
    CHECK(m[1] == doctest::Approx(0.0));
    CHECK(m[2] == doctest::Approx(0.0));
    CHECK(m[3] == doctest::Approx(std::cos(theta)));
    // determinant cos^2(theta) < 1: off the manifold by design
    CHECK(m[0] * m[3] - m[1] * m[2] < 1.0 - 1e-3);
  }
  SUBCASE("close to the intrinsic mean for tight clusters") {
    GroupStructure s = mixed_structure();
    std::mt19937_64 rng(67);
    std::vector<GroupElement> pts;
    for (int i = 0; i < 100; ++i) pts.push_back(random_element(s, rng, 0.05));
    const Eigen::VectorXd ext = extrinsic_mean(pts);
    const Eigen::VectorXd intr = intrinsic_mean(pts).embedding();
    CHECK((ext - intr).norm() < 0.02);
  }
}

TEST_CASE("project_to_subgroup basics") {
  GroupStructure s = mixed_structure();
  std::mt19937_64 rng(71);

  SUBCASE("point on the subgroup") {
    AlgebraVector v = random_unit(s, rng);
    ProjectionResult r = project_to_subgroup(exp_map(v.scaled(0.7)), v);
    CHECK(r.t_star == doctest::Approx(0.7).epsilon(1e-7));
    CHECK(r.residual_distance < 1e-7);
  }
  SUBCASE("identity projects to t = 0") {
    AlgebraVector v = random_unit(s, rng);
    ProjectionResult r = project_to_subgroup(GroupElement::identity(s), v);
    CHECK(std::abs(r.t_star) < 1e-8);
  }
  SUBCASE("abelian blocks separate") {
    GroupStructure s2 = so2_structure(2);
    Eigen::VectorXd coords(2);
    coords << 0.5, 0.3;
    GroupElement x = exp_map(AlgebraVector(s2, coords));
    Eigen::VectorXd e1(2);
    e1 << 1.0, 0.0;
    ProjectionResult r = project_to_subgroup(x, AlgebraVector(s2, e1));
    CHECK(r.t_star == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(r.residual_distance == doctest::Approx(0.3).epsilon(1e-7));
  }
  SUBCASE("non-unit generator is rejected") {
    AlgebraVector v = random_unit(s, rng);
    CHECK_THROWS_AS(
        project_to_subgroup(GroupElement::identity(s), v.scaled(1.5)),
        UnitNormViolation);
  }
  SUBCASE("result invariants") {
    for (int i = 0; i < 10; ++i) {
      GroupElement x = random_element(s, rng, 0.4);
      AlgebraVector v = random_unit(s, rng);
      ProjectionResult r = project_to_subgroup(x, v);
      CHECK((r.point.embedding() - exp_map(v.scaled(r.t_star)).embedding())
                .isZero(0.0));
      CHECK(r.residual_distance ==
            doctest::Approx(riemannian_distance(x, r.point)).epsilon(1e-9));
    }
  }
}

TEST_CASE("projection is idempotent") {
  GroupStructure s = mixed_structure();
  std::mt19937_64 rng(73);
  for (int i = 0; i < 20; ++i) {
    GroupElement x = random_element(s, rng, 0.4);
    AlgebraVector v = random_unit(s, rng);
    ProjectionResult r = project_to_subgroup(x, v);
    ProjectionResult again = project_to_subgroup(r.point, v);
    CHECK(std::abs(again.t_star - r.t_star) < 1e-6);
  }
}

TEST_CASE("projection agrees with a dense-grid oracle") {
  GroupStructure s = mixed_structure();
  std::mt19937_64 rng(79);
  const double bound = default_t_bound(s);
  const double grid_step = 2.0 * bound / (kProjectionGridNodes - 1);
  for (int i = 0; i < 20; ++i) {
    GroupElement x = random_element(s, rng, 0.5);
    AlgebraVector v = random_unit(s, rng);
    ProjectionResult fast = project_to_subgroup(x, v);
    DenseGridResult oracle = dense_grid_projection(x, v, bound, 20001);
    CHECK(std::abs(fast.t_star - oracle.t) <= 2.0 * grid_step);
    CHECK(fast.residual_distance <= oracle.residual + 1e-8);
  }
}

TEST_CASE("default t_bound covers the block count") {
  CHECK(default_t_bound(hand_structure()) ==
        doctest::Approx(kPi * std::sqrt(14.0)));
}
