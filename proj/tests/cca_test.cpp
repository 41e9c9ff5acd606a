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

#include <cmath>
#include <random>
#include <vector>

#include "liecca/cca.hpp"
#include "liecca/stats.hpp"
#include "test_util.hpp"

using namespace liecca;
using testutil::random_element;
using testutil::random_unit;
using testutil::so2_structure;

namespace {

// Direct route through the public per-point operations; the production
// loss evaluator must agree with this.
double pair_loss_oracle(std::span<const GroupElement> xc,
                        std::span<const GroupElement> yc,
                        const AlgebraVector& v, const AlgebraVector& u) {
  double total = 0.0;
  for (size_t i = 0; i < xc.size(); ++i) {
    const ProjectionResult px = project_to_subgroup(xc[i], v);
    const ProjectionResult py = project_to_subgroup(yc[i], u);
    const double coupling = riemannian_distance(px.point, py.point);
    total += px.residual_distance * px.residual_distance +
             py.residual_distance * py.residual_distance + coupling * coupling;
  }
  return total;
}

IccaOptions fast_options() {
  IccaOptions opts;
  opts.sphere.multistart = 4;
  return opts;
}

// Rank-1 planted views x_i = mu_x exp(t_i v0), y_i = mu_y exp(slope t_i v0).
struct PlantedRank1 {
  std::vector<GroupElement> x, y;
  std::vector<double> t;
  AlgebraVector v0;
};

PlantedRank1 make_rank1(const GroupStructure& s, const GroupElement& mu_x,
                        const GroupElement& mu_y, double slope, int n,
                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PlantedRank1 data{{}, {}, {}, random_unit(s, rng)};
  for (int i = 0; i < n; ++i) {
    const double t = -0.4 + 0.8 * i / (n - 1);
    data.t.push_back(t);
    data.x.push_back(compose(mu_x, exp_map(data.v0.scaled(t))));
    data.y.push_back(compose(mu_y, exp_map(data.v0.scaled(slope * t))));
  }
  return data;
}

}  // namespace

TEST_CASE("time regression") {
  SUBCASE("exact double slope") {
    TimePairs tp;
    for (double t : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
      tp.t_star.push_back(t);
      tp.s_star.push_back(2.0 * t);
    }
    TimeRegression reg = fit_time_regression(tp);
    CHECK(reg.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(reg.intercept == doctest::Approx(0.0));
    CHECK(reg.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(reg.degenerate);
  }
  SUBCASE("identity line") {
    TimePairs tp{{-0.2, 0.1, 0.4}, {-0.2, 0.1, 0.4}};
    TimeRegression reg = fit_time_regression(tp);
    CHECK(reg.slope == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(reg.intercept == doctest::Approx(0.0));
  }
  SUBCASE("affine line") {
    TimePairs tp{{0.0, 1.0, 2.0}, {1.0, 3.0, 5.0}};
    TimeRegression reg = fit_time_regression(tp);
    CHECK(reg.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(reg.intercept == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("degenerate times") {
    TimePairs tp{{0.5, 0.5, 0.5}, {1.0, 2.0, 3.0}};
    TimeRegression reg = fit_time_regression(tp);
    CHECK(reg.degenerate);
    CHECK(reg.slope == 0.0);
    CHECK(reg.intercept == doctest::Approx(2.0));
  }
}

TEST_CASE("icca pair loss") {
  GroupStructure s = so2_structure(4);
  std::mt19937_64 rng(2);
  AlgebraVector v0 = random_unit(s, rng);

  SUBCASE("identity data gives zero loss") {
    std::vector<GroupElement> pts(5, GroupElement::identity(s));
    AlgebraVector u = random_unit(s, rng);
    auto [loss, times] = icca_pair_loss(pts, pts, v0, u);
    CHECK(loss < 1e-12);
    for (double t : times.t_star) CHECK(std::abs(t) < 1e-8);
    for (double t : times.s_star) CHECK(std::abs(t) < 1e-8);
  }
  SUBCASE("noiseless rank-1 data at the planted pair") {
    std::vector<GroupElement> pts;
    for (double t : {-0.4, -0.1, 0.2, 0.35}) pts.push_back(exp_map(v0.scaled(t)));
    auto [loss, times] = icca_pair_loss(pts, pts, v0, v0);
    CHECK(loss < 1e-12);
  }
  SUBCASE("orthogonal output generator: derived closed form") {
    // Abelian planted data evaluated at (v0, u_perp): the x-side residual
    // vanishes, while the y side leaves t_i^2 in both its residual and the
    // coupling, 2 sum t_i^2 in total. Cross-checked against the direct
    // per-point route.
    Eigen::VectorXd perp = random_unit(s, rng).coords();
    perp -= perp.dot(v0.coords()) * v0.coords();
    perp.normalize();
    AlgebraVector u(s, perp);
    std::vector<GroupElement> pts;
    std::vector<double> ts{-0.4, -0.1, 0.2, 0.35};
    double sum_t2 = 0.0;
    for (double t : ts) {
      pts.push_back(exp_map(v0.scaled(t)));
      sum_t2 += t * t;
    }
    auto [loss, times] = icca_pair_loss(pts, pts, v0, u);
    CHECK(loss == doctest::Approx(2.0 * sum_t2).epsilon(1e-9));
    CHECK(loss == doctest::Approx(pair_loss_oracle(pts, pts, v0, u)).epsilon(1e-9));
  }
  SUBCASE("agrees with the direct route on random data") {
    GroupStructure ms = testutil::mixed_structure();
    std::mt19937_64 rng2(4);
    std::vector<GroupElement> xs, ys;
    for (int i = 0; i < 10; ++i) {
      xs.push_back(random_element(ms, rng2, 0.2));
      ys.push_back(random_element(ms, rng2, 0.2));
    }
    AlgebraVector v = random_unit(ms, rng2);
    AlgebraVector u = random_unit(ms, rng2);
    auto [loss, times] = icca_pair_loss(xs, ys, v, u);
    CHECK(loss == doctest::Approx(pair_loss_oracle(xs, ys, v, u)).epsilon(1e-9));
  }
  SUBCASE("non-unit generator rejected") {
    std::vector<GroupElement> pts(3, GroupElement::identity(s));
    CHECK_THROWS_AS(icca_pair_loss(pts, pts, v0.scaled(2.0), v0),
                    UnitNormViolation);
  }
}

TEST_CASE("residualize") {
  GroupStructure s = so2_structure(3);
  std::mt19937_64 rng(6);
  AlgebraVector v = random_unit(s, rng);

  SUBCASE("projection time maps subgroup points to the identity") {
    std::vector<GroupElement> pts{exp_map(v.scaled(0.6))};
    std::vector<double> times{0.6};
    std::vector<GroupElement> res = residualize(pts, v, times);
    CHECK(log_map(res[0]).norm() < 1e-12);
  }
  SUBCASE("zero time leaves points unchanged") {
    GroupElement g = random_element(s, rng);
    std::vector<GroupElement> res = residualize(std::vector<GroupElement>{g}, v,
                                                std::vector<double>{0.0});
    CHECK((res[0].embedding() - g.embedding()).isZero(0.0));
  }
  SUBCASE("abelian residual subtracts the component") {
    Eigen::VectorXd c(3);
    c << 0.3, -0.2, 0.5;
    GroupElement g = exp_map(AlgebraVector(s, c));
    const double t = 0.4;
    std::vector<GroupElement> res = residualize(std::vector<GroupElement>{g}, v,
                                                std::vector<double>{t});
    CHECK((log_map(res[0]).coords() - (c - t * v.coords()))
              .lpNorm<Eigen::Infinity>() < 1e-12);
  }
  SUBCASE("length mismatch throws") {
    std::vector<GroupElement> pts{GroupElement::identity(s)};
    CHECK_THROWS_AS(residualize(pts, v, std::vector<double>{0.1, 0.2}),
                    LengthMismatch);
  }
}

TEST_CASE("first pair recovers a planted rank-1 model") {
  GroupStructure s = so2_structure(4);
  PlantedRank1 data = make_rank1(s, GroupElement::identity(s),
                                 GroupElement::identity(s), 2.0, 100, 0);
  PairFit fit = fit_first_pair(data.x, data.y, fast_options());
  CHECK(std::abs(fit.pair.v.coords().dot(data.v0.coords())) > 0.999);
  CHECK(std::abs(fit.pair.u.coords().dot(data.v0.coords())) > 0.999);
  CHECK(fit.pair.regression.slope == doctest::Approx(2.0).epsilon(0.005));
  CHECK(std::abs(fit.pair.regression.intercept) < 1e-3);
  CHECK(fit.pair.regression.slope >= 0.0);
  CHECK_FALSE(fit.degenerate);
}

TEST_CASE("identical views give matched generators and identity regression") {
  GroupStructure s = so2_structure(4);
  std::mt19937_64 rng(8);
  std::vector<GroupElement> pts;
  for (int i = 0; i < 60; ++i) pts.push_back(random_element(s, rng, 0.15));
  PairFit fit = fit_first_pair(pts, pts, fast_options());
  CHECK((fit.pair.v.coords() - fit.pair.u.coords()).lpNorm<Eigen::Infinity>() <
        1e-3);
  CHECK(fit.pair.regression.slope == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(std::abs(fit.pair.regression.intercept) < 1e-6);
  CHECK(fit.pair.regression.r_squared > 0.999);
}

TEST_CASE("constant views are flagged degenerate") {
  GroupStructure s = so2_structure(3);
  std::mt19937_64 rng(10);
  GroupElement g = random_element(s, rng);
  std::vector<GroupElement> pts(6, g);
  PairFit fit = fit_first_pair(pts, pts, fast_options());
  CHECK(fit.degenerate);
  CHECK(fit.pair.pair_loss < 1e-10);
  CHECK(fit.pair.regression.degenerate);
}

TEST_CASE("fit_icca with K=1 reduces to fit_first_pair") {
  GroupStructure s = so2_structure(4);
  PlantedRank1 data = make_rank1(s, GroupElement::identity(s),
                                 GroupElement::identity(s), 2.0, 40, 12);
  IccaOptions opts = fast_options();
  PairFit single = fit_first_pair(data.x, data.y, opts);
  IccaFit full = fit_icca(data.x, data.y, 1, opts);
  REQUIRE(full.model.pairs.size() == 1);
  CHECK((full.model.pairs[0].v.coords() - single.pair.v.coords()).norm() == 0.0);
  CHECK((full.model.pairs[0].u.coords() - single.pair.u.coords()).norm() == 0.0);
  CHECK(full.model.pairs[0].regression.slope == single.pair.regression.slope);
  CHECK(full.pair_times[0].t_star == single.times.t_star);
}

TEST_CASE("fit_icca recovers two planted components") {
  // Orthogonal generators with canonical slopes 2 and 1; the second
  // component's reference generator is declared with the opposite sign, so
  // its pre-canonical slope is -1 and the fit must flip it back.
  GroupStructure s = so2_structure(6);
  std::mt19937_64 rng(14);
  Eigen::VectorXd a = random_unit(s, rng).coords();
  Eigen::VectorXd b = random_unit(s, rng).coords();
  b -= b.dot(a) * a;
  b.normalize();
  const AlgebraVector v1(s, a), v2(s, b);
  std::uniform_real_distribution<double> amp1(-0.5, 0.5), amp2(-0.25, 0.25);
  std::vector<GroupElement> xs, ys;
  for (int i = 0; i < 80; ++i) {
    const double ta = amp1(rng);
    const double tb = amp2(rng);
    xs.push_back(exp_map(AlgebraVector(s, ta * a + tb * b)));
    ys.push_back(exp_map(AlgebraVector(s, 2.0 * ta * a + tb * b)));
  }
  IccaFit fit = fit_icca(xs, ys, 2, fast_options());
  REQUIRE(fit.model.pairs.size() == 2);
  CHECK(std::abs(fit.model.pairs[0].v.coords().dot(a)) > 0.99);
  CHECK(std::abs(fit.model.pairs[0].u.coords().dot(a)) > 0.99);
  CHECK(fit.model.pairs[0].regression.slope == doctest::Approx(2.0).epsilon(0.025));
  CHECK(std::abs(fit.model.pairs[1].v.coords().dot(b)) > 0.99);
  CHECK(std::abs(fit.model.pairs[1].u.coords().dot(b)) > 0.99);
  CHECK(fit.model.pairs[1].regression.slope == doctest::Approx(1.0).epsilon(0.025));
  for (const CanonicalPair& p : fit.model.pairs) {
    CHECK(p.regression.slope >= 0.0);
    CHECK(std::abs(p.v.norm() - 1.0) < 1e-9);
    CHECK(std::abs(p.u.norm() - 1.0) < 1e-9);
  }
}

TEST_CASE("fit_icca stops early when the residual vanishes") {
  GroupStructure s = so2_structure(4);
  PlantedRank1 data = make_rank1(s, GroupElement::identity(s),
                                 GroupElement::identity(s), 2.0, 50, 16);
  IccaFit fit = fit_icca(data.x, data.y, 2, fast_options());
  CHECK(fit.model.early_stopped);
  CHECK(fit.model.pairs.size() == 1);
}

TEST_CASE("reconstruction") {
  GroupStructure s = so2_structure(4);
  std::mt19937_64 rng(18);
  GroupElement mu_x = random_element(s, rng, 0.2);
  GroupElement mu_y = random_element(s, rng, 0.2);
  PlantedRank1 data = make_rank1(s, mu_x, mu_y, 2.0, 80, 20);
  IccaFit fit = fit_icca(data.x, data.y, 1, fast_options());

  SUBCASE("planted slope-2 model maps the geodesic correctly") {
    for (double t : {-0.3, 0.05, 0.25}) {
      GroupElement x = compose(mu_x, exp_map(data.v0.scaled(t)));
      GroupElement want = compose(mu_y, exp_map(data.v0.scaled(2.0 * t)));
      CHECK(riemannian_distance(reconstruct(x, fit.model), want) < 1e-3);
    }
  }
  SUBCASE("the mean maps near the output mean") {
    GroupElement got = reconstruct(mu_x, fit.model);
    CHECK(riemannian_distance(got, mu_y) < 1e-3);
  }
  SUBCASE("outputs always satisfy manifold invariants") {
    for (int i = 0; i < 20; ++i) {
      GroupElement x = random_element(s, rng, 0.5);
      CHECK(reconstruct(x, fit.model).satisfies_invariants(1e-9));
    }
  }
  SUBCASE("structure mismatch throws") {
    GroupElement other = GroupElement::identity(so2_structure(2));
    CHECK_THROWS_AS(reconstruct(other, fit.model), StructureMismatch);
  }
}

TEST_CASE("intrinsic mse on planted reconstruction is tiny") {
  GroupStructure s = so2_structure(4);
  PlantedRank1 data = make_rank1(s, GroupElement::identity(s),
                                 GroupElement::identity(s), 2.0, 60, 22);
  IccaFit fit = fit_icca(data.x, data.y, 1, fast_options());
  std::vector<GroupElement> recon;
  for (const GroupElement& x : data.x) recon.push_back(reconstruct(x, fit.model));
  CHECK(mse_intrinsic(recon, data.y) < 1e-6);
}

TEST_CASE("gauge invariance: joint left-translation is absorbed") {
  GroupStructure s = so2_structure(4);
  std::mt19937_64 rng(24);
  std::vector<GroupElement> xs, ys;
  AlgebraVector dir = random_unit(s, rng);
  std::uniform_real_distribution<double> amp(-0.4, 0.4);
  std::normal_distribution<double> noise(0.0, 0.02);
  for (int i = 0; i < 50; ++i) {
    const double t = amp(rng);
    Eigen::VectorXd cx = t * dir.coords();
    Eigen::VectorXd cy = 1.5 * t * dir.coords();
    for (int j = 0; j < 4; ++j) {
      cx[j] += noise(rng);
      cy[j] += noise(rng);
    }
    xs.push_back(exp_map(AlgebraVector(s, cx)));
    ys.push_back(exp_map(AlgebraVector(s, cy)));
  }
  GroupElement g = random_element(s, rng);
  std::vector<GroupElement> xs2, ys2;
  for (const GroupElement& x : xs) xs2.push_back(compose(g, x));
  for (const GroupElement& y : ys) ys2.push_back(compose(g, y));

  IccaOptions opts = fast_options();
  IccaFit base = fit_icca(xs, ys, 1, opts);
  IccaFit moved = fit_icca(xs2, ys2, 1, opts);
  CHECK((base.model.pairs[0].v.coords() - moved.model.pairs[0].v.coords())
            .lpNorm<Eigen::Infinity>() < 1e-6);
  CHECK((base.model.pairs[0].u.coords() - moved.model.pairs[0].u.coords())
            .lpNorm<Eigen::Infinity>() < 1e-6);
  CHECK(base.model.pairs[0].regression.slope ==
        doctest::Approx(moved.model.pairs[0].regression.slope).epsilon(1e-6));
}

TEST_CASE("joint mode produces a non-increasing loss trace") {
  GroupStructure s = testutil::mixed_structure();
  std::mt19937_64 rng(26);
  std::vector<GroupElement> xs, ys;
  for (int i = 0; i < 40; ++i) {
    GroupElement x = random_element(s, rng, 0.15);
    xs.push_back(x);
    ys.push_back(compose(x, random_element(s, rng, 0.05)));
  }
  IccaOptions opts = fast_options();
  opts.mode = IccaMode::Joint;
  IccaFit fit = fit_icca(xs, ys, 1, opts);
  const std::vector<double>& trace = fit.model.loss_traces[0];
  REQUIRE(trace.size() >= 2);
  for (size_t i = 1; i < trace.size(); ++i) {
    CHECK(trace[i] <= trace[i - 1] + 1e-12);
  }
}

TEST_CASE("paper mode records a trace that ends at or below its start") {
  GroupStructure s = testutil::mixed_structure();
  std::mt19937_64 rng(28);
  std::vector<GroupElement> xs, ys;
  for (int i = 0; i < 40; ++i) {
    GroupElement x = random_element(s, rng, 0.15);
    xs.push_back(x);
    ys.push_back(compose(x, random_element(s, rng, 0.05)));
  }
  IccaFit fit = fit_icca(xs, ys, 1, fast_options());
  const std::vector<double>& trace = fit.model.loss_traces[0];
  REQUIRE(trace.size() >= 2);
  CHECK(trace.back() <= trace.front() + 1e-12);
}

TEST_CASE("euclidean cca") {
  SUBCASE("1-D linear views: perfect correlation, slope-2 reconstruction") {
    std::mt19937_64 rng(30);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<Eigen::VectorXd> xs, ys;
    for (int i = 0; i < 200; ++i) {
      Eigen::VectorXd x(1), y(1);
      x[0] = noise(rng);
      y[0] = 2.0 * x[0];
      xs.push_back(x);
      ys.push_back(y);
    }
    EuclideanCcaModel model = fit_euclidean_cca(xs, ys, 1);
    CHECK(model.correlations[0] == doctest::Approx(1.0).epsilon(1e-6));
    Eigen::VectorXd probe(1);
    probe[0] = 0.7;
    CHECK(reconstruct(probe, model)[0] == doctest::Approx(1.4).epsilon(1e-6));
  }
  SUBCASE("independent views: top correlation stays small") {
    std::mt19937_64 rng(32);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<Eigen::VectorXd> xs, ys;
    for (int i = 0; i < 1000; ++i) {
      Eigen::VectorXd x(4), y(4);
      for (int j = 0; j < 4; ++j) {
        x[j] = noise(rng);
        y[j] = noise(rng);
      }
      xs.push_back(x);
      ys.push_back(y);
    }
    EuclideanCcaModel model = fit_euclidean_cca(xs, ys, 1);
    CHECK(model.correlations[0] < 0.2);
  }
  SUBCASE("tight rotation clusters reconstruct off the manifold") {
    GroupStructure s = so2_structure(2);
    std::mt19937_64 rng(0);
    std::vector<GroupElement> gx, gy;
    std::vector<Eigen::VectorXd> xs, ys;
    for (int i = 0; i < 300; ++i) {
      GroupElement x = random_element(s, rng, 0.12);
      GroupElement y = compose(x, random_element(s, rng, 0.03));
      xs.push_back(x.embedding());
      ys.push_back(y.embedding());
      gx.push_back(std::move(x));
      gy.push_back(std::move(y));
    }
    EuclideanCcaModel model = fit_euclidean_cca(xs, ys, 1);
    bool saw_shrunk_det = false;
    for (const Eigen::VectorXd& x : xs) {
      const Eigen::VectorXd y = reconstruct(x, model);
      for (int b = 0; b < 2; ++b) {
        Eigen::Matrix2d m;
        m << y[4 * b], y[4 * b + 1], y[4 * b + 2], y[4 * b + 3];
        if (m.determinant() < 1.0 - 1e-4) saw_shrunk_det = true;
      }
    }
    CHECK(saw_shrunk_det);
  }
  SUBCASE("length mismatch throws") {
    std::vector<Eigen::VectorXd> xs(3, Eigen::VectorXd::Zero(2));
    std::vector<Eigen::VectorXd> ys(2, Eigen::VectorXd::Zero(2));
    CHECK_THROWS_AS(fit_euclidean_cca(xs, ys, 1), LengthMismatch);
  }
}

TEST_CASE("mse") {
  GroupStructure s = so2_structure(1);
  GroupElement a = GroupElement::identity(s);
  GroupElement b = exp_map(AlgebraVector(s, Eigen::VectorXd::Constant(1, 0.3)));

  SUBCASE("identical lists give zero") {
    std::vector<GroupElement> pts{a, b};
    CHECK(mse_intrinsic(pts, pts) == 0.0);
    CHECK(mse_ambient(pts, pts) == 0.0);
  }
  SUBCASE("single SO2 pair, intrinsic") {
    std::vector<GroupElement> lhs{a}, rhs{b};
    CHECK(mse_intrinsic(lhs, rhs) == doctest::Approx(0.09).epsilon(1e-12));
  }
  SUBCASE("single SO2 pair, ambient per-entry convention") {
    // Direct 2x2 computation: entry-wise squared difference of the two
    // rotation matrices over the 4 entries, which collapses to 1 - cos 0.3.
    const double c = std::cos(0.3), sn = std::sin(0.3);
    const double direct =
        ((1 - c) * (1 - c) * 2 + sn * sn * 2) / 4.0;
    std::vector<GroupElement> lhs{a}, rhs{b};
    CHECK(mse_ambient(lhs, rhs) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(mse_ambient(lhs, rhs) == doctest::Approx(1.0 - c).epsilon(1e-12));
  }
  SUBCASE("ambient overload for raw predictions") {
    std::vector<Eigen::VectorXd> preds{b.embedding()};
    std::vector<GroupElement> ref{b};
    CHECK(mse_ambient(preds, ref) == 0.0);
    CHECK_THROWS_AS(mse_ambient(preds, std::vector<GroupElement>{}),
                    LengthMismatch);
  }
}
