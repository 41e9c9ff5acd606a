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

#include "liecca/stats.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "geodesic_profile.hpp"
#include "liecca/errors.hpp"

namespace liecca {

double riemannian_distance(const GroupElement& x, const GroupElement& y) {
  return log_map(compose(inverse(x), y)).norm();
}

double bch_distance(const GroupElement& x, const GroupElement& y) {
  return (log_map(y).coords() - log_map(x).coords()).norm();
}

GroupElement intrinsic_mean(std::span<const GroupElement> points, double tol,
                            int max_iter) {
  if (points.empty()) throw Error("intrinsic_mean: empty point list");
  const GroupStructure& s = points[0].structure();
  for (const GroupElement& p : points) {
    if (p.structure() != s) {
      throw StructureMismatch("intrinsic_mean: mixed structures");
    }
  }

  GroupElement mu = points[0];
  const double weight = 1.0 / static_cast<double>(points.size());
  double step_norm = 0.0;
  for (int iter = 0; iter < max_iter; ++iter) {
    Eigen::VectorXd step = Eigen::VectorXd::Zero(s.algebra_dim());
    const GroupElement mu_inv = inverse(mu);
    for (const GroupElement& p : points) {
      step += weight * log_map(compose(mu_inv, p)).coords();
    }
    step_norm = step.norm();
    if (step_norm < tol) return mu;
    mu = compose(mu, exp_map(AlgebraVector(s, step)));
  }
  throw NoConvergence("intrinsic_mean: no convergence after " +
                          std::to_string(max_iter) +
                          " iterations (final step norm " +
                          std::to_string(step_norm) + ")",
                      step_norm);
}

Eigen::VectorXd extrinsic_mean(std::span<const GroupElement> points) {
  if (points.empty()) throw Error("extrinsic_mean: empty point list");
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(points[0].embedding().size());
  for (const GroupElement& p : points) {
    if (p.structure() != points[0].structure()) {
      throw StructureMismatch("extrinsic_mean: mixed structures");
    }
    mean += p.embedding();
  }
  return mean / static_cast<double>(points.size());
}

double default_t_bound(const GroupStructure& structure) {
  return std::numbers::pi * std::sqrt(static_cast<double>(structure.block_count()));
}

ProjectionResult project_to_subgroup(const GroupElement& x,
                                     const AlgebraVector& v, double t_bound) {
  if (std::abs(v.norm() - 1.0) > 1e-9) {
    throw UnitNormViolation("project_to_subgroup: generator norm " +
                            std::to_string(v.norm()));
  }
  if (t_bound == 0.0) t_bound = default_t_bound(x.structure());
  if (t_bound <= 0.0) throw Error("project_to_subgroup: t_bound must be > 0");

  const detail::SubgroupDistanceProfile profile(x, v);
  const detail::LineMinimum m = detail::minimize_on_interval(
      [&profile](double t, bool* valid) {
        return profile.squared_distance(t, valid);
      },
      -t_bound, t_bound, kProjectionGridNodes, 1e-8);
  if (!m.valid) {
    throw AngleAtCut(
        "project_to_subgroup: every grid node hit the logarithm cut");
  }
  GroupElement point = exp_map(v.scaled(m.t));
  const double residual = riemannian_distance(x, point);
  return ProjectionResult{m.t, std::move(point), residual};
}

}  // namespace liecca
