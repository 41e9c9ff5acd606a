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
// Intrinsic statistics on the block-product group: Riemannian distance and
// its commutator-free approximation, intrinsic (Karcher) and extrinsic
// means, and projection onto one-parameter subgroups. All operations are
// pure; projections of different points may run concurrently.

#ifndef LIECCA_STATS_HPP
#define LIECCA_STATS_HPP

#include <Eigen/Dense>
#include <span>

#include "liecca/group.hpp"

namespace liecca {

/// Riemannian (intrinsic) distance D(x, y) = ||log(x^-1 y)||_2.
/// Throws AngleAtCut when the relative rotation of some SO(3) block sits
/// at the logarithm cut.
double riemannian_distance(const GroupElement& x, const GroupElement& y);

/// Commutator-free approximation ||log(y) - log(x)||_2. Agrees with
/// riemannian_distance exactly on abelian (pure-SO2) structures.
double bch_distance(const GroupElement& x, const GroupElement& y);

/// Intrinsic (Karcher) mean by fixed-point iteration:
///   mu <- mu * exp(mean_i log(mu^-1 x_i)),
/// starting from the first point, stopping when the update step norm drops
/// below `tol`. Throws NoConvergence (reporting the final step norm) if
/// `max_iter` is reached first, and Error on an empty list.
GroupElement intrinsic_mean(std::span<const GroupElement> points,
                            double tol = 1e-9, int max_iter = 200);

/// Arithmetic mean of the flat matrix embeddings. Deliberately not a group
/// element in general; this is the Euclidean baseline's statistic.
Eigen::VectorXd extrinsic_mean(std::span<const GroupElement> points);

/// Projection of a point onto the one-parameter subgroup {exp(t v)}.
struct ProjectionResult {
  /// Geodesic parameter of the projection.
  double t_star = 0.0;
  /// exp(t_star * v).
  GroupElement point;
  /// D(x, point).
  double residual_distance = 0.0;
};

/// Default search bound pi * sqrt(block count), wide enough for any
/// single-geodesic displacement the data generator can produce.
double default_t_bound(const GroupStructure& structure);

/// Number of coarse grid nodes used by project_to_subgroup.
inline constexpr int kProjectionGridNodes = 257;

/// Minimizes D(x, exp(t v)) over t in [-t_bound, t_bound] with a coarse
/// 257-node grid scan (ties broken toward smaller |t|) followed by
/// golden-section refinement to a bracket below 1e-8. Grid nodes whose
/// distance evaluation lands on the logarithm cut are skipped.
///
/// `v` must be unit norm to 1e-9 (UnitNormViolation otherwise) and
/// `t_bound` positive. When `t_bound` is 0 the structure default is used.
ProjectionResult project_to_subgroup(const GroupElement& x,
                                     const AlgebraVector& v,
                                     double t_bound = 0.0);

}  // namespace liecca

#endif  // LIECCA_STATS_HPP
