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
// Principal component analysis in two flavors: classical centered PCA on
// flat vectors, and intrinsic PCA on the block-product group, where
// components are principal geodesic curves {exp(t v)} fitted by projection
// residual minimization.

#ifndef LIECCA_PCA_HPP
#define LIECCA_PCA_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "liecca/group.hpp"

namespace liecca {

struct EuclideanPcaResult {
  /// Unit directions, sign-canonicalized (first coordinate with magnitude
  /// above 1e-12 is positive), strongest first.
  std::vector<Eigen::VectorXd> directions;
  /// Sample covariance eigenvalues matching `directions`.
  std::vector<double> eigenvalues;
  /// Set when the covariance rank fell short of the request; `directions`
  /// then holds the achievable prefix.
  bool degenerate = false;
};

/// Top-k eigenvectors of the sample covariance of `data`. Requires at
/// least two points and k <= dimension.
EuclideanPcaResult fit_euclidean_pca(const std::vector<Eigen::VectorXd>& data,
                                     int k);

struct IpcaOptions {
  /// Relative loss-change tolerance of the generator descent.
  double tol = 1e-8;
  /// Outer iteration cap per start.
  int max_iter = 300;
  /// Number of starting directions (top Euclidean-PCA direction of the
  /// log-coordinates plus random ones).
  int multistart = 8;
  /// Central-difference step for the loss gradient.
  double fd_step = 1e-5;
  /// Initial backtracking step, halved until decrease.
  double line_search_start = 0.1;
  int line_search_max_halvings = 40;
  /// Projection search bound; 0 selects pi * sqrt(block count).
  double t_bound = 0.0;
  /// Seed for the random starting directions.
  std::uint64_t seed = 20260811;
};

struct IpcaModel {
  GroupElement mean;
  /// Unit generators of the principal geodesic curves, sign-canonicalized.
  std::vector<AlgebraVector> generators;
  /// Final projection-residual loss after fitting each component.
  std::vector<double> residual_losses;
  /// False when some component hit the iteration cap without meeting
  /// tolerance (best-so-far generators are still returned).
  bool converged = true;
  /// Set when the data had no usable spread; generators then default to
  /// canonical basis directions.
  bool degenerate = false;
};

/// Fits `k` principal geodesic curves: the intrinsic mean, a first
/// generator minimizing the summed squared projection residuals, and
/// subsequent generators fitted on left-residualized points.
IpcaModel fit_ipca(std::span<const GroupElement> points, int k,
                   const IpcaOptions& options = {});

}  // namespace liecca

#endif  // LIECCA_PCA_HPP
