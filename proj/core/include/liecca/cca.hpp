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
// Canonical correlation analysis of paired point sets on the block-product
// group. The intrinsic variant fits pairs of unit generators (v, u) whose
// one-parameter subgroups jointly explain both views: each pair minimizes
//
//   sum_i [ min_t D^2(x'_i, exp(t v)) + min_s D^2(y'_i, exp(s u))
//           + D^2(exp(t*_i v), exp(s*_i u)) ]
//
// over unit v, u, with a per-pair linear regression mapping the input-side
// geodesic parameter t* to the output-side s*. Later pairs are fitted
// recursively on residualized points, and reconstruction maps a new x to a
// point on the manifold by construction. A classical two-view Euclidean CCA
// on the flat matrix embeddings serves as the off-manifold baseline.

#ifndef LIECCA_CCA_HPP
#define LIECCA_CCA_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "liecca/group.hpp"
#include "liecca/pca.hpp"

namespace liecca {

/// Optimal projection parameters of the two views, aligned by point index.
struct TimePairs {
  std::vector<double> t_star;
  std::vector<double> s_star;
};

/// Ordinary least squares of s on t, with R^2.
struct TimeRegression {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  /// Set when var(t) <= 1e-12; slope is then 0 and the intercept mean(s).
  bool degenerate = false;
};

/// OLS fit of s* on t*. Requires at least two samples.
TimeRegression fit_time_regression(const TimePairs& times);

/// One fitted canonical component: unit generator pair and the regression
/// mapping the input-side parameter to the output side. Signs are
/// canonicalized so v's first significant coordinate is positive and the
/// regression slope is >= 0 (u flips to absorb a negative slope).
struct CanonicalPair {
  AlgebraVector v;
  AlgebraVector u;
  TimeRegression regression;
  /// Final joint objective value for this pair.
  double pair_loss = 0.0;
};

enum class IccaMode {
  /// Times updated by pure projection onto the current subgroups; the
  /// literal alternation, whose loss trace is recorded but not guaranteed
  /// monotone.
  Paper,
  /// Times updated by 1-D minimization of the full objective including the
  /// coupling term, making every recorded loss trace non-increasing.
  Joint,
};

std::string to_string(IccaMode mode);
IccaMode icca_mode_from_string(const std::string& name);

struct IccaOptions {
  /// Relative loss-change tolerance of the alternating stage.
  double tol = 1e-6;
  /// Outer iteration cap of the alternating stage.
  int max_iter = 200;
  IccaMode mode = IccaMode::Paper;
  /// Projection search bound; 0 selects pi * sqrt(block count).
  double t_bound = 0.0;
  /// Generator-descent settings shared with intrinsic PCA; also used for
  /// the initialization stage.
  IpcaOptions sphere = {};
};

struct IccaModel {
  GroupElement mu_x;
  GroupElement mu_y;
  GroupStructure structure;
  std::vector<CanonicalPair> pairs;
  /// Joint objective value per outer iteration, per pair; entry 0 is the
  /// initialization-stage loss.
  std::vector<std::vector<double>> loss_traces;
  IccaMode mode = IccaMode::Paper;
  /// Per pair: alternation met tolerance within the iteration cap.
  std::vector<bool> pair_converged;
  /// Per pair: the residual data had no usable spread.
  std::vector<bool> pair_degenerate;
  /// Fewer pairs than requested because the residual vanished.
  bool early_stopped = false;
};

/// Joint objective of one candidate pair on centered views: per-view
/// squared projection residuals plus the squared distance between the two
/// projections, evaluated at the per-point minimizers. Returns the loss
/// and those minimizers. Both generators must be unit norm.
std::pair<double, TimePairs> icca_pair_loss(std::span<const GroupElement> x_centered,
                                            std::span<const GroupElement> y_centered,
                                            const AlgebraVector& v,
                                            const AlgebraVector& u,
                                            double t_bound = 0.0);

/// Removes a fitted component from each point by left-composition with the
/// inverse projection: x_i <- exp(t_i v)^-1 x_i.
std::vector<GroupElement> residualize(std::span<const GroupElement> points,
                                      const AlgebraVector& v,
                                      std::span<const double> times);

/// Result of fitting a single canonical pair.
struct PairFit {
  CanonicalPair pair;
  /// Final per-point parameters (the regression's training data).
  TimePairs times;
  /// Joint loss per outer iteration, entry 0 from the initialization stage.
  std::vector<double> trace;
  bool converged = false;
  bool degenerate = false;
};

/// Fits the first canonical pair of raw (uncentered) views: computes the
/// intrinsic means, initializes each generator by the intrinsic-PCA
/// objective on its centered view, then alternates sphere-projected
/// gradient updates of (v, u) with per-point time updates until the
/// relative loss change drops below options.tol.
PairFit fit_first_pair(std::span<const GroupElement> x,
                       std::span<const GroupElement> y,
                       const IccaOptions& options = {});

/// Full fit plus per-pair training times (the model alone is what
/// serializes; the times feed diagnostics like the t*-s* scatter).
struct IccaFit {
  IccaModel model;
  std::vector<TimePairs> pair_times;
};

/// Fits `k` canonical pairs recursively on residualized views. Stops early
/// (flagged) when the residual spread drops below 1e-10.
IccaFit fit_icca(std::span<const GroupElement> x,
                 std::span<const GroupElement> y, int k,
                 const IccaOptions& options = {});

/// Reconstructs the output-side point for a new input: centers x, walks
/// the pairs accumulating regressed output parameters, and maps back
/// through the exponential at mu_y. The result is a valid group element by
/// construction.
GroupElement reconstruct(const GroupElement& x, const IccaModel& model);

/// Mean over points of the squared intrinsic distance D^2(a_i, b_i).
double mse_intrinsic(std::span<const GroupElement> a,
                     std::span<const GroupElement> b);

/// Mean over points and embedding entries of the squared embedding
/// difference -- the metric a Euclidean method can also be scored with.
double mse_ambient(std::span<const GroupElement> a,
                   std::span<const GroupElement> b);

/// Ambient MSE of raw embedding predictions against reference elements.
double mse_ambient(const std::vector<Eigen::VectorXd>& predictions,
                   std::span<const GroupElement> reference);

/// Classical two-view CCA on flat embeddings: whitened cross-covariance
/// SVD with ridge-regularized covariances, per-component score regression
/// t -> s, and a least-squares loading from the predicted score back to
/// the output ambient space. Reconstructions live in ambient space and are
/// not pulled back to the manifold.
struct EuclideanCcaModel {
  Eigen::VectorXd mean_x;
  Eigen::VectorXd mean_y;
  /// Score directions per component (applied to centered embeddings).
  std::vector<Eigen::VectorXd> x_directions;
  std::vector<Eigen::VectorXd> y_directions;
  /// Canonical correlations, strongest first.
  std::vector<double> correlations;
  std::vector<TimeRegression> score_regressions;
  /// Output-space loading per component.
  std::vector<Eigen::VectorXd> loadings;
};

/// Throws DegenerateData when a covariance stays rank-deficient after the
/// ridge.
EuclideanCcaModel fit_euclidean_cca(const std::vector<Eigen::VectorXd>& x,
                                    const std::vector<Eigen::VectorXd>& y,
                                    int k, double ridge = 1e-8);

/// Ambient-space reconstruction mean_y + sum_k shat^(k) loading^(k).
Eigen::VectorXd reconstruct(const Eigen::VectorXd& x_embedding,
                            const EuclideanCcaModel& model);

}  // namespace liecca

#endif  // LIECCA_CCA_HPP
