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

#include "liecca/pca.hpp"

#include <random>

#include "generator_fit.hpp"
#include "liecca/stats.hpp"

namespace liecca {

namespace {
constexpr double kDegenerateSpread = 1e-10;
}

EuclideanPcaResult fit_euclidean_pca(const std::vector<Eigen::VectorXd>& data,
                                     int k) {
  if (data.size() < 2) throw Error("fit_euclidean_pca: need at least 2 points");
  const Eigen::Index dim = data[0].size();
  if (k < 1 || k > dim) throw Error("fit_euclidean_pca: bad component count");

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  for (const auto& x : data) {
    if (x.size() != dim) throw LengthMismatch("fit_euclidean_pca: ragged data");
    mean += x;
  }
  mean /= static_cast<double>(data.size());

  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& x : data) {
    const Eigen::VectorXd c = x - mean;
    cov.noalias() += c * c.transpose();
  }
  cov /= static_cast<double>(data.size() - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw Error("fit_euclidean_pca: eigendecomposition failed");
  }
  // Eigenvalues come back ascending; walk from the top.
  const double lambda_max = std::max(solver.eigenvalues().maxCoeff(), 0.0);
  const double rank_cut = std::max(1e-12 * lambda_max, 1e-300);

  EuclideanPcaResult result;
  for (Eigen::Index j = dim - 1; j >= 0 && static_cast<int>(result.directions.size()) < k; --j) {
    const double lambda = solver.eigenvalues()[j];
    if (lambda <= rank_cut) break;
    Eigen::VectorXd dir = solver.eigenvectors().col(j);
    detail::canonicalize_sign(dir);
    result.directions.push_back(std::move(dir));
    result.eigenvalues.push_back(lambda);
  }
  result.degenerate = static_cast<int>(result.directions.size()) < k;
  return result;
}

IpcaModel fit_ipca(std::span<const GroupElement> points, int k,
                   const IpcaOptions& options) {
  if (points.empty()) throw Error("fit_ipca: empty point list");
  const GroupStructure& s = points[0].structure();
  if (k < 1 || k > s.algebra_dim()) throw Error("fit_ipca: bad component count");

  GroupElement mean = intrinsic_mean(points);
  const GroupElement mean_inv = inverse(mean);
  std::vector<GroupElement> centered;
  centered.reserve(points.size());
  for (const GroupElement& p : points) centered.push_back(compose(mean_inv, p));

  const double t_bound =
      options.t_bound > 0.0 ? options.t_bound : default_t_bound(s);
  std::mt19937_64 rng(options.seed);

  IpcaModel model{std::move(mean), {}, {}, true, false};
  for (int comp = 0; comp < k; ++comp) {
    double spread = 0.0;
    for (const GroupElement& c : centered) spread += log_map(c).coords().squaredNorm();
    if (spread < kDegenerateSpread) {
      model.degenerate = true;
      for (int j = comp; j < k; ++j) {
        model.generators.emplace_back(s, Eigen::VectorXd::Unit(s.algebra_dim(), j));
        model.residual_losses.push_back(spread);
      }
      break;
    }
    detail::GeneratorFit fit =
        detail::fit_best_generator(centered, t_bound, options, rng);
    model.converged = model.converged && fit.converged;
    // exp(t v) is invariant under jointly flipping the generator and its
    // times, so canonicalization does not disturb the residualization.
    if (detail::canonicalize_sign(fit.v)) {
      for (double& t : fit.times) t = -t;
    }
    model.generators.emplace_back(s, fit.v);
    model.residual_losses.push_back(fit.loss);
    if (comp + 1 < k) {
      centered = detail::residualize_left(centered, model.generators.back(),
                                          fit.times);
    }
  }
  return model;
}

}  // namespace liecca
