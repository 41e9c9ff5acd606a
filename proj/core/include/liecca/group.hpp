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
// Block-product Lie group of SO(2)/SO(3) rotations: the configuration space
// of an articulated chain. Elements are per-block rotation matrices; the
// algebra is the flat vector of block coordinates (one angle per SO(2)
// block, a rotation vector per SO(3) block).

#ifndef LIECCA_GROUP_HPP
#define LIECCA_GROUP_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "liecca/errors.hpp"

namespace liecca {

enum class BlockKind : std::uint8_t { SO2, SO3 };

/// Returns "SO2" or "SO3".
std::string to_string(BlockKind kind);
/// Inverse of to_string; throws Error on anything else.
BlockKind block_kind_from_string(const std::string& name);

/// Ordered list of rotation blocks making up a product group.
///
/// The structure fixes both the algebra layout (1 coordinate per SO(2)
/// block, 3 per SO(3) block) and the ambient embedding layout (4 entries
/// per SO(2) block, 9 per SO(3) block, row-major within each block).
class GroupStructure {
 public:
  /// Throws Error on an empty block list.
  explicit GroupStructure(std::vector<BlockKind> kinds);

  /// `count` copies of a single block kind.
  static GroupStructure uniform(BlockKind kind, int count);

  int block_count() const { return static_cast<int>(kinds_.size()); }
  BlockKind kind(int block) const { return kinds_[static_cast<size_t>(block)]; }
  const std::vector<BlockKind>& kinds() const { return kinds_; }

  /// Total algebra dimension (sum of per-block coordinate counts).
  int algebra_dim() const { return algebra_dim_; }
  /// Total embedding dimension (sum of per-block matrix entry counts).
  int ambient_dim() const { return ambient_dim_; }

  /// Offset of a block's coordinates within a flat algebra vector.
  int algebra_offset(int block) const {
    return algebra_offsets_[static_cast<size_t>(block)];
  }
  /// Offset of a block's matrix entries within a flat embedding vector.
  int ambient_offset(int block) const {
    return ambient_offsets_[static_cast<size_t>(block)];
  }

  friend bool operator==(const GroupStructure& a, const GroupStructure& b) {
    return a.kinds_ == b.kinds_;
  }
  friend bool operator!=(const GroupStructure& a, const GroupStructure& b) {
    return !(a == b);
  }

 private:
  std::vector<BlockKind> kinds_;
  std::vector<int> algebra_offsets_;
  std::vector<int> ambient_offsets_;
  int algebra_dim_ = 0;
  int ambient_dim_ = 0;
};

/// Element of the product Lie algebra: a flat coordinate vector over the
/// structure's per-block basis. Immutable after construction.
class AlgebraVector {
 public:
  /// Throws StructureMismatch on a length mismatch, Error on non-finite
  /// coordinates.
  AlgebraVector(GroupStructure structure, Eigen::VectorXd coords);

  static AlgebraVector zero(const GroupStructure& structure);

  const GroupStructure& structure() const { return structure_; }
  const Eigen::VectorXd& coords() const { return coords_; }
  double norm() const { return coords_.norm(); }

  /// Coordinates of one block: length-1 segment for SO(2), length-3 for
  /// SO(3).
  Eigen::VectorXd block_coords(int block) const;

  /// Same structure, coordinates scaled by `factor`.
  AlgebraVector scaled(double factor) const;

 private:
  GroupStructure structure_;
  Eigen::VectorXd coords_;
};

/// Group element: one rotation matrix per block, stored as a flat
/// row-major embedding vector. Immutable after construction; all
/// operations below are pure, so values may be shared freely across
/// threads.
class GroupElement {
 public:
  /// Blockwise identity.
  static GroupElement identity(const GroupStructure& structure);

  /// Builds an element from per-block matrices (2x2 for SO(2), 3x3 for
  /// SO(3)), checking orthogonality and det = +1 to 1e-9.
  static GroupElement from_blocks(const GroupStructure& structure,
                                  std::span<const Eigen::MatrixXd> blocks);

  /// Builds an element from a flat row-major embedding, with the same
  /// invariant checks as from_blocks.
  static GroupElement from_embedding(const GroupStructure& structure,
                                     Eigen::VectorXd embedding);

  const GroupStructure& structure() const { return structure_; }

  /// Flat row-major embedding of all blocks (length ambient_dim).
  const Eigen::VectorXd& embedding() const { return data_; }

  /// 2x2 rotation matrix of an SO(2) block.
  Eigen::Matrix2d so2_block(int block) const;
  /// 3x3 rotation matrix of an SO(3) block.
  Eigen::Matrix3d so3_block(int block) const;
  /// Any block as a dynamic matrix.
  Eigen::MatrixXd block(int block) const;

  /// Max deviation from orthogonality and unit determinant over all
  /// blocks; 0 for an exact group element.
  double manifold_defect() const;

  /// True when manifold_defect() <= tol (default matches the type
  /// invariant).
  bool satisfies_invariants(double tol = 1e-9) const;

 private:
  GroupElement(GroupStructure structure, Eigen::VectorXd data)
      : structure_(std::move(structure)), data_(std::move(data)) {}

  friend GroupElement exp_map(const AlgebraVector& v);
  friend GroupElement compose(const GroupElement& a, const GroupElement& b);
  friend GroupElement inverse(const GroupElement& g);

  GroupStructure structure_;
  Eigen::VectorXd data_;
};

/// Exponential map: per-block planar rotation / Rodrigues formula. Total
/// on finite inputs.
GroupElement exp_map(const AlgebraVector& v);

/// Logarithmic map on the principal branch: SO(2) angles in (-pi, pi],
/// SO(3) rotation vectors with norm < pi. Throws AngleAtCut when any
/// SO(3) block sits within 1e-6 of angle pi.
AlgebraVector log_map(const GroupElement& g);

/// Blockwise matrix product. Re-orthonormalizes any block whose drift
/// from orthogonality exceeds 1e-12, so long composition chains stay on
/// the manifold. Throws StructureMismatch.
GroupElement compose(const GroupElement& a, const GroupElement& b);

/// Blockwise transpose.
GroupElement inverse(const GroupElement& g);

/// Max orthogonality/determinant defect of a raw flat embedding
/// interpreted over `structure`, without constructing an element. Lets
/// off-manifold vectors (e.g. Euclidean reconstructions) be scored.
double ambient_manifold_defect(const GroupStructure& structure,
                               const Eigen::VectorXd& embedding);

}  // namespace liecca

#endif  // LIECCA_GROUP_HPP
