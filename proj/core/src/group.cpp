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

#include "liecca/group.hpp"

#include <cmath>
#include <utility>

#include "liecca/rotations.hpp"

namespace liecca {

namespace {

constexpr double kInvariantTol = 1e-9;
constexpr double kDriftTol = 1e-12;

int coords_of(BlockKind kind) { return kind == BlockKind::SO2 ? 1 : 3; }
int entries_of(BlockKind kind) { return kind == BlockKind::SO2 ? 4 : 9; }

using RowMat2 = Eigen::Matrix<double, 2, 2, Eigen::RowMajor>;
using RowMat3 = Eigen::Matrix<double, 3, 3, Eigen::RowMajor>;

// Orthogonality + determinant defect of one block stored row-major at `p`.
template <int N>
double block_defect(const double* p) {
  Eigen::Map<const Eigen::Matrix<double, N, N, Eigen::RowMajor>> b(p);
  const double ortho =
      (b.transpose() * b - Eigen::Matrix<double, N, N>::Identity())
          .cwiseAbs()
          .maxCoeff();
  return std::max(ortho, std::abs(b.determinant() - 1.0));
}

}  // namespace

std::string to_string(BlockKind kind) {
  return kind == BlockKind::SO2 ? "SO2" : "SO3";
}

BlockKind block_kind_from_string(const std::string& name) {
  if (name == "SO2") return BlockKind::SO2;
  if (name == "SO3") return BlockKind::SO3;
  throw Error("unknown block kind '" + name + "'");
}

GroupStructure::GroupStructure(std::vector<BlockKind> kinds)
    : kinds_(std::move(kinds)) {
  if (kinds_.empty()) throw Error("GroupStructure: empty block list");
  algebra_offsets_.reserve(kinds_.size());
  ambient_offsets_.reserve(kinds_.size());
  for (BlockKind k : kinds_) {
    algebra_offsets_.push_back(algebra_dim_);
    ambient_offsets_.push_back(ambient_dim_);
    algebra_dim_ += coords_of(k);
    ambient_dim_ += entries_of(k);
  }
}

GroupStructure GroupStructure::uniform(BlockKind kind, int count) {
  return GroupStructure(std::vector<BlockKind>(static_cast<size_t>(count), kind));
}

AlgebraVector::AlgebraVector(GroupStructure structure, Eigen::VectorXd coords)
    : structure_(std::move(structure)), coords_(std::move(coords)) {
  if (coords_.size() != structure_.algebra_dim()) {
    throw StructureMismatch("AlgebraVector: got " +
                            std::to_string(coords_.size()) +
                            " coordinates, structure needs " +
                            std::to_string(structure_.algebra_dim()));
  }
  if (!coords_.allFinite()) {
    throw Error("AlgebraVector: non-finite coordinates");
  }
}

AlgebraVector AlgebraVector::zero(const GroupStructure& structure) {
  return AlgebraVector(structure, Eigen::VectorXd::Zero(structure.algebra_dim()));
}

Eigen::VectorXd AlgebraVector::block_coords(int block) const {
  return coords_.segment(structure_.algebra_offset(block),
                         coords_of(structure_.kind(block)));
}

AlgebraVector AlgebraVector::scaled(double factor) const {
  return AlgebraVector(structure_, coords_ * factor);
}

GroupElement GroupElement::identity(const GroupStructure& structure) {
  Eigen::VectorXd data = Eigen::VectorXd::Zero(structure.ambient_dim());
  for (int b = 0; b < structure.block_count(); ++b) {
    const int off = structure.ambient_offset(b);
    if (structure.kind(b) == BlockKind::SO2) {
      data[off] = 1.0;
      data[off + 3] = 1.0;
    } else {
      data[off] = 1.0;
      data[off + 4] = 1.0;
      data[off + 8] = 1.0;
    }
  }
  return GroupElement(structure, std::move(data));
}

GroupElement GroupElement::from_blocks(const GroupStructure& structure,
                                       std::span<const Eigen::MatrixXd> blocks) {
  if (static_cast<int>(blocks.size()) != structure.block_count()) {
    throw StructureMismatch("from_blocks: block count mismatch");
  }
  Eigen::VectorXd data(structure.ambient_dim());
  for (int b = 0; b < structure.block_count(); ++b) {
    const int n = structure.kind(b) == BlockKind::SO2 ? 2 : 3;
    const Eigen::MatrixXd& m = blocks[static_cast<size_t>(b)];
    if (m.rows() != n || m.cols() != n) {
      throw StructureMismatch("from_blocks: block " + std::to_string(b) +
                              " has wrong shape");
    }
    double* p = data.data() + structure.ambient_offset(b);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) *p++ = m(i, j);
  }
  return from_embedding(structure, std::move(data));
}

GroupElement GroupElement::from_embedding(const GroupStructure& structure,
                                          Eigen::VectorXd embedding) {
  if (embedding.size() != structure.ambient_dim()) {
    throw StructureMismatch("from_embedding: length mismatch");
  }
  GroupElement g(structure, std::move(embedding));
  if (!g.satisfies_invariants(kInvariantTol)) {
    throw Error("GroupElement: block violates orthogonality/determinant "
                "invariants (defect " +
                std::to_string(g.manifold_defect()) + ")");
  }
  return g;
}

Eigen::Matrix2d GroupElement::so2_block(int block) const {
  return Eigen::Map<const RowMat2>(data_.data() + structure_.ambient_offset(block));
}

Eigen::Matrix3d GroupElement::so3_block(int block) const {
  return Eigen::Map<const RowMat3>(data_.data() + structure_.ambient_offset(block));
}

Eigen::MatrixXd GroupElement::block(int block) const {
  if (structure_.kind(block) == BlockKind::SO2) return so2_block(block);
  return so3_block(block);
}

double GroupElement::manifold_defect() const {
  double worst = 0.0;
  for (int b = 0; b < structure_.block_count(); ++b) {
    const double* p = data_.data() + structure_.ambient_offset(b);
    const double d = structure_.kind(b) == BlockKind::SO2 ? block_defect<2>(p)
                                                          : block_defect<3>(p);
    worst = std::max(worst, d);
  }
  return worst;
}

bool GroupElement::satisfies_invariants(double tol) const {
  return data_.allFinite() && manifold_defect() <= tol;
}

GroupElement exp_map(const AlgebraVector& v) {
  const GroupStructure& s = v.structure();
  Eigen::VectorXd data(s.ambient_dim());
  const Eigen::VectorXd& c = v.coords();
  for (int b = 0; b < s.block_count(); ++b) {
    double* p = data.data() + s.ambient_offset(b);
    if (s.kind(b) == BlockKind::SO2) {
      Eigen::Map<RowMat2> out(p);
      out = rot::so2_exp(c[s.algebra_offset(b)]);
    } else {
      Eigen::Map<RowMat3> out(p);
      out = rot::so3_exp(c.segment<3>(s.algebra_offset(b)));
    }
  }
  return GroupElement(s, std::move(data));
}

AlgebraVector log_map(const GroupElement& g) {
  const GroupStructure& s = g.structure();
  Eigen::VectorXd coords(s.algebra_dim());
  for (int b = 0; b < s.block_count(); ++b) {
    if (s.kind(b) == BlockKind::SO2) {
      coords[s.algebra_offset(b)] = rot::so2_log(g.so2_block(b));
    } else {
      coords.segment<3>(s.algebra_offset(b)) = rot::so3_log(g.so3_block(b));
    }
  }
  return AlgebraVector(s, std::move(coords));
}

GroupElement compose(const GroupElement& a, const GroupElement& b) {
  if (a.structure() != b.structure()) {
    throw StructureMismatch("compose: incompatible structures");
  }
  const GroupStructure& s = a.structure();
  Eigen::VectorXd data(s.ambient_dim());
  for (int blk = 0; blk < s.block_count(); ++blk) {
    double* p = data.data() + s.ambient_offset(blk);
    if (s.kind(blk) == BlockKind::SO2) {
      Eigen::Map<RowMat2> out(p);
      out = a.so2_block(blk) * b.so2_block(blk);
      if (block_defect<2>(p) > kDriftTol) out = rot::project_rotation(out.eval());
    } else {
      Eigen::Map<RowMat3> out(p);
      out = a.so3_block(blk) * b.so3_block(blk);
      if (block_defect<3>(p) > kDriftTol) out = rot::project_rotation(out.eval());
    }
  }
  return GroupElement(s, std::move(data));
}

double ambient_manifold_defect(const GroupStructure& structure,
                               const Eigen::VectorXd& embedding) {
  if (embedding.size() != structure.ambient_dim()) {
    throw StructureMismatch("ambient_manifold_defect: length mismatch");
  }
  double worst = 0.0;
  for (int b = 0; b < structure.block_count(); ++b) {
    const double* p = embedding.data() + structure.ambient_offset(b);
    const double d = structure.kind(b) == BlockKind::SO2 ? block_defect<2>(p)
                                                         : block_defect<3>(p);
    worst = std::max(worst, d);
  }
  return worst;
}

GroupElement inverse(const GroupElement& g) {
  const GroupStructure& s = g.structure();
  Eigen::VectorXd data(s.ambient_dim());
  for (int b = 0; b < s.block_count(); ++b) {
    double* p = data.data() + s.ambient_offset(b);
    if (s.kind(b) == BlockKind::SO2) {
      Eigen::Map<RowMat2> out(p);
      out = g.so2_block(b).transpose();
    } else {
      Eigen::Map<RowMat3> out(p);
      out = g.so3_block(b).transpose();
    }
  }
  return GroupElement(s, std::move(data));
}

}  // namespace liecca
