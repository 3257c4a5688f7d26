#pragma once

#include <Eigen/SparseCore>
#include <vector>

#include "willmore/mesh.hpp"

namespace willmore {

using SparseMatrix = Eigen::SparseMatrix<double>;  // column-major, int indices

/// Symmetric N x N nonzero pattern of a mesh (nodes i, j coupled when they
/// share an element), in compressed column form with sorted row indices.
/// Since the pattern is symmetric it doubles as compressed row storage.
///
/// Besides the pattern it stores two index maps used by assembly:
///  - element_slot(e, a, b): position of entry (elem[a], elem[b]) in the
///    value array,
///  - per-slot contribution lists (element-local entries summed into each
///    slot, ascending element order) for the gather phase of parallel
///    assembly. The same lists exist for node-indexed vectors.
class MeshPattern {
 public:
  explicit MeshPattern(const SurfaceMesh& mesh);

  int size() const { return n_; }
  int nonzeros() const { return static_cast<int>(rows_.size()); }
  int nodes_per_element() const { return nloc_; }
  int element_count() const { return n_elements_; }

  const std::vector<int>& col_ptr() const { return col_ptr_; }
  const std::vector<int>& row_index() const { return rows_; }

  int element_slot(int e, int a, int b) const {
    return element_slots_[(static_cast<std::size_t>(e) * nloc_ + a) * nloc_ + b];
  }
  const std::vector<int>& element_slots() const { return element_slots_; }

  /// Entry i of slot s sums local index slot_sources()[i] = e * nloc^2 + a * nloc + b
  /// for i in [slot_source_ptr()[s], slot_source_ptr()[s + 1]).
  const std::vector<int>& slot_source_ptr() const { return slot_ptr_; }
  const std::vector<int>& slot_sources() const { return slot_src_; }

  /// Same for nodes: local index e * nloc + a.
  const std::vector<int>& node_source_ptr() const { return node_ptr_; }
  const std::vector<int>& node_sources() const { return node_src_; }

  /// Position of (row, col) or -1.
  int find(int row, int col) const;

  /// An N x N matrix with this pattern and the given values.
  SparseMatrix matrix(const std::vector<double>& values) const;
  SparseMatrix matrix(const double* values) const;

 private:
  int n_ = 0;
  int nloc_ = 0;
  int n_elements_ = 0;
  std::vector<int> col_ptr_;
  std::vector<int> rows_;
  std::vector<int> element_slots_;
  std::vector<int> slot_ptr_, slot_src_;
  std::vector<int> node_ptr_, node_src_;
};

/// Pattern of a (B N) x (B N) matrix made of B x B blocks, each block
/// having the scalar pattern or being empty. Used to build the coupled
/// linear systems of the time stepper without triplet lists: every scalar
/// value array is added into the system value array through a slot map.
class BlockPattern {
 public:
  /// `present[r][c]` marks nonzero blocks (row block r, column block c).
  BlockPattern(const MeshPattern& scalar, const std::vector<std::vector<bool>>& present);

  int blocks() const { return blocks_; }
  int size() const { return blocks_ * n_; }
  int nonzeros() const { return static_cast<int>(rows_.size()); }

  /// slots(r, c)[k] is the system position of scalar nonzero k in block (r, c).
  const std::vector<int>& slots(int r, int c) const;

  /// Matrix with this pattern and all values zero.
  SparseMatrix zero_matrix() const;

 private:
  int blocks_ = 0;
  int n_ = 0;
  std::vector<int> col_ptr_;
  std::vector<int> rows_;
  std::vector<std::vector<int>> slots_;  // [r * blocks + c]
};

}  // namespace willmore
