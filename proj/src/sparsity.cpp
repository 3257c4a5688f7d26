#include "willmore/sparsity.hpp"

#include <algorithm>

namespace willmore {

namespace {

// Counting-sort style inverse map: for every target index the list of
// sources in ascending source order.
void invert(const std::vector<int>& target_of_source, int n_targets, std::vector<int>& ptr,
            std::vector<int>& src) {
  ptr.assign(n_targets + 1, 0);
  for (int t : target_of_source) ++ptr[t + 1];
  for (int t = 0; t < n_targets; ++t) ptr[t + 1] += ptr[t];
  src.resize(target_of_source.size());
  std::vector<int> fill(ptr.begin(), ptr.end() - 1);
  for (std::size_t s = 0; s < target_of_source.size(); ++s) {
    src[fill[target_of_source[s]]++] = static_cast<int>(s);
  }
}

}  // namespace

MeshPattern::MeshPattern(const SurfaceMesh& mesh)
    : n_(mesh.node_count()), nloc_(mesh.nodes_per_element()), n_elements_(mesh.element_count()) {
  std::vector<std::vector<int>> adj(n_);
  for (int e = 0; e < n_elements_; ++e) {
    const auto el = mesh.element(e);
    for (int a : el) {
      for (int b : el) adj[b].push_back(a);
    }
  }
  col_ptr_.assign(n_ + 1, 0);
  for (int j = 0; j < n_; ++j) {
    auto& col = adj[j];
    std::sort(col.begin(), col.end());
    col.erase(std::unique(col.begin(), col.end()), col.end());
    col_ptr_[j + 1] = col_ptr_[j] + static_cast<int>(col.size());
  }
  rows_.reserve(col_ptr_[n_]);
  for (const auto& col : adj) rows_.insert(rows_.end(), col.begin(), col.end());

  element_slots_.resize(static_cast<std::size_t>(n_elements_) * nloc_ * nloc_);
  std::size_t idx = 0;
  for (int e = 0; e < n_elements_; ++e) {
    const auto el = mesh.element(e);
    for (int a = 0; a < nloc_; ++a) {
      for (int b = 0; b < nloc_; ++b) element_slots_[idx++] = find(el[a], el[b]);
    }
  }
  invert(element_slots_, nonzeros(), slot_ptr_, slot_src_);
  invert(mesh.connectivity(), n_, node_ptr_, node_src_);
}

int MeshPattern::find(int row, int col) const {
  const auto begin = rows_.begin() + col_ptr_[col];
  const auto end = rows_.begin() + col_ptr_[col + 1];
  const auto it = std::lower_bound(begin, end, row);
  if (it == end || *it != row) return -1;
  return static_cast<int>(it - rows_.begin());
}

SparseMatrix MeshPattern::matrix(const double* values) const {
  SparseMatrix m(n_, n_);
  m.resizeNonZeros(nonzeros());
  std::copy(col_ptr_.begin(), col_ptr_.end(), m.outerIndexPtr());
  std::copy(rows_.begin(), rows_.end(), m.innerIndexPtr());
  std::copy(values, values + nonzeros(), m.valuePtr());
  return m;
}

SparseMatrix MeshPattern::matrix(const std::vector<double>& values) const {
  if (static_cast<int>(values.size()) != nonzeros()) throw Error("pattern value array has wrong size");
  return matrix(values.data());
}

BlockPattern::BlockPattern(const MeshPattern& scalar, const std::vector<std::vector<bool>>& present)
    : blocks_(static_cast<int>(present.size())), n_(scalar.size()) {
  const auto& cp = scalar.col_ptr();
  const auto& ri = scalar.row_index();
  slots_.assign(static_cast<std::size_t>(blocks_) * blocks_, {});
  for (int r = 0; r < blocks_; ++r) {
    for (int c = 0; c < blocks_; ++c) {
      if (present[r][c]) slots_[r * blocks_ + c].resize(scalar.nonzeros());
    }
  }
  col_ptr_.assign(static_cast<std::size_t>(blocks_) * n_ + 1, 0);
  int pos = 0;
  for (int c = 0; c < blocks_; ++c) {
    for (int j = 0; j < n_; ++j) {
      // rows sorted: block row first, then scalar row
      for (int r = 0; r < blocks_; ++r) {
        if (!present[r][c]) continue;
        auto& slot = slots_[r * blocks_ + c];
        for (int k = cp[j]; k < cp[j + 1]; ++k) {
          rows_.push_back(r * n_ + ri[k]);
          slot[k] = pos++;
        }
      }
      col_ptr_[c * n_ + j + 1] = pos;
    }
  }
}

const std::vector<int>& BlockPattern::slots(int r, int c) const {
  const auto& s = slots_[r * blocks_ + c];
  if (s.empty()) throw Error("block pattern: requested an empty block");
  return s;
}

SparseMatrix BlockPattern::zero_matrix() const {
  SparseMatrix m(size(), size());
  m.resizeNonZeros(nonzeros());
  std::copy(col_ptr_.begin(), col_ptr_.end(), m.outerIndexPtr());
  std::copy(rows_.begin(), rows_.end(), m.innerIndexPtr());
  std::fill(m.valuePtr(), m.valuePtr() + nonzeros(), 0.0);
  return m;
}

}  // namespace willmore
