#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tkrylov/dense_tensor.hpp"
#include "tkrylov/mode.hpp"

namespace tkrylov {

/// A single stored entry; indices are 1-based as in the coordinate file format.
struct SparseEntry {
    int i, j, k;
    double value;
};

/// Sparse third-order tensor in coordinate form with slice-compressed access.
///
/// Entries are kept sorted by (k,j,i) and a per-k slice index allows each
/// frontal slice A(:,:,k) to be read as a sparse matrix. Zero values are never
/// stored; duplicates are summed at construction unless the reject policy is
/// selected, which treats them as an input error.
class SparseTensor3 {
public:
    enum class DuplicatePolicy { sum, reject };

    SparseTensor3() = default;
    SparseTensor3(int l, int m, int n) : l_(l), m_(m), n_(n), slice_ptr_(n + 1, 0) {}
    SparseTensor3(int l, int m, int n, std::vector<SparseEntry> entries,
                  DuplicatePolicy policy = DuplicatePolicy::sum);

    int dim1() const { return l_; }
    int dim2() const { return m_; }
    int dim3() const { return n_; }
    int dim(Mode mode) const;
    std::array<int, 3> dims() const { return {l_, m_, n_}; }

    std::int64_t nnz() const { return static_cast<std::int64_t>(entries_.size()); }

    std::span<const SparseEntry> entries() const { return entries_; }

    /// Entries of the frontal slice A(:,:,k), k 1-based; sorted by (j,i).
    std::span<const SparseEntry> slice(int k) const;

    DenseTensor3 densify() const;

private:
    int l_ = 0, m_ = 0, n_ = 0;
    std::vector<SparseEntry> entries_;       // sorted by (k,j,i)
    std::vector<std::int64_t> slice_ptr_;    // size n_+1, entry offsets per k
};

}  // namespace tkrylov
