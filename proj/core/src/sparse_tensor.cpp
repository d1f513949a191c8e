#include "tkrylov/sparse_tensor.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace tkrylov {

SparseTensor3::SparseTensor3(int l, int m, int n, std::vector<SparseEntry> entries,
                             DuplicatePolicy policy)
    : l_(l), m_(m), n_(n), entries_(std::move(entries)) {
    if (l < 0 || m < 0 || n < 0) throw std::invalid_argument("SparseTensor3: negative dimension");

    for (const SparseEntry& e : entries_) {
        if (e.i < 1 || e.i > l_ || e.j < 1 || e.j > m_ || e.k < 1 || e.k > n_) {
            std::ostringstream msg;
            msg << "SparseTensor3: entry (" << e.i << "," << e.j << "," << e.k
                << ") outside 1-based bounds " << l_ << "x" << m_ << "x" << n_;
            throw std::invalid_argument(msg.str());
        }
    }

    std::sort(entries_.begin(), entries_.end(), [](const SparseEntry& a, const SparseEntry& b) {
        if (a.k != b.k) return a.k < b.k;
        if (a.j != b.j) return a.j < b.j;
        return a.i < b.i;
    });

    // Merge duplicates (summing) and drop entries that end up exactly zero.
    std::vector<SparseEntry> merged;
    merged.reserve(entries_.size());
    for (const SparseEntry& e : entries_) {
        if (!merged.empty() && merged.back().i == e.i && merged.back().j == e.j &&
            merged.back().k == e.k) {
            if (policy == DuplicatePolicy::reject) {
                std::ostringstream msg;
                msg << "SparseTensor3: duplicate coordinate (" << e.i << "," << e.j << "," << e.k
                    << ")";
                throw std::invalid_argument(msg.str());
            }
            merged.back().value += e.value;
        } else {
            merged.push_back(e);
        }
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const SparseEntry& e) { return e.value == 0.0; }),
                 merged.end());
    entries_ = std::move(merged);

    slice_ptr_.assign(n_ + 1, 0);
    for (const SparseEntry& e : entries_) slice_ptr_[e.k] += 1;
    for (int k = 0; k < n_; ++k) slice_ptr_[k + 1] += slice_ptr_[k];
}

int SparseTensor3::dim(Mode mode) const {
    switch (mode) {
        case Mode::one: return l_;
        case Mode::two: return m_;
        default: return n_;
    }
}

std::span<const SparseEntry> SparseTensor3::slice(int k) const {
    if (k < 1 || k > n_) throw std::out_of_range("SparseTensor3::slice: k outside 1..n");
    const auto begin = static_cast<std::size_t>(slice_ptr_[k - 1]);
    const auto end = static_cast<std::size_t>(slice_ptr_[k]);
    return {entries_.data() + begin, end - begin};
}

DenseTensor3 SparseTensor3::densify() const {
    DenseTensor3 out(l_, m_, n_);
    for (const SparseEntry& e : entries_) out(e.i, e.j, e.k) = e.value;
    return out;
}

}  // namespace tkrylov
