#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "tkrylov/dense_tensor.hpp"

namespace tkrylov {

/// Growing three-way array of orthonormalization coefficients with a fill
/// mask recording which entries the recursion actually produced. Unfilled
/// entries read as exact zeros. Growth preserves existing entries, so the
/// nesting H_{abc} = H_{a'b'c'}(1:a,1:b,1:c) holds bitwise.
class CoeffTensor {
public:
    CoeffTensor() = default;

    int dim1() const { return dims_[0]; }
    int dim2() const { return dims_[1]; }
    int dim3() const { return dims_[2]; }
    std::array<int, 3> dims() const { return dims_; }

    /// Grows to at least the given dims (never shrinks).
    void grow(int a, int b, int c);

    /// 1-based. Entries may be written once; a second write throws.
    void set(int i, int j, int k, double value);

    /// 1-based; reads 0 outside the filled mask (and outside current dims).
    double at(int i, int j, int k) const;
    bool filled(int i, int j, int k) const;

    std::int64_t filled_count() const { return filled_count_; }

    DenseTensor3 dense() const;

    /// Leading (a,b,c) prefix as a dense tensor; reads zeros outside the
    /// current dims.
    DenseTensor3 dense_prefix(int a, int b, int c) const;

    /// Flat access for serialization: values then mask, both in the storage
    /// order of dense() (mode-1 fastest).
    std::vector<double> values_flat() const;
    std::vector<std::uint8_t> mask_flat() const;
    static CoeffTensor from_flat(std::array<int, 3> dims, const std::vector<double>& values,
                                 const std::vector<std::uint8_t>& mask);

private:
    std::int64_t offset(int i, int j, int k) const;

    std::array<int, 3> dims_{0, 0, 0};
    std::vector<double> values_;
    std::vector<std::uint8_t> mask_;
    std::int64_t filled_count_ = 0;
};

}  // namespace tkrylov
