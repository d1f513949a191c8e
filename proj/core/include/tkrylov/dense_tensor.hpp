#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "tkrylov/mode.hpp"

namespace tkrylov {

/// Dense third-order tensor of reals with dimensions l x m x n.
///
/// Storage is one contiguous array with the mode-1 index fastest:
/// element (i,j,k) lives at offset (i-1) + l*(j-1) + l*m*(k-1). A frontal
/// slice A(:,:,k) is therefore a contiguous column-major l x m block.
///
/// Element access uses 1-based indices in all three modes, matching the
/// coordinate file format and the usual tensor literature convention.
/// Matrix/vector objects (Eigen) remain 0-based as usual.
class DenseTensor3 {
public:
    DenseTensor3() = default;

    /// Zero-initialized l x m x n tensor.
    DenseTensor3(int l, int m, int n);

    /// Wraps an existing buffer; data.size() must equal l*m*n.
    DenseTensor3(int l, int m, int n, std::vector<double> data);

    int dim1() const { return l_; }
    int dim2() const { return m_; }
    int dim3() const { return n_; }
    int dim(Mode mode) const;
    std::array<int, 3> dims() const { return {l_, m_, n_}; }
    std::int64_t size() const { return static_cast<std::int64_t>(l_) * m_ * n_; }

    /// 1-based element access; throws std::out_of_range on bad indices.
    double operator()(int i, int j, int k) const { return data_[offset(i, j, k)]; }
    double& operator()(int i, int j, int k) { return data_[offset(i, j, k)]; }

    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }

    /// Frontal slice A(:,:,k) as an l x m column-major view, k 1-based.
    Eigen::Map<const Eigen::MatrixXd> slice(int k) const;
    Eigen::Map<Eigen::MatrixXd> slice(int k);

    /// View of the whole tensor as an (l*m) x n matrix whose k-th column is
    /// the flattened k-th frontal slice.
    Eigen::Map<const Eigen::MatrixXd> slices_as_columns() const;

    void set_zero();

    bool same_dims(const DenseTensor3& other) const {
        return l_ == other.l_ && m_ == other.m_ && n_ == other.n_;
    }

private:
    std::int64_t offset(int i, int j, int k) const;

    int l_ = 0, m_ = 0, n_ = 0;
    std::vector<double> data_;
};

}  // namespace tkrylov
