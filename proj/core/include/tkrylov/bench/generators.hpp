#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>

#include "tkrylov/dense_tensor.hpp"
#include "tkrylov/sparse_tensor.hpp"

namespace tkrylov::bench {

/// Synthetic tensor of exact multilinear rank (p,q,r): random orthonormal
/// factors applied to a random full-rank dense core. Ground truth is kept
/// for subspace-recovery oracles. Deterministic and bit-identical per seed.
struct LowRankTensor {
    DenseTensor3 tensor;
    Eigen::MatrixXd X, Y, Z;  // orthonormal ground-truth factors
    DenseTensor3 core;
};

LowRankTensor gen_low_rank(std::array<int, 3> dims, std::array<int, 3> ranks, std::uint64_t seed);

enum class ValueDistribution { gaussian, uniform };

/// Random sparse tensor with exactly nnz distinct coordinates. With
/// single_per_tube every mode-3 tube A(i,j,:) holds at most one entry, which
/// makes the mode-3 Gram matrix diagonal.
SparseTensor3 gen_sparse(std::array<int, 3> dims, std::int64_t nnz, std::uint64_t seed,
                         ValueDistribution dist = ValueDistribution::gaussian,
                         bool single_per_tube = false);

}  // namespace tkrylov::bench
