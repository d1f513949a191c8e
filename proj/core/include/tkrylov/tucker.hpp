#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>

#include "tkrylov/dense_tensor.hpp"
#include "tkrylov/krylov_state.hpp"
#include "tkrylov/sparse_tensor.hpp"

namespace tkrylov {

/// Tucker decomposition A ~ (U,V,W).core with orthonormal factor matrices.
struct TuckerDecomp {
    Eigen::MatrixXd U, V, W;
    DenseTensor3 core;
    std::string method;
    double rel_error = 0.0;
    Counters counters;

    std::array<int, 3> ranks() const {
        return {static_cast<int>(U.cols()), static_cast<int>(V.cols()),
                static_cast<int>(W.cols())};
    }
};

/// The Frobenius-optimal core <A; U, V, W> for orthonormal factors
/// (orthonormality checked to 1e-8). If counters are supplied, the cost is
/// booked as p*q tvv-equivalents, the unit used for complexity accounting.
DenseTensor3 core_project(const DenseTensor3& A, const Eigen::MatrixXd& U,
                          const Eigen::MatrixXd& V, const Eigen::MatrixXd& W,
                          Counters* counters = nullptr);
DenseTensor3 core_project(const SparseTensor3& A, const Eigen::MatrixXd& U,
                          const Eigen::MatrixXd& V, const Eigen::MatrixXd& W,
                          Counters* counters = nullptr);

/// sqrt(||A||^2 - ||core||^2), the approximation error of the projected
/// decomposition, computed without materializing the approximating tensor.
/// Throws when ||core|| exceeds ||A|| beyond rounding (the projection bound).
double approx_error(const DenseTensor3& A, const DenseTensor3& core);
double approx_error(const SparseTensor3& A, const DenseTensor3& core);
double approx_error_from_norms(double tensor_norm, double core_norm);

/// Factor matrices are leading eigenvectors of the mode Gram matrices, in
/// descending eigenvalue order; the core is the optimal projection.
TuckerDecomp truncated_hosvd(const DenseTensor3& A, std::array<int, 3> ranks);
TuckerDecomp truncated_hosvd(const SparseTensor3& A, std::array<int, 3> ranks);

/// Runs the modified minimal recursion to the working ranks, takes the HOSVD
/// of the small projected core and composes the factors. For tensors of exact
/// multilinear rank this reproduces the truncated HOSVD subspaces at a
/// fraction of the cost.
TuckerDecomp hosvd_via_krylov(const DenseTensor3& A, std::array<int, 3> ranks,
                              const RecursionOptions& opt = {});
TuckerDecomp hosvd_via_krylov(const SparseTensor3& A, std::array<int, 3> ranks,
                              const RecursionOptions& opt = {});

/// Best rank-(1,1,1) approximation sigma * (theta o eta o omega).
struct Rank1Triple {
    Eigen::VectorXd theta, eta, omega;
    double sigma = 0.0;  // = <C; theta, eta, omega> >= 0
    int sweeps = 0;
};

/// Alternating (HOOI) iteration initialized from the leading HOSVD vectors;
/// sigma is non-decreasing across sweeps. Throws on a zero tensor.
Rank1Triple best_rank111(const DenseTensor3& C, int max_sweeps = 50, double tol = 1e-10);

}  // namespace tkrylov
