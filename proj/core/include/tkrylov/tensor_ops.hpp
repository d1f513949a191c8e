#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "tkrylov/dense_tensor.hpp"
#include "tkrylov/mode.hpp"
#include "tkrylov/sparse_tensor.hpp"

namespace tkrylov {

// Multilinear algebra primitives for dense and sparse third-order tensors.
//
// Matricization convention used throughout: the mode-d matricization A^(d)
// has the mode-d index as its row index; its columns run over the remaining
// modes in ascending order with the earlier mode as the slow (major) index.
// For A in R^{l x m x n}:
//   A^(1) is l x mn, column of (j,k) = (j-1)*n + k,
//   A^(2) is m x ln, column of (i,k) = (i-1)*n + k,
//   A^(3) is n x lm, column of (i,j) = (i-1)*m + j.
// With the standard Kronecker product this makes the identities
//   B^(1) = U A^(1) (V kron W)^T,
//   B^(2) = V A^(2) (U kron W)^T,
//   B^(3) = W A^(3) (U kron V)^T
// hold exactly for B = (U,V,W)*A.

/// Tensor-times-matrix in one mode. With transposed=false the factor M
/// (p x dim) multiplies every mode fibre, replacing that dimension by p.
/// With transposed=true the contraction is with M^T, so M is dim x p.
DenseTensor3 ttm(const DenseTensor3& A, const Eigen::MatrixXd& M, Mode mode,
                 bool transposed = false);
DenseTensor3 ttm(const SparseTensor3& A, const Eigen::MatrixXd& M, Mode mode,
                 bool transposed = false);

/// Tensor-times-matrix in several modes at once; null factors are skipped.
/// Equivalent to chaining ttm in any mode order.
DenseTensor3 ttm_multi(const DenseTensor3& A, const Eigen::MatrixXd* U, const Eigen::MatrixXd* V,
                       const Eigen::MatrixXd* W, bool transposed = false);
DenseTensor3 ttm_multi(const SparseTensor3& A, const Eigen::MatrixXd* U, const Eigen::MatrixXd* V,
                       const Eigen::MatrixXd* W, bool transposed = false);

/// Tensor-vector-vector multiplication: contracts mode `ma` with `a` and mode
/// `mb` with `b`, returning the vector living in the remaining mode.
/// Sparse inputs cost O(nnz).
Eigen::VectorXd tvv(const DenseTensor3& A, Mode ma, Mode mb, const Eigen::VectorXd& a,
                    const Eigen::VectorXd& b);
Eigen::VectorXd tvv(const SparseTensor3& A, Mode ma, Mode mb, const Eigen::VectorXd& a,
                    const Eigen::VectorXd& b);

/// Full contraction with three vectors, <A; u, v, w>.
double tvv3(const DenseTensor3& A, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
            const Eigen::VectorXd& w);
double tvv3(const SparseTensor3& A, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
            const Eigen::VectorXd& w);

/// Inner product sum_{ijk} a_{ijk} b_{ijk}; mixed sparse/dense allowed.
double inner(const DenseTensor3& A, const DenseTensor3& B);
double inner(const SparseTensor3& A, const SparseTensor3& B);
double inner(const SparseTensor3& A, const DenseTensor3& B);
double inner(const DenseTensor3& A, const SparseTensor3& B);

double frob_norm(const DenseTensor3& A);
double frob_norm(const SparseTensor3& A);

Eigen::MatrixXd matricize(const DenseTensor3& A, Mode mode);
Eigen::MatrixXd matricize(const SparseTensor3& A, Mode mode);
Eigen::SparseMatrix<double> matricize_sparse(const SparseTensor3& A, Mode mode);

/// Inverse of matricize for the documented column ordering.
DenseTensor3 dematricize(const Eigen::MatrixXd& M, Mode mode, std::array<int, 3> dims);

/// <A,B>_1, the 4-tensor c_{jkj'k'} = sum_i a_{ijk} b_{ij'k'}, returned
/// flattened as an (mn) x (m'n') matrix with rows/columns in matricization
/// column order. Equals matricize(A,1)^T * matricize(B,1).
Eigen::MatrixXd contract_mode1(const DenseTensor3& A, const DenseTensor3& B);
Eigen::MatrixXd contract_mode1(const SparseTensor3& A, const SparseTensor3& B);

/// <A,B>_{1,2}, the n x n' matrix d_{kk'} = sum_{ij} a_{ijk} b_{ijk'}.
Eigen::MatrixXd contract_modes12(const DenseTensor3& A, const DenseTensor3& B);
Eigen::MatrixXd contract_modes12(const SparseTensor3& A, const SparseTensor3& B);

/// <A,B>_{-keep}: contraction over all modes except `keep`;
/// equals A^(keep) * (B^(keep))^T.
Eigen::MatrixXd contract_all_but(const DenseTensor3& A, const DenseTensor3& B, Mode keep);
Eigen::MatrixXd contract_all_but(const SparseTensor3& A, const SparseTensor3& B, Mode keep);

/// Mode Gram matrix <A,A>_{-mode}.
Eigen::MatrixXd gram(const DenseTensor3& A, Mode mode);
Eigen::MatrixXd gram(const SparseTensor3& A, Mode mode);

/// Applies the mode Gram matrix to a vector, <A,A>_{-mode} * u, slice-wise
/// in O(nnz) without forming the Gram matrix.
Eigen::VectorXd gram_matvec(const SparseTensor3& A, Mode mode, const Eigen::VectorXd& u);
Eigen::VectorXd gram_matvec(const DenseTensor3& A, Mode mode, const Eigen::VectorXd& u);

/// Contraction of one mode with a vector, e.g. mode 1: B(j,k) = sum_i a_{ijk} u_i.
/// Rows of the result index the lower remaining mode.
Eigen::MatrixXd tv(const DenseTensor3& A, Mode mode, const Eigen::VectorXd& u);
Eigen::MatrixXd tv(const SparseTensor3& A, Mode mode, const Eigen::VectorXd& u);

}  // namespace tkrylov
