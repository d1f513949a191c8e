#pragma once

#include <Eigen/Dense>

namespace tkrylov {

/// Arnoldi factorization A U_k = U_{k+1} H_k with H_k upper Hessenberg.
/// On breakdown before k steps the shorter factorization is returned with
/// the flag set; U then has steps+... columns matching H's rows.
struct ArnoldiResult {
    Eigen::MatrixXd U;  // n x (steps+1), or n x steps on breakdown
    Eigen::MatrixXd H;  // (steps+1) x steps, or steps x steps on breakdown
    int steps = 0;
    bool breakdown = false;
};

ArnoldiResult arnoldi(const Eigen::MatrixXd& A, const Eigen::VectorXd& u1, int k,
                      double breakdown_tol = 1e-12);

/// Golub-Kahan bidiagonalization: A V_k = U_{k+1} B_{k+1} and
/// A^T U_k = V_k B_k^hat, with B bidiagonal. alphas hold the diagonal,
/// betas the subdiagonal including the trailing beta_{k+1}.
struct GolubKahanResult {
    Eigen::MatrixXd U;  // m x (steps+1), or m x steps on terminal breakdown
    Eigen::MatrixXd V;  // n x steps
    Eigen::VectorXd alphas;
    Eigen::VectorXd betas;
    int steps = 0;
    bool breakdown = false;

    /// The (steps+1) x steps (or square on breakdown) bidiagonal matrix.
    Eigen::MatrixXd bidiagonal() const;
};

GolubKahanResult golub_kahan(const Eigen::MatrixXd& A, const Eigen::VectorXd& u1, int k,
                             double breakdown_tol = 1e-12);

}  // namespace tkrylov
