#include "tkrylov/matrix_krylov.hpp"

#include <stdexcept>

namespace tkrylov {

namespace {

// MGS with one full re-orthogonalization pass; coeffs accumulates both passes.
double orthogonalize(const Eigen::MatrixXd& Q, int cols, Eigen::VectorXd& r,
                     Eigen::VectorXd& coeffs) {
    coeffs = Eigen::VectorXd::Zero(cols);
    for (int pass = 0; pass < 2; ++pass) {
        for (int c = 0; c < cols; ++c) {
            const double h = Q.col(c).dot(r);
            coeffs(c) += h;
            r.noalias() -= h * Q.col(c);
        }
    }
    return r.norm();
}

}  // namespace

ArnoldiResult arnoldi(const Eigen::MatrixXd& A, const Eigen::VectorXd& u1, int k,
                      double breakdown_tol) {
    if (A.rows() != A.cols()) throw std::invalid_argument("arnoldi: matrix must be square");
    if (u1.size() != A.rows()) throw std::invalid_argument("arnoldi: start vector length mismatch");
    const auto n = A.rows();
    k = std::min<int>(k, static_cast<int>(n));

    Eigen::MatrixXd U(n, k + 1);
    U.col(0) = u1 / u1.norm();
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(k + 1, k);

    ArnoldiResult result;
    for (int i = 0; i < k; ++i) {
        Eigen::VectorXd w = A * U.col(i);
        Eigen::VectorXd coeffs;
        const double candidate_norm = w.norm();
        const double res = orthogonalize(U, i + 1, w, coeffs);
        H.block(0, i, i + 1, 1) = coeffs;
        if (res <= breakdown_tol * std::max(1.0, candidate_norm)) {
            result.U = U.leftCols(i + 1);
            result.H = H.topLeftCorner(i + 1, i + 1);
            result.steps = i + 1;
            result.breakdown = true;
            return result;
        }
        H(i + 1, i) = res;
        U.col(i + 1) = w / res;
    }
    result.U = U;
    result.H = H;
    result.steps = k;
    return result;
}

GolubKahanResult golub_kahan(const Eigen::MatrixXd& A, const Eigen::VectorXd& u1, int k,
                             double breakdown_tol) {
    if (u1.size() != A.rows())
        throw std::invalid_argument("golub_kahan: start vector length mismatch");
    const auto m = A.rows();
    const auto n = A.cols();
    k = std::min<int>(k, static_cast<int>(std::min(m, n)));

    Eigen::MatrixXd U(m, k + 1);
    Eigen::MatrixXd V(n, k);
    U.col(0) = u1 / u1.norm();
    Eigen::VectorXd alphas = Eigen::VectorXd::Zero(k);
    Eigen::VectorXd betas = Eigen::VectorXd::Zero(k + 1);  // betas(i) = beta_{i+1}

    GolubKahanResult result;
    auto finish = [&](int steps, int u_cols, int beta_count, bool broke) {
        result.U = U.leftCols(u_cols);
        result.V = V.leftCols(steps);
        result.alphas = alphas.head(steps);
        result.betas = betas.head(beta_count);
        result.steps = steps;
        result.breakdown = broke;
    };

    for (int i = 0; i < k; ++i) {
        // alpha_i v_i = A^T u_i - beta_i v_{i-1}, fully reorthogonalized
        Eigen::VectorXd vr = A.transpose() * U.col(i);
        Eigen::VectorXd coeffs;
        double cn = vr.norm();
        const double alpha = orthogonalize(V, i, vr, coeffs);
        if (alpha <= breakdown_tol * std::max(1.0, cn)) {
            finish(i, i + 1, i, true);
            return result;
        }
        alphas(i) = alpha;
        V.col(i) = vr / alpha;

        // beta_{i+1} u_{i+1} = A v_i - alpha_i u_i
        Eigen::VectorXd ur = A * V.col(i);
        cn = ur.norm();
        const double beta = orthogonalize(U, i + 1, ur, coeffs);
        if (beta <= breakdown_tol * std::max(1.0, cn)) {
            finish(i + 1, i + 1, i, true);
            return result;
        }
        betas(i) = beta;
        U.col(i + 1) = ur / beta;
    }
    finish(k, k + 1, k, false);
    return result;
}

Eigen::MatrixXd GolubKahanResult::bidiagonal() const {
    const int rows = static_cast<int>(U.cols());
    const int cols = steps;
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(rows, cols);
    for (int i = 0; i < cols; ++i) {
        B(i, i) = alphas(i);
        if (i + 1 < rows && i < betas.size()) B(i + 1, i) = betas(i);
    }
    return B;
}

}  // namespace tkrylov
