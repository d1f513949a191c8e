#include "tkrylov/subspace.hpp"

#include <algorithm>
#include <stdexcept>

namespace tkrylov {

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& M) {
    if (M.cols() == 0) return Eigen::MatrixXd(M.rows(), 0);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
    qr.setThreshold(1e-12);
    const Eigen::Index rank = qr.rank();
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(M.rows(), rank);
    return Q;
}

double max_principal_angle(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    const Eigen::MatrixXd Qa = orthonormal_basis(A);
    const Eigen::MatrixXd Qb = orthonormal_basis(B);
    if (Qa.cols() == 0 || Qb.cols() == 0)
        throw std::invalid_argument("max_principal_angle: empty subspace");
    if (Qa.rows() != Qb.rows())
        throw std::invalid_argument("max_principal_angle: ambient dimensions differ");
    if (Qa.cols() > Qb.cols())
        throw std::invalid_argument(
            "max_principal_angle: first subspace must not have larger dimension");
    // Sine-based formula: accurate for small angles where acos of a cosine
    // near one loses half the digits.
    const Eigen::MatrixXd R = Qa - Qb * (Qb.transpose() * Qa);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(R);
    const double s = std::clamp(svd.singularValues().maxCoeff(), 0.0, 1.0);
    return std::asin(s);
}

Eigen::MatrixXd random_gaussian(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd M(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) M(i, j) = normal(rng);
    return M;
}

Eigen::MatrixXd random_orthonormal(int rows, int cols, std::mt19937_64& rng) {
    if (cols > rows) throw std::invalid_argument("random_orthonormal: cols > rows");
    const Eigen::MatrixXd G = random_gaussian(rows, cols, rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
    return qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
}

Eigen::VectorXd random_unit_vector(int size, std::mt19937_64& rng) {
    Eigen::VectorXd v = random_gaussian(size, 1, rng).col(0);
    const double norm = v.norm();
    if (norm == 0.0) {
        v.setZero();
        v(0) = 1.0;
        return v;
    }
    return v / norm;
}

}  // namespace tkrylov
