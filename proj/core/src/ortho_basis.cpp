#include "tkrylov/ortho_basis.hpp"

#include <sstream>
#include <stdexcept>

#include "tkrylov/subspace.hpp"

namespace tkrylov {

OrthoBasis::OrthoBasis(Mode mode, int dim) : mode_(mode), dim_(dim) {
    if (dim < 0) throw std::invalid_argument("OrthoBasis: negative dimension");
}

void OrthoBasis::push(const Eigen::VectorXd& q) {
    if (size_ >= dim_) throw std::logic_error("OrthoBasis: basis already spans the space");
    if (store_.cols() == size_) {
        const int new_cap = std::min(std::max(8, 2 * static_cast<int>(store_.cols())), dim_);
        store_.conservativeResize(dim_, new_cap);
    }
    store_.col(size_) = q;
    ++size_;
}

OrthoBasis::AppendResult OrthoBasis::orthogonalize(const Eigen::VectorXd& v) const {
    if (v.size() != dim_) {
        std::ostringstream msg;
        msg << "OrthoBasis(" << mode_name(mode_) << "): vector length " << v.size()
            << " does not match dimension " << dim_;
        throw std::invalid_argument(msg.str());
    }

    AppendResult result;
    const auto Q = matrix();
    Eigen::VectorXd r = v;
    result.coeffs = Eigen::VectorXd::Zero(size_);

    // Modified Gram-Schmidt followed by one full re-orthogonalization pass.
    for (int pass = 0; pass < 2; ++pass) {
        for (int c = 0; c < size_; ++c) {
            const double h = Q.col(c).dot(r);
            result.coeffs(c) += h;
            r.noalias() -= h * Q.col(c);
        }
    }
    result.norm = r.norm();
    result.residual = std::move(r);
    return result;
}

OrthoBasis::AppendResult OrthoBasis::orthogonalize_append(const Eigen::VectorXd& v, double tol) {
    AppendResult result = orthogonalize(v);
    const double threshold = tol * std::max(1.0, v.norm());
    if (size_ < dim_ && result.norm > threshold) {
        push(result.residual / result.norm);
        result.appended = true;
    }
    return result;
}

OrthoBasis OrthoBasis::from_columns(Mode mode, const Eigen::MatrixXd& columns) {
    OrthoBasis basis(mode, static_cast<int>(columns.rows()));
    if (columns.cols() > columns.rows())
        throw std::invalid_argument("OrthoBasis::from_columns: more columns than rows");
    if (columns.cols() > 0) {
        const Eigen::MatrixXd G = columns.transpose() * columns;
        const double dev =
            (G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
        if (dev > 1e-8)
            throw std::invalid_argument("OrthoBasis::from_columns: columns not orthonormal");
    }
    basis.store_ = columns;
    basis.size_ = static_cast<int>(columns.cols());
    return basis;
}

Eigen::VectorXd OrthoBasis::project_out(const Eigen::VectorXd& v) const {
    const auto Q = matrix();
    Eigen::VectorXd r = v;
    for (int pass = 0; pass < 2; ++pass) r.noalias() -= Q * (Q.transpose() * r);
    return r;
}

bool OrthoBasis::append_random_orthogonal(std::mt19937_64& rng, double tol) {
    if (full()) return false;
    for (int attempt = 0; attempt < 16; ++attempt) {
        Eigen::VectorXd candidate = project_out(random_unit_vector(dim_, rng));
        const double norm = candidate.norm();
        if (norm > tol) {
            push(candidate / norm);
            return true;
        }
    }
    return false;
}

double OrthoBasis::max_offdiag_gram() const {
    if (size_ < 2) return 0.0;
    const Eigen::MatrixXd G = matrix().transpose() * matrix();
    double worst = 0.0;
    for (int i = 0; i < size_; ++i)
        for (int j = 0; j < size_; ++j)
            if (i != j) worst = std::max(worst, std::abs(G(i, j)));
    return worst;
}

}  // namespace tkrylov
