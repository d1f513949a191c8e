#pragma once

#include <Eigen/Dense>
#include <random>

#include "tkrylov/mode.hpp"

namespace tkrylov {

/// Ordered set of mutually orthonormal vectors belonging to one tensor mode,
/// with append-and-orthogonalize semantics. Every append runs modified
/// Gram-Schmidt plus one full re-orthogonalization pass; the combined
/// coefficients are reported so factorization identities hold to machine
/// precision.
class OrthoBasis {
public:
    OrthoBasis() = default;
    OrthoBasis(Mode mode, int dim);

    struct AppendResult {
        Eigen::VectorXd coeffs;    // projections onto the basis before the append
        Eigen::VectorXd residual;  // v minus its projection, unnormalized
        double norm = 0.0;         // norm of the residual
        bool appended = false;     // false signals a breakdown
    };

    /// Orthogonalizes v against the basis and appends the normalized residual
    /// when its norm exceeds tol*max(1, ||v||).
    AppendResult orthogonalize_append(const Eigen::VectorXd& v, double tol);

    /// Coefficients and residual norm only, nothing appended.
    AppendResult orthogonalize(const Eigen::VectorXd& v) const;

    /// Wraps existing orthonormal columns (checked to 1e-8).
    static OrthoBasis from_columns(Mode mode, const Eigen::MatrixXd& columns);

    /// (I - Q Q^T) v with a second pass for accuracy.
    Eigen::VectorXd project_out(const Eigen::VectorXd& v) const;

    /// Appends a random unit vector from the orthogonal complement.
    /// Returns false when the basis already spans the whole space.
    bool append_random_orthogonal(std::mt19937_64& rng, double tol = 1e-8);

    Mode mode() const { return mode_; }
    int dim() const { return dim_; }
    int size() const { return size_; }
    bool full() const { return size_ >= dim_; }

    /// dim x size view of the basis vectors as columns.
    auto matrix() const { return store_.leftCols(size_); }

    /// idx is 0-based, Eigen style.
    Eigen::MatrixXd::ConstColXpr column(int idx) const { return store_.col(idx); }

    /// Largest off-diagonal entry of Q^T Q in magnitude; diagnostic.
    double max_offdiag_gram() const;

private:
    void push(const Eigen::VectorXd& q);

    Mode mode_ = Mode::one;
    int dim_ = 0;
    int size_ = 0;
    Eigen::MatrixXd store_;  // capacity grows geometrically
};

}  // namespace tkrylov
