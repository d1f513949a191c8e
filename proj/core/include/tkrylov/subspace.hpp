#pragma once

#include <Eigen/Dense>
#include <random>

namespace tkrylov {

/// Orthonormal basis of the column span (thin QR, rank-revealing tolerance).
Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& M);

/// Largest canonical angle (radians) from span(A) into span(B).
/// When A has fewer columns than B this measures whether span(A) is
/// contained in span(B); zero means containment.
double max_principal_angle(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

/// Random matrix with orthonormal columns (QR of a Gaussian sample).
Eigen::MatrixXd random_orthonormal(int rows, int cols, std::mt19937_64& rng);

Eigen::VectorXd random_unit_vector(int size, std::mt19937_64& rng);

Eigen::MatrixXd random_gaussian(int rows, int cols, std::mt19937_64& rng);

}  // namespace tkrylov
