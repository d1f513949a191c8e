#pragma once

#include <string>
#include <vector>

#include "tkrylov/dense_tensor.hpp"
#include "tkrylov/krylov_state.hpp"
#include "tkrylov/sparse_tensor.hpp"

namespace tkrylov {

/// Residuals of the factorization identities a recursion is supposed to
/// satisfy, grouped by identity family and normalized by the tensor norm.
struct ResidualReport {
    struct Family {
        std::string name;
        double max_rel_residual = 0.0;
        int checks = 0;
    };

    std::vector<Family> families;

    double max_rel_residual() const;
    bool all_below(double tol) const;
};

/// Evaluates every identity applicable to the state's method:
/// fibre identities for the minimal family (both generation variants),
/// loop identities for the maximal recursion. Diagnostic only, never throws
/// on a failed identity.
ResidualReport factorization_residuals(const DenseTensor3& A, const KrylovState& state);
ResidualReport factorization_residuals(const SparseTensor3& A, const KrylovState& state);

}  // namespace tkrylov
