#pragma once

#include <Eigen/Dense>
#include <array>

#include "tkrylov/dense_tensor.hpp"
#include "tkrylov/krylov_state.hpp"
#include "tkrylov/sparse_tensor.hpp"

namespace tkrylov {

// Krylov-type recursions generating per-mode orthonormal bases of a
// third-order tensor. All routines record orthonormalization coefficients in
// the state's shared coefficient tensor (where the generating vectors are
// pure basis vectors), count tensor-vector-vector products, and log
// breakdown events with their resolution.

/// Three coupled Golub-Kahan-style sequences: one new vector per mode per
/// step, each produced by contracting the two most recent vectors of the
/// other modes. k vectors are generated per mode (the start vectors count).
KrylovState minimal_recursion(const DenseTensor3& A, const StartVectors& start, int k,
                              const RecursionOptions& opt = {});
KrylovState minimal_recursion(const SparseTensor3& A, const StartVectors& start, int k,
                              const RecursionOptions& opt = {});

/// Minimal recursion with per-mode target sizes. A mode stops growing at its
/// target (or when its subspace completes); exhausted modes contribute to the
/// other modes through seeded random combinations of their basis vectors.
KrylovState modified_minimal_recursion(const DenseTensor3& A, const StartVectors& start,
                                       std::array<int, 3> targets,
                                       const RecursionOptions& opt = {});
KrylovState modified_minimal_recursion(const SparseTensor3& A, const StartVectors& start,
                                       std::array<int, 3> targets,
                                       const RecursionOptions& opt = {});

/// Resumes a minimal-family state (fresh or loaded from an archive) and grows
/// it to the given targets. Absent breakdowns this matches a straight run to
/// the same targets exactly.
KrylovState resume_minimal_recursion(const DenseTensor3& A, KrylovState state,
                                     std::array<int, 3> targets,
                                     const RecursionOptions& opt = {});
KrylovState resume_minimal_recursion(const SparseTensor3& A, KrylovState state,
                                     std::array<int, 3> targets,
                                     const RecursionOptions& opt = {});

/// Complete u-, v- and w-loops over all unused index pairs, growing every
/// mode as far as the limits allow. After each complete loop the contracted
/// product of the other two bases factors exactly through the coefficient
/// tensor (see factorization_residuals). Stops at the first loop that hits a
/// limit with pairs left over, or when no loop makes progress.
KrylovState maximal_recursion(const DenseTensor3& A, const StartVectors& start,
                              std::array<int, 3> limits, const RecursionOptions& opt = {});
KrylovState maximal_recursion(const SparseTensor3& A, const StartVectors& start,
                              std::array<int, 3> limits, const RecursionOptions& opt = {});

struct TruncateOptions {
    bool memory_bounded = false;  // pre-shrink the other modes before the SVD
    int subset = 10;              // columns kept per mode in the bounded variant
};

/// Shrinks oversized maximal-recursion bases to the target sizes by taking
/// leading left singular vectors of <A; other bases> matricizations.
/// The returned state has fresh bases and an empty coefficient tensor.
KrylovState maximal_truncate(const KrylovState& state, const DenseTensor3& A,
                             std::array<int, 3> targets, const TruncateOptions& topt = {});
KrylovState maximal_truncate(const KrylovState& state, const SparseTensor3& A,
                             std::array<int, 3> targets, const TruncateOptions& topt = {});

struct OptimizeOptions {
    enum class Strategy {
        exact_hosvd,   // materializes the constrained tensor, best rank-(1,1,1)
        inner_krylov,  // implicit inner minimal recursion, never materializes it
    };
    Strategy strategy = Strategy::inner_krylov;
    int inner_steps = 3;  // t, tensor-vector-vector budget is 3t per vector
    int warmup = 4;       // initial plain minimal steps
};

/// Minimal recursion whose new vector per mode maximizes its norm over unit
/// combinations of the other modes' bases, subject to orthogonality against
/// the mode's existing basis.
KrylovState optimized_recursion(const DenseTensor3& A, const StartVectors& start, int k,
                                const OptimizeOptions& oopt = {},
                                const RecursionOptions& opt = {});
KrylovState optimized_recursion(const SparseTensor3& A, const StartVectors& start, int k,
                                const OptimizeOptions& oopt = {},
                                const RecursionOptions& opt = {});

struct SmallModeOptions {
    enum class Policy { cyclic, random_combination, optimized };
    Policy policy = Policy::cyclic;
    int power_iterations = 8;  // optimized policy rank-1 solve
};

/// Minimal recursion for tensors with one mode much smaller than k. The
/// small mode completes at its dimension; afterwards each step picks that
/// mode's contribution per the policy. Selections of pure basis vectors are
/// recorded in the state (1-based; 0 marks a combination).
KrylovState small_mode_recursion(const DenseTensor3& A, Mode small, int k,
                                 const SmallModeOptions& sopt = {},
                                 const RecursionOptions& opt = {});
KrylovState small_mode_recursion(const SparseTensor3& A, Mode small, int k,
                                 const SmallModeOptions& sopt = {},
                                 const RecursionOptions& opt = {});

/// Candidate for the optimized small-mode policy: unit coefficient vector
/// theta maximizing the norm of the projected generation product
/// <A; B*theta, fixed> with the result orthogonal to the target basis.
/// Solved by power iteration on the implicitly applied matrix; the plain
/// cyclic candidate is always evaluated as well and wins ties.
struct SmallModeCandidate {
    Eigen::VectorXd theta;
    Eigen::VectorXd candidate;  // already projected against the target basis
    double norm = 0.0;
};
SmallModeCandidate optimized_small_mode_candidate(const DenseTensor3& A,
                                                  const OrthoBasis& small_basis, int cyclic_index,
                                                  const Eigen::VectorXd& fixed_vec,
                                                  Mode fixed_mode, const OrthoBasis& target_basis,
                                                  Counters* counters, int power_iterations = 8);
SmallModeCandidate optimized_small_mode_candidate(const SparseTensor3& A,
                                                  const OrthoBasis& small_basis, int cyclic_index,
                                                  const Eigen::VectorXd& fixed_vec,
                                                  Mode fixed_mode, const OrthoBasis& target_basis,
                                                  Counters* counters, int power_iterations = 8);

struct LanczosOptions {
    double breakdown_tol = 1e-12;
    int gram_dense_threshold = 4096;  // sparse mode-3 Gram formed densely below this
};

struct LanczosResult {
    OrthoBasis basis;
    Eigen::VectorXd alphas;  // tridiagonal diagonal
    Eigen::VectorXd betas;   // tridiagonal subdiagonal
    Counters counters;
    bool breakdown = false;  // invariant subspace found before k steps

    Eigen::MatrixXd tridiagonal() const;
};

/// Symmetric Lanczos with full reorthogonalization on the mode Gram matrix
/// <A,A>_{-mode}, applied matrix-free through gram_matvec.
LanczosResult contracted_lanczos(const DenseTensor3& A, Mode mode, int k,
                                 const Eigen::VectorXd& start, const LanczosOptions& opt = {});
LanczosResult contracted_lanczos(const SparseTensor3& A, Mode mode, int k,
                                 const Eigen::VectorXd& start, const LanczosOptions& opt = {});

/// Unit start vectors from the per-mode fibre means; these always lie in the
/// corresponding mode subspaces.
StartVectors fibre_mean_starts(const DenseTensor3& A);
StartVectors fibre_mean_starts(const SparseTensor3& A);

}  // namespace tkrylov
