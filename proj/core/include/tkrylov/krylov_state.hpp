#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "tkrylov/coeff_tensor.hpp"
#include "tkrylov/mode.hpp"
#include "tkrylov/ortho_basis.hpp"

namespace tkrylov {

/// Tensor-vector-vector multiplication accounting. A Gram matvec counts as
/// two tvv-equivalents.
struct Counters {
    std::int64_t tvv = 0;
    std::int64_t gram_matvec = 0;
    std::int64_t inner_products = 0;

    std::int64_t tvv_equivalents() const { return tvv + 2 * gram_matvec; }

    Counters& operator+=(const Counters& o) {
        tvv += o.tvv;
        gram_matvec += o.gram_matvec;
        inner_products += o.inner_products;
        return *this;
    }
};

struct BreakdownEvent {
    enum class Resolution { subspace_complete, random_replacement };

    Mode mode;
    int step;
    double residual_norm;
    Resolution resolution;
};

/// Unit-norm starting vectors for the recursions. w1 is optional; when
/// absent the recursions generate it from (u1, v1).
struct StartVectors {
    enum class Provenance { random, fibre_mean, user };

    Eigen::VectorXd u1, v1;
    std::optional<Eigen::VectorXd> w1;
    Provenance provenance = Provenance::user;

    static StartVectors random(std::array<int, 3> dims, std::uint64_t seed);
};

enum class MinimalVariant {
    latest_pairs,  // each candidate uses the most recently generated vectors
    lagged_pairs,  // all three candidates use the previous step's vectors
};

enum class RecursionMethod {
    minimal,
    modified_minimal,
    maximal,
    optimized,
    small_mode,
    contracted,
};

/// Loop boundary bookkeeping for the maximal recursion; `complete` means the
/// loop consumed every available pair without hitting a dimension cap, which
/// is the precondition of the loop factorization identity.
struct LoopRecord {
    Mode mode;
    int alpha, beta, gamma;  // basis sizes after the loop
    bool complete;
};

/// Aggregate output of every recursion: the three bases, the shared
/// coefficient tensor with its fill mask, operation counters and the
/// breakdown history.
struct KrylovState {
    OrthoBasis U, V, W;
    CoeffTensor H;
    Counters counters;
    std::vector<BreakdownEvent> events;
    std::vector<LoopRecord> loops;            // maximal recursion only
    std::vector<int> small_mode_selections;   // small-mode recursion only (1-based)
    RecursionMethod method = RecursionMethod::minimal;
    MinimalVariant variant = MinimalVariant::latest_pairs;
    std::uint64_t seed = 0;

    OrthoBasis& basis(Mode m) { return m == Mode::one ? U : (m == Mode::two ? V : W); }
    const OrthoBasis& basis(Mode m) const {
        return m == Mode::one ? U : (m == Mode::two ? V : W);
    }

    /// Hessenberg matrix of mode-1 coefficients: column i (1-based) is
    /// H(1:rows, i, i), the coefficients that produced u_{i+1}.
    Eigen::MatrixXd hessenberg_u() const;
    /// Column i is H(i+1, 1:rows, i) (latest_pairs) or H(i, 1:rows, i).
    Eigen::MatrixXd hessenberg_v() const;
    /// Column i is H(i+1, i+1, 1:rows) (latest_pairs) or H(i, i, 1:rows).
    Eigen::MatrixXd hessenberg_w() const;
};

struct RecursionOptions {
    double breakdown_tol = 1e-12;  // residual <= tol*max(1, ||candidate||) is a breakdown
    bool strict = false;           // stop at the first breakdown instead of recovering
    std::uint64_t seed = 0x6b72796c;
    MinimalVariant variant = MinimalVariant::latest_pairs;
    int completeness_probes = 3;
};

}  // namespace tkrylov
