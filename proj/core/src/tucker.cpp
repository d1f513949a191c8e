#include "tkrylov/tucker.hpp"

#include <sstream>
#include <stdexcept>

#include "tkrylov/recursions.hpp"
#include "tkrylov/tensor_ops.hpp"

namespace tkrylov {

namespace {

void check_orthonormal(const Eigen::MatrixXd& F, Mode mode, int tensor_dim) {
    if (F.rows() != tensor_dim) {
        std::ostringstream msg;
        msg << "core_project: " << mode_name(mode) << " factor has " << F.rows()
            << " rows, tensor dimension is " << tensor_dim;
        throw std::invalid_argument(msg.str());
    }
    if (F.cols() == 0) return;
    const Eigen::MatrixXd G = F.transpose() * F;
    const double dev = (G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
    if (dev > 1e-8) {
        std::ostringstream msg;
        msg << "core_project: " << mode_name(mode) << " factor not orthonormal (deviation " << dev
            << ")";
        throw std::invalid_argument(msg.str());
    }
}

// Columns get a deterministic sign: largest-magnitude entry positive.
void normalize_signs(Eigen::MatrixXd& F) {
    for (Eigen::Index c = 0; c < F.cols(); ++c) {
        Eigen::Index at = 0;
        F.col(c).cwiseAbs().maxCoeff(&at);
        if (F(at, c) < 0) F.col(c) = -F.col(c);
    }
}

// Leading eigenvectors of the mode Gram matrix, descending eigenvalues.
Eigen::MatrixXd leading_gram_eigenvectors(const Eigen::MatrixXd& G, int count) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("truncated_hosvd: eigendecomposition failed");
    const Eigen::Index n = G.rows();
    Eigen::MatrixXd out(n, count);
    for (int c = 0; c < count; ++c) out.col(c) = eig.eigenvectors().col(n - 1 - c);
    normalize_signs(out);
    return out;
}

template <typename TensorT>
DenseTensor3 core_project_impl(const TensorT& A, const Eigen::MatrixXd& U,
                               const Eigen::MatrixXd& V, const Eigen::MatrixXd& W,
                               Counters* counters) {
    check_orthonormal(U, Mode::one, A.dim1());
    check_orthonormal(V, Mode::two, A.dim2());
    check_orthonormal(W, Mode::three, A.dim3());

    // Evaluation order: contract the two modes whose remaining mode has the
    // smallest tensor dimension pairwise against A (one tvv each), then
    // finish the smallest mode with plain inner products. The intermediate
    // vectors are the shortest possible under this order, and the booked
    // tvv-equivalents are the pair count.
    Mode rem = Mode::one;
    for (Mode m : {Mode::two, Mode::three})
        if (A.dim(m) < A.dim(rem)) rem = m;
    const auto [ma, mb] = other_modes(rem);
    auto factor = [&](Mode m) -> const Eigen::MatrixXd& {
        return m == Mode::one ? U : (m == Mode::two ? V : W);
    };
    if (counters) {
        counters->tvv += factor(ma).cols() * factor(mb).cols();
        // finishing dots against the remaining factor
        counters->inner_products +=
            factor(ma).cols() * factor(mb).cols() * factor(rem).cols();
    }

    if constexpr (std::is_same_v<TensorT, SparseTensor3>) {
        DenseTensor3 core(static_cast<int>(U.cols()), static_cast<int>(V.cols()),
                          static_cast<int>(W.cols()));
        const Eigen::MatrixXd& Fa = factor(ma);
        const Eigen::MatrixXd& Fb = factor(mb);
        const Eigen::MatrixXd& Fr = factor(rem);
        for (int a = 1; a <= Fa.cols(); ++a)
            for (int b = 1; b <= Fb.cols(); ++b) {
                const Eigen::VectorXd f = tvv(A, ma, mb, Fa.col(a - 1), Fb.col(b - 1));
                const Eigen::VectorXd s = Fr.transpose() * f;
                int idx[3];
                idx[mode_index(ma) - 1] = a;
                idx[mode_index(mb) - 1] = b;
                for (int c = 1; c <= Fr.cols(); ++c) {
                    idx[mode_index(rem) - 1] = c;
                    core(idx[0], idx[1], idx[2]) = s(c - 1);
                }
            }
        return core;
    } else {
        return ttm_multi(A, &U, &V, &W, true);
    }
}

template <typename TensorT>
double approx_error_impl(const TensorT& A, const DenseTensor3& core) {
    return approx_error_from_norms(frob_norm(A), frob_norm(core));
}

template <typename TensorT>
TuckerDecomp truncated_hosvd_impl(const TensorT& A, std::array<int, 3> ranks) {
    const std::array<int, 3> dims{A.dim1(), A.dim2(), A.dim3()};
    for (int d = 0; d < 3; ++d) {
        if (ranks[d] < 0 || ranks[d] > dims[d]) {
            std::ostringstream msg;
            msg << "truncated_hosvd: rank " << ranks[d] << " for " << mode_name(mode_from_index(d + 1))
                << " outside 0.." << dims[d];
            throw std::invalid_argument(msg.str());
        }
    }

    TuckerDecomp out;
    out.method = "truncated-hosvd";
    out.U = leading_gram_eigenvectors(gram(A, Mode::one), ranks[0]);
    out.V = leading_gram_eigenvectors(gram(A, Mode::two), ranks[1]);
    out.W = leading_gram_eigenvectors(gram(A, Mode::three), ranks[2]);
    out.core = core_project(A, out.U, out.V, out.W, &out.counters);
    out.rel_error = approx_error_impl(A, out.core) / std::max(frob_norm(A), 1e-300);
    return out;
}

template <typename TensorT>
TuckerDecomp hosvd_via_krylov_impl(const TensorT& A, std::array<int, 3> ranks,
                                   const RecursionOptions& opt) {
    KrylovState state = modified_minimal_recursion(A, fibre_mean_starts(A), ranks, opt);

    const Eigen::MatrixXd Up = state.U.matrix();
    const Eigen::MatrixXd Vq = state.V.matrix();
    const Eigen::MatrixXd Wr = state.W.matrix();

    TuckerDecomp out;
    out.method = "hosvd-krylov";
    out.counters = state.counters;
    DenseTensor3 small_core = core_project(A, Up, Vq, Wr, &out.counters);

    // HOSVD of the small core; composing the factors gives the singular
    // factors of the full tensor.
    TuckerDecomp inner = truncated_hosvd(small_core, {state.U.size(), state.V.size(),
                                                      state.W.size()});
    out.U = Up * inner.U;
    out.V = Vq * inner.V;
    out.W = Wr * inner.W;
    out.core = inner.core;
    out.rel_error = approx_error_impl(A, out.core) / std::max(frob_norm(A), 1e-300);
    return out;
}

}  // namespace

DenseTensor3 core_project(const DenseTensor3& A, const Eigen::MatrixXd& U,
                          const Eigen::MatrixXd& V, const Eigen::MatrixXd& W, Counters* counters) {
    return core_project_impl(A, U, V, W, counters);
}
DenseTensor3 core_project(const SparseTensor3& A, const Eigen::MatrixXd& U,
                          const Eigen::MatrixXd& V, const Eigen::MatrixXd& W, Counters* counters) {
    return core_project_impl(A, U, V, W, counters);
}

double approx_error_from_norms(double tensor_norm, double core_norm) {
    if (core_norm > tensor_norm * (1.0 + 1e-10)) {
        std::ostringstream msg;
        msg << "approx_error: core norm " << core_norm << " exceeds tensor norm " << tensor_norm
            << ", which violates the projection bound";
        throw std::invalid_argument(msg.str());
    }
    const double e2 = tensor_norm * tensor_norm - core_norm * core_norm;
    return std::sqrt(std::max(0.0, e2));
}

double approx_error(const DenseTensor3& A, const DenseTensor3& core) {
    return approx_error_impl(A, core);
}
double approx_error(const SparseTensor3& A, const DenseTensor3& core) {
    return approx_error_impl(A, core);
}

TuckerDecomp truncated_hosvd(const DenseTensor3& A, std::array<int, 3> ranks) {
    return truncated_hosvd_impl(A, ranks);
}
TuckerDecomp truncated_hosvd(const SparseTensor3& A, std::array<int, 3> ranks) {
    return truncated_hosvd_impl(A, ranks);
}

TuckerDecomp hosvd_via_krylov(const DenseTensor3& A, std::array<int, 3> ranks,
                              const RecursionOptions& opt) {
    return hosvd_via_krylov_impl(A, ranks, opt);
}
TuckerDecomp hosvd_via_krylov(const SparseTensor3& A, std::array<int, 3> ranks,
                              const RecursionOptions& opt) {
    return hosvd_via_krylov_impl(A, ranks, opt);
}

Rank1Triple best_rank111(const DenseTensor3& C, int max_sweeps, double tol) {
    const double c_norm = frob_norm(C);
    if (c_norm == 0.0) throw std::invalid_argument("best_rank111: zero tensor");

    Rank1Triple r;
    r.theta = leading_gram_eigenvectors(gram(C, Mode::one), 1).col(0);
    r.eta = leading_gram_eigenvectors(gram(C, Mode::two), 1).col(0);
    r.omega = leading_gram_eigenvectors(gram(C, Mode::three), 1).col(0);

    double sigma_prev = -1.0;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        Eigen::VectorXd t = tvv(C, Mode::two, Mode::three, r.eta, r.omega);
        if (t.norm() > 0) r.theta = t.normalized();
        Eigen::VectorXd e = tvv(C, Mode::one, Mode::three, r.theta, r.omega);
        if (e.norm() > 0) r.eta = e.normalized();
        Eigen::VectorXd w = tvv(C, Mode::one, Mode::two, r.theta, r.eta);
        const double sigma = w.norm();
        if (sigma > 0) r.omega = w / sigma;
        r.sigma = sigma;
        r.sweeps = sweep + 1;
        if (sigma - sigma_prev <= tol * std::max(1.0, sigma)) break;
        sigma_prev = sigma;
    }
    // sigma = <C; theta, eta, omega> >= 0 by the final omega alignment
    r.sigma = tvv3(C, r.theta, r.eta, r.omega);
    return r;
}

}  // namespace tkrylov
