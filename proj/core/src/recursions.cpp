#include "tkrylov/recursions.hpp"

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "tkrylov/subspace.hpp"
#include "tkrylov/tensor_ops.hpp"
#include "tkrylov/tucker.hpp"

namespace tkrylov {

namespace {

Eigen::VectorXd normalized_start(const Eigen::VectorXd& v, Mode mode, int dim) {
    if (v.size() != dim) {
        std::ostringstream msg;
        msg << "start vector for " << mode_name(mode) << " has length " << v.size()
            << ", tensor dimension is " << dim;
        throw std::invalid_argument(msg.str());
    }
    const double n = v.norm();
    if (n == 0.0) throw std::invalid_argument("start vector must be nonzero");
    return v / n;
}

Eigen::VectorXd unit_coordinate(int size, int idx0) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(size);
    e(idx0) = 1.0;
    return e;
}

// Coefficient fiber positions by target mode: mode 1 writes H(:,a,b),
// mode 2 writes H(a,:,b), mode 3 writes H(a,b,:). Entries already present are
// kept; they coincide with the fresh coefficients in exact arithmetic.
void fill_fiber(CoeffTensor& H, Mode target, int a, int b, const Eigen::VectorXd& coeffs,
                double norm, bool appended) {
    const int len = static_cast<int>(coeffs.size());
    auto put = [&](int pos, double value) {
        switch (target) {
            case Mode::one:
                if (!H.filled(pos, a, b)) H.set(pos, a, b, value);
                break;
            case Mode::two:
                if (!H.filled(a, pos, b)) H.set(a, pos, b, value);
                break;
            default:
                if (!H.filled(a, b, pos)) H.set(a, b, pos, value);
                break;
        }
    };
    for (int p = 1; p <= len; ++p) put(p, coeffs(p - 1));
    if (appended) put(len + 1, norm);
}

struct Selection {
    Eigen::VectorXd vec;
    int index = 0;           // 1-based basis index, 0 for a combination
    bool optimized = false;  // small-mode optimized policy marker
};

// ---------------------------------------------------------------------------
// Minimal-family engine: plain, modified, small-mode and optimized variants
// share start handling, selection, breakdown resolution and bookkeeping.

template <typename TensorT>
class MinimalEngine {
public:
    MinimalEngine(const TensorT& A, const RecursionOptions& opt) : A_(A), opt_(opt), rng_(opt.seed) {
        S_.seed = opt.seed;
        S_.variant = opt.variant;
        a_norm_ = frob_norm(A);
    }

    void configure_small_mode(Mode small, SmallModeOptions sopt) {
        small_mode_ = small;
        small_opt_ = sopt;
    }

    void configure_optimized(OptimizeOptions oopt) { optimize_ = oopt; }

    KrylovState run(const StartVectors& start, std::array<int, 3> targets,
                    RecursionMethod method) {
        S_.method = method;
        const std::array<int, 3> dims{A_.dim1(), A_.dim2(), A_.dim3()};
        for (int d = 0; d < 3; ++d) {
            if (targets[d] < 1 || targets[d] > dims[d]) {
                std::ostringstream msg;
                msg << "target size " << targets[d] << " for " << mode_name(mode_from_index(d + 1))
                    << " outside 1.." << dims[d];
                throw std::invalid_argument(msg.str());
            }
        }
        targets_ = targets;
        S_.U = OrthoBasis(Mode::one, dims[0]);
        S_.V = OrthoBasis(Mode::two, dims[1]);
        S_.W = OrthoBasis(Mode::three, dims[2]);

        S_.U.orthogonalize_append(normalized_start(start.u1, Mode::one, dims[0]), 0.0);
        S_.V.orthogonalize_append(normalized_start(start.v1, Mode::two, dims[1]), 0.0);

        if (start.w1) {
            S_.W.orthogonalize_append(normalized_start(*start.w1, Mode::three, dims[2]), 0.0);
        } else {
            const Eigen::VectorXd cand = tvv(A_, Mode::one, Mode::two, S_.U.column(0), S_.V.column(0));
            ++S_.counters.tvv;
            const auto res = S_.W.orthogonalize_append(cand, opt_.breakdown_tol);
            if (res.appended) {
                S_.H.set(1, 1, 1, res.norm);
            } else {
                handle_breakdown(Mode::three, 0, res.norm);
                if (S_.W.size() > 0) S_.H.set(1, 1, 1, S_.W.column(0).dot(cand));
            }
        }

        return finish();
    }

    KrylovState resume(KrylovState state, std::array<int, 3> targets) {
        const std::array<int, 3> dims{A_.dim1(), A_.dim2(), A_.dim3()};
        for (Mode m : {Mode::one, Mode::two, Mode::three}) {
            if (state.basis(m).dim() != dims[mode_index(m) - 1]) {
                std::ostringstream msg;
                msg << "resume: state " << mode_name(m) << " dimension " << state.basis(m).dim()
                    << " does not match tensor dimension " << dims[mode_index(m) - 1];
                throw std::invalid_argument(msg.str());
            }
        }
        S_ = std::move(state);
        for (int d = 0; d < 3; ++d) {
            if (targets[d] < 1 || targets[d] > dims[d]) {
                std::ostringstream msg;
                msg << "resume: target " << targets[d] << " for " << mode_name(mode_from_index(d + 1))
                    << " outside 1.." << dims[d];
                throw std::invalid_argument(msg.str());
            }
            targets[d] = std::max(targets[d], S_.basis(mode_from_index(d + 1)).size());
        }
        targets_ = targets;
        return finish();
    }

private:
    KrylovState finish() {
        const int max_target = std::max({targets_[0], targets_[1], targets_[2]});
        const int first = std::max({1, S_.U.size(), S_.V.size(), S_.W.size()});
        for (int i = first; !stop_ && !all_done(); ++i) {
            if (i > 4 * max_target + 16)
                throw std::logic_error("minimal recursion made no progress");
            step(i);
        }
        return std::move(S_);
    }

    bool done(Mode m) const {
        return S_.basis(m).size() >= targets_[mode_index(m) - 1];
    }

    bool all_done() const { return done(Mode::one) && done(Mode::two) && done(Mode::three); }

    void freeze(Mode m) { targets_[mode_index(m) - 1] = S_.basis(m).size(); }

    bool optimized_step(int i) const {
        return optimize_.has_value() && i > optimize_->warmup;
    }

    void step(int i) {
        cached_.clear();
        if (S_.variant == MinimalVariant::latest_pairs) {
            if (!done(Mode::one)) generate(Mode::one, i, select(Mode::two, i), select(Mode::three, i));
            if (stop_) return;
            if (!done(Mode::two))
                generate(Mode::two, i, select(Mode::one, i + 1), select(Mode::three, i));
            if (stop_) return;
            if (!done(Mode::three))
                generate(Mode::three, i, select(Mode::one, i + 1), select(Mode::two, i + 1));
        } else {
            const Selection su = select(Mode::one, i);
            const Selection sv = select(Mode::two, i);
            const Selection sw = select(Mode::three, i);
            if (!done(Mode::one)) generate(Mode::one, i, sv, sw);
            if (stop_) return;
            if (!done(Mode::two)) generate(Mode::two, i, su, sw);
            if (stop_) return;
            if (!done(Mode::three)) generate(Mode::three, i, su, sv);
        }
    }

    Selection select(Mode m, int idx) {
        const OrthoBasis& B = S_.basis(m);
        if (B.size() >= idx) return {B.column(idx - 1), idx, false};

        // Mode exhausted: one policy pick per mode per step.
        auto it = cached_.find(m);
        if (it != cached_.end()) return it->second;

        if (B.size() == 0) {
            Selection zero{Eigen::VectorXd::Zero(B.dim()), 0, false};
            cached_.emplace(m, zero);
            return zero;
        }

        Selection sel;
        const auto policy = small_mode_ == m ? small_opt_.policy
                                             : SmallModeOptions::Policy::random_combination;
        switch (policy) {
            case SmallModeOptions::Policy::cyclic: {
                const int c = (cycle_counter_++ % B.size()) + 1;
                sel = {B.column(c - 1), c, false};
                break;
            }
            case SmallModeOptions::Policy::optimized: {
                const int c = (cycle_counter_++ % B.size()) + 1;
                sel.index = c;  // cyclic fallback index, resolved in generate()
                sel.optimized = true;
                break;
            }
            default: {
                Eigen::VectorXd coeff = random_gaussian(B.size(), 1, rng_).col(0);
                Eigen::VectorXd comb = B.matrix() * coeff;
                const double n = comb.norm();
                sel = {n > 0 ? Eigen::VectorXd(comb / n) : B.column(0), 0, false};
                break;
            }
        }
        if (small_mode_ == m) S_.small_mode_selections.push_back(sel.optimized ? 0 : sel.index);
        cached_.emplace(m, sel);
        return sel;
    }

    void generate(Mode target, int step, const Selection& g1, const Selection& g2) {
        if (optimized_step(step)) {
            generate_optimized(target, step);
            return;
        }

        OrthoBasis& B = S_.basis(target);
        const auto [m1, m2] = other_modes(target);
        Eigen::VectorXd cand;
        bool fill = g1.index > 0 && g2.index > 0;

        if (g1.optimized || g2.optimized) {
            // Small-mode optimized policy: the exhausted mode's coefficients
            // are chosen to maximize the projected candidate norm.
            const bool first_is_small = g1.optimized;
            const Selection& fixed = first_is_small ? g2 : g1;
            const Mode fixed_mode = first_is_small ? m2 : m1;
            const auto smc = optimized_small_mode_candidate(
                A_, S_.basis(*small_mode_), first_is_small ? g1.index : g2.index, fixed.vec,
                fixed_mode, B, &S_.counters, small_opt_.power_iterations);
            cand = smc.candidate;
            fill = false;
        } else {
            cand = tvv(A_, m1, m2, g1.vec, g2.vec);
            ++S_.counters.tvv;
        }

        const auto res = B.orthogonalize_append(cand, opt_.breakdown_tol);
        if (fill) fill_fiber(S_.H, target, g1.index, g2.index, res.coeffs, res.norm, res.appended);
        if (!res.appended) handle_breakdown(target, step, res.norm);
    }

    // Optimized step: the new vector in `target` maximizes its norm over unit
    // combinations of the other two bases, orthogonal to the existing basis.
    void generate_optimized(Mode target, int step) {
        OrthoBasis& B = S_.basis(target);
        const auto [m1, m2] = other_modes(target);
        const OrthoBasis& B1 = S_.basis(m1);
        const OrthoBasis& B2 = S_.basis(m2);
        const int s1 = B1.size(), s2 = B2.size();

        Eigen::VectorXd cand;
        if (optimize_->strategy == OptimizeOptions::Strategy::exact_hosvd) {
            // Materialize the constrained tensor fibre by fibre.
            DenseTensor3 C(s1, s2, B.dim());
            for (int a = 1; a <= s1; ++a)
                for (int b = 1; b <= s2; ++b) {
                    Eigen::VectorXd f =
                        B.project_out(tvv(A_, m1, m2, B1.column(a - 1), B2.column(b - 1)));
                    ++S_.counters.tvv;
                    for (int c = 1; c <= B.dim(); ++c) C(a, b, c) = f(c - 1);
                }
            Eigen::VectorXd best;
            if (frob_norm(C) > 0.0) {
                const Rank1Triple r = best_rank111(C);
                best = tvv(C, Mode::one, Mode::two, r.theta, r.eta);
            } else {
                best = Eigen::VectorXd::Zero(B.dim());
            }
            // The plain minimal candidate is feasible; never fall below it.
            const Eigen::VectorXd plain =
                tvv(C, Mode::one, Mode::two, unit_coordinate(s1, s1 - 1), unit_coordinate(s2, s2 - 1));
            cand = best.norm() >= plain.norm() ? best : plain;
        } else {
            cand = inner_krylov_candidate(target, B1, B2, B);
        }

        const auto res = B.orthogonalize_append(cand, opt_.breakdown_tol);
        if (!res.appended) handle_breakdown(target, step, res.norm);
    }

    // Implicit inner minimal recursion on the constrained tensor; every
    // contraction is realized by one outer tvv plus projector matvecs, and
    // the inner coefficient tensor stands in for the inner core. Budget is
    // exactly 3t outer tvv.
    Eigen::VectorXd inner_krylov_candidate(Mode target, const OrthoBasis& B1, const OrthoBasis& B2,
                                           const OrthoBasis& B) {
        const auto [m1, m2] = other_modes(target);
        const int s1 = B1.size(), s2 = B2.size();
        const int t = optimize_->inner_steps;

        OrthoBasis Th(Mode::one, s1), Et(Mode::two, s2), Om(Mode::three, B.dim());
        CoeffTensor Sc;
        Th.orthogonalize_append(unit_coordinate(s1, s1 - 1), 0.0);
        Et.orthogonalize_append(unit_coordinate(s2, s2 - 1), 0.0);

        for (int s = 0; s < t; ++s) {
            const int a = Th.size(), b = Et.size();
            const Eigen::VectorXd th = B1.matrix() * Th.column(a - 1);
            const Eigen::VectorXd et = B2.matrix() * Et.column(b - 1);

            Eigen::VectorXd wc = B.project_out(tvv(A_, m1, m2, th, et));
            ++S_.counters.tvv;
            const auto wres = Om.orthogonalize_append(wc, opt_.breakdown_tol);
            fill_fiber(Sc, Mode::three, a, b, wres.coeffs, wres.norm, wres.appended);
            if (Om.size() == 0) return Eigen::VectorXd::Zero(B.dim());

            const int c = Om.size();
            const Eigen::VectorXd om = Om.column(c - 1);

            Eigen::VectorXd tc = B1.matrix().transpose() * tvv(A_, m2, target, et, om);
            ++S_.counters.tvv;
            const auto tres = Th.orthogonalize_append(tc, opt_.breakdown_tol);
            fill_fiber(Sc, Mode::one, b, c, tres.coeffs, tres.norm, tres.appended);

            const Eigen::VectorXd th2 = B1.matrix() * Th.column(Th.size() - 1);
            Eigen::VectorXd ec = B2.matrix().transpose() * tvv(A_, m1, target, th2, om);
            ++S_.counters.tvv;
            const auto eres = Et.orthogonalize_append(ec, opt_.breakdown_tol);
            fill_fiber(Sc, Mode::two, Th.size(), c, eres.coeffs, eres.norm, eres.appended);
        }

        const DenseTensor3 S = Sc.dense_prefix(Th.size(), Et.size(), Om.size());
        if (frob_norm(S) == 0.0) return Om.column(0);
        const Rank1Triple r = best_rank111(S);
        return Om.matrix() * (r.sigma * r.omega);
    }

    void handle_breakdown(Mode mode, int step, double residual) {
        OrthoBasis& B = S_.basis(mode);
        BreakdownEvent ev{mode, step, residual, BreakdownEvent::Resolution::subspace_complete};

        if (!B.full()) {
            // Probe whether the mode subspace is already covered: a random
            // unit vector orthogonal to the basis responds to the tensor only
            // if range is left over.
            bool complete = true;
            Eigen::VectorXd replacement;
            for (int p = 0; p < opt_.completeness_probes; ++p) {
                Eigen::VectorXd q = B.project_out(random_unit_vector(B.dim(), rng_));
                const double qn = q.norm();
                if (qn < 1e-12) continue;
                q /= qn;
                const double response = tv(A_, mode, q).norm();
                ++S_.counters.tvv;
                if (response > opt_.breakdown_tol * std::max(1.0, a_norm_)) {
                    complete = false;
                    replacement = std::move(q);
                    break;
                }
            }
            if (!complete) {
                ev.resolution = BreakdownEvent::Resolution::random_replacement;
                if (opt_.strict) {
                    stop_ = true;
                } else {
                    B.orthogonalize_append(replacement, 0.0);
                }
            }
        }
        if (ev.resolution == BreakdownEvent::Resolution::subspace_complete) freeze(mode);
        S_.events.push_back(ev);
    }

    const TensorT& A_;
    RecursionOptions opt_;
    KrylovState S_;
    std::mt19937_64 rng_;
    double a_norm_ = 0.0;
    std::array<int, 3> targets_{};
    std::optional<Mode> small_mode_;
    SmallModeOptions small_opt_;
    std::optional<OptimizeOptions> optimize_;
    int cycle_counter_ = 0;
    std::map<Mode, Selection> cached_;
    bool stop_ = false;
};

// ---------------------------------------------------------------------------
// Maximal recursion

template <typename TensorT>
KrylovState run_maximal(const TensorT& A, const StartVectors& start, std::array<int, 3> limits,
                        const RecursionOptions& opt) {
    const std::array<int, 3> dims{A.dim1(), A.dim2(), A.dim3()};
    for (int d = 0; d < 3; ++d) {
        if (limits[d] < 1 || limits[d] > dims[d]) {
            std::ostringstream msg;
            msg << "maximal_recursion: limit " << limits[d] << " for "
                << mode_name(mode_from_index(d + 1)) << " outside 1.." << dims[d];
            throw std::invalid_argument(msg.str());
        }
    }

    KrylovState S;
    S.method = RecursionMethod::maximal;
    S.seed = opt.seed;
    S.U = OrthoBasis(Mode::one, dims[0]);
    S.V = OrthoBasis(Mode::two, dims[1]);
    S.W = OrthoBasis(Mode::three, dims[2]);
    std::mt19937_64 rng(opt.seed);

    S.U.orthogonalize_append(normalized_start(start.u1, Mode::one, dims[0]), 0.0);
    S.V.orthogonalize_append(normalized_start(start.v1, Mode::two, dims[1]), 0.0);

    std::set<std::pair<int, int>> used_u, used_v, used_w;

    if (start.w1) {
        S.W.orthogonalize_append(normalized_start(*start.w1, Mode::three, dims[2]), 0.0);
    } else {
        const Eigen::VectorXd cand = tvv(A, Mode::one, Mode::two, S.U.column(0), S.V.column(0));
        ++S.counters.tvv;
        const auto res = S.W.orthogonalize_append(cand, opt.breakdown_tol);
        if (res.appended) {
            S.H.set(1, 1, 1, res.norm);
        } else {
            S.events.push_back({Mode::three, 0, res.norm,
                                BreakdownEvent::Resolution::random_replacement});
            if (opt.strict) return S;
            S.W.append_random_orthogonal(rng);
            S.H.set(1, 1, 1, S.W.column(0).dot(cand));
        }
        used_w.insert({1, 1});
    }

    // One loop over all unused pairs feeding `target`. Returns false when the
    // mode would outgrow its limit with pairs still available.
    auto run_loop = [&](Mode target, int& consumed) -> bool {
        OrthoBasis& B = S.basis(target);
        const auto [m1, m2] = other_modes(target);
        const OrthoBasis& B1 = S.basis(m1);
        const OrthoBasis& B2 = S.basis(m2);
        auto& used = target == Mode::one ? used_u : (target == Mode::two ? used_v : used_w);
        const int limit = limits[mode_index(target) - 1];
        const int n1 = B1.size(), n2 = B2.size();  // snapshot at loop entry

        for (int a = 1; a <= n1; ++a) {
            for (int b = 1; b <= n2; ++b) {
                if (used.count({a, b})) continue;
                // At the full space dimension candidates are expressible in
                // the basis and pairs keep being consumed; at a smaller limit
                // the loop must stop incomplete.
                if (B.size() >= limit && B.size() < B.dim()) return false;
                const Eigen::VectorXd cand = tvv(A, m1, m2, B1.column(a - 1), B2.column(b - 1));
                ++S.counters.tvv;
                const auto res = B.orthogonalize_append(cand, opt.breakdown_tol);
                fill_fiber(S.H, target, a, b, res.coeffs, res.norm, res.appended);
                used.insert({a, b});
                ++consumed;
            }
        }
        return true;
    };

    for (int guard = 0; guard < 1024; ++guard) {
        bool progress = false;
        for (Mode target : {Mode::one, Mode::two, Mode::three}) {
            int consumed = 0;
            const bool complete = run_loop(target, consumed);
            if (consumed > 0)
                S.loops.push_back({target, S.U.size(), S.V.size(), S.W.size(), complete});
            progress = progress || consumed > 0;
            if (!complete) return S;
        }
        if (!progress) break;
    }
    return S;
}

// ---------------------------------------------------------------------------
// Maximal truncation

template <typename TensorT>
Eigen::MatrixXd dominant_columns(const KrylovState& state, Mode mode, int subset) {
    const OrthoBasis& B = state.basis(mode);
    subset = std::min(subset, B.size());
    const auto dims = state.H.dims();
    std::vector<std::pair<double, int>> weight(B.size());
    for (int idx = 1; idx <= B.size(); ++idx) {
        double s = 0.0;
        // Frobenius norm of the core slice associated with this basis vector.
        for (int i = 1; i <= dims[0]; ++i)
            for (int j = 1; j <= dims[1]; ++j)
                for (int k = 1; k <= dims[2]; ++k) {
                    const bool hit = (mode == Mode::one && i == idx) ||
                                     (mode == Mode::two && j == idx) ||
                                     (mode == Mode::three && k == idx);
                    if (hit) {
                        const double v = state.H.at(i, j, k);
                        s += v * v;
                    }
                }
        weight[idx - 1] = {s, idx};
    }
    std::sort(weight.begin(), weight.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    Eigen::MatrixXd out(B.dim(), subset);
    for (int c = 0; c < subset; ++c) out.col(c) = B.column(weight[c].second - 1);
    return out;
}

template <typename TensorT>
KrylovState run_truncate(const KrylovState& state, const TensorT& A, std::array<int, 3> targets,
                         const TruncateOptions& topt) {
    const std::array<int, 3> sizes{state.U.size(), state.V.size(), state.W.size()};
    for (int d = 0; d < 3; ++d) {
        if (targets[d] < 0 || targets[d] > sizes[d]) {
            std::ostringstream msg;
            msg << "maximal_truncate: target " << targets[d] << " for "
                << mode_name(mode_from_index(d + 1)) << " exceeds available basis size "
                << sizes[d];
            throw std::invalid_argument(msg.str());
        }
    }

    KrylovState out;
    out.method = state.method;
    out.seed = state.seed;
    out.counters = state.counters;
    out.events = state.events;
    // No loop records: the truncated bases no longer satisfy the loop
    // factorization identities.
    out.U = OrthoBasis(Mode::one, A.dim1());
    out.V = OrthoBasis(Mode::two, A.dim2());
    out.W = OrthoBasis(Mode::three, A.dim3());

    for (Mode mode : {Mode::one, Mode::two, Mode::three}) {
        const int d = mode_index(mode) - 1;
        const OrthoBasis& B = state.basis(mode);
        if (targets[d] == sizes[d]) {
            out.basis(mode) = B;
            continue;
        }
        const auto [m1, m2] = other_modes(mode);
        Eigen::MatrixXd F1 = state.basis(m1).matrix();
        Eigen::MatrixXd F2 = state.basis(m2).matrix();
        if (topt.memory_bounded) {
            F1 = dominant_columns<TensorT>(state, m1, topt.subset);
            F2 = dominant_columns<TensorT>(state, m2, topt.subset);
        }
        if (F1.cols() * F2.cols() < targets[d]) {
            std::ostringstream msg;
            msg << "maximal_truncate: contraction for " << mode_name(mode) << " offers "
                << F1.cols() * F2.cols() << " columns, target is " << targets[d];
            throw std::invalid_argument(msg.str());
        }

        const Eigen::MatrixXd* factors[3] = {nullptr, nullptr, nullptr};
        factors[mode_index(m1) - 1] = &F1;
        factors[mode_index(m2) - 1] = &F2;
        const DenseTensor3 C = ttm_multi(A, factors[0], factors[1], factors[2], true);
        out.counters.tvv += F1.cols() * F2.cols();

        Eigen::BDCSVD<Eigen::MatrixXd> svd(matricize(C, mode), Eigen::ComputeThinU);
        out.basis(mode) = OrthoBasis::from_columns(mode, svd.matrixU().leftCols(targets[d]));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Contracted-product Lanczos

template <typename TensorT>
LanczosResult run_lanczos(const TensorT& A, Mode mode, int k, const Eigen::VectorXd& start,
                          const LanczosOptions& opt) {
    const int dim = A.dim(mode);
    if (k < 1 || k > dim) {
        std::ostringstream msg;
        msg << "contracted_lanczos: k=" << k << " outside 1.." << dim << " for "
            << mode_name(mode);
        throw std::invalid_argument(msg.str());
    }

    LanczosResult R;
    R.basis = OrthoBasis(mode, dim);
    R.basis.orthogonalize_append(normalized_start(start, mode, dim), 0.0);

    // For very sparse tensors a small mode-3 Gram is cheap to form
    // explicitly; each step then becomes a plain matvec.
    std::optional<Eigen::MatrixXd> G;
    if constexpr (std::is_same_v<TensorT, SparseTensor3>) {
        if (mode == Mode::three && dim <= opt.gram_dense_threshold) G = gram(A, mode);
    }

    Eigen::VectorXd alphas(k), betas(k > 1 ? k - 1 : 0);
    int steps = 1;
    for (int i = 0; i < k; ++i) {
        const Eigen::VectorXd z = G ? Eigen::VectorXd((*G) * R.basis.column(i))
                                    : gram_matvec(A, mode, R.basis.column(i));
        ++R.counters.gram_matvec;
        if (i + 1 < k) {
            const auto res = R.basis.orthogonalize_append(z, opt.breakdown_tol);
            alphas(i) = res.coeffs(i);
            if (!res.appended) {
                R.breakdown = true;
                break;
            }
            betas(i) = res.norm;
            ++steps;
        } else {
            const auto res = R.basis.orthogonalize(z);
            alphas(i) = res.coeffs(i);
        }
    }
    R.alphas = alphas.head(steps);
    R.betas = betas.head(steps - 1);
    return R;
}

// ---------------------------------------------------------------------------
// Small-mode optimized candidate

template <typename TensorT>
SmallModeCandidate small_mode_candidate_impl(const TensorT& A, const OrthoBasis& small_basis,
                                             int cyclic_index, const Eigen::VectorXd& fixed_vec,
                                             Mode fixed_mode, const OrthoBasis& target_basis,
                                             Counters* counters, int power_iterations) {
    const Mode small_mode = small_basis.mode();
    const Mode target_mode = remaining_mode(small_mode, fixed_mode);
    const int s = small_basis.size();

    auto tick = [&] {
        if (counters) ++counters->tvv;
    };

    // theta -> P * <A; B theta, fixed>, the implicitly applied matrix.
    auto apply = [&](const Eigen::VectorXd& theta) {
        tick();
        return Eigen::VectorXd(target_basis.project_out(
            tvv(A, small_mode, fixed_mode, small_basis.matrix() * theta, fixed_vec)));
    };
    // adjoint: y -> B^T <A; fixed, P y> with contraction over target mode.
    auto apply_adjoint = [&](const Eigen::VectorXd& y) {
        tick();
        return Eigen::VectorXd(small_basis.matrix().transpose() *
                               tvv(A, fixed_mode, target_mode, fixed_vec,
                                   target_basis.project_out(y)));
    };

    Eigen::VectorXd theta = Eigen::VectorXd::Constant(s, 1.0 / std::sqrt(double(s)));
    for (int it = 0; it < power_iterations; ++it) {
        Eigen::VectorXd y = apply(theta);
        Eigen::VectorXd t2 = apply_adjoint(y);
        const double n = t2.norm();
        if (n == 0.0) break;
        theta = t2 / n;
    }

    SmallModeCandidate best;
    best.theta = theta;
    best.candidate = apply(theta);
    best.norm = best.candidate.norm();

    // The cyclic pick is feasible in the maximization; never fall below it.
    Eigen::VectorXd e = Eigen::VectorXd::Zero(s);
    e(cyclic_index - 1) = 1.0;
    Eigen::VectorXd cyc = apply(e);
    if (cyc.norm() > best.norm) {
        best.theta = e;
        best.candidate = cyc;
        best.norm = cyc.norm();
    }
    return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// public entry points

template <typename TensorT>
static KrylovState minimal_impl(const TensorT& A, const StartVectors& start, int k,
                                const RecursionOptions& opt) {
    const int min_dim = std::min({A.dim1(), A.dim2(), A.dim3()});
    if (k < 1 || k > min_dim) {
        std::ostringstream msg;
        msg << "minimal_recursion: k=" << k << " outside 1..min(dims)=" << min_dim;
        throw std::invalid_argument(msg.str());
    }
    MinimalEngine<TensorT> engine(A, opt);
    return engine.run(start, {k, k, k}, RecursionMethod::minimal);
}

KrylovState minimal_recursion(const DenseTensor3& A, const StartVectors& start, int k,
                              const RecursionOptions& opt) {
    return minimal_impl(A, start, k, opt);
}
KrylovState minimal_recursion(const SparseTensor3& A, const StartVectors& start, int k,
                              const RecursionOptions& opt) {
    return minimal_impl(A, start, k, opt);
}

template <typename TensorT>
static KrylovState modified_impl(const TensorT& A, const StartVectors& start,
                                 std::array<int, 3> targets, const RecursionOptions& opt) {
    MinimalEngine<TensorT> engine(A, opt);
    return engine.run(start, targets, RecursionMethod::modified_minimal);
}

KrylovState modified_minimal_recursion(const DenseTensor3& A, const StartVectors& start,
                                       std::array<int, 3> targets, const RecursionOptions& opt) {
    return modified_impl(A, start, targets, opt);
}
KrylovState modified_minimal_recursion(const SparseTensor3& A, const StartVectors& start,
                                       std::array<int, 3> targets, const RecursionOptions& opt) {
    return modified_impl(A, start, targets, opt);
}

template <typename TensorT>
static KrylovState resume_impl(const TensorT& A, KrylovState state, std::array<int, 3> targets,
                               const RecursionOptions& opt) {
    switch (state.method) {
        case RecursionMethod::minimal:
        case RecursionMethod::modified_minimal:
        case RecursionMethod::small_mode:
            break;
        default:
            throw std::invalid_argument(
                "resume_minimal_recursion: only minimal-family states can be resumed");
    }
    MinimalEngine<TensorT> engine(A, opt);
    return engine.resume(std::move(state), targets);
}

KrylovState resume_minimal_recursion(const DenseTensor3& A, KrylovState state,
                                     std::array<int, 3> targets, const RecursionOptions& opt) {
    return resume_impl(A, std::move(state), targets, opt);
}
KrylovState resume_minimal_recursion(const SparseTensor3& A, KrylovState state,
                                     std::array<int, 3> targets, const RecursionOptions& opt) {
    return resume_impl(A, std::move(state), targets, opt);
}

KrylovState maximal_recursion(const DenseTensor3& A, const StartVectors& start,
                              std::array<int, 3> limits, const RecursionOptions& opt) {
    return run_maximal(A, start, limits, opt);
}
KrylovState maximal_recursion(const SparseTensor3& A, const StartVectors& start,
                              std::array<int, 3> limits, const RecursionOptions& opt) {
    return run_maximal(A, start, limits, opt);
}

KrylovState maximal_truncate(const KrylovState& state, const DenseTensor3& A,
                             std::array<int, 3> targets, const TruncateOptions& topt) {
    return run_truncate(state, A, targets, topt);
}
KrylovState maximal_truncate(const KrylovState& state, const SparseTensor3& A,
                             std::array<int, 3> targets, const TruncateOptions& topt) {
    return run_truncate(state, A, targets, topt);
}

template <typename TensorT>
static KrylovState optimized_impl(const TensorT& A, const StartVectors& start, int k,
                                  const OptimizeOptions& oopt, const RecursionOptions& opt) {
    const int min_dim = std::min({A.dim1(), A.dim2(), A.dim3()});
    if (k < 1 || k > min_dim) {
        std::ostringstream msg;
        msg << "optimized_recursion: k=" << k << " outside 1..min(dims)=" << min_dim;
        throw std::invalid_argument(msg.str());
    }
    if (oopt.inner_steps < 1)
        throw std::invalid_argument("optimized_recursion: inner_steps must be >= 1");
    MinimalEngine<TensorT> engine(A, opt);
    engine.configure_optimized(oopt);
    return engine.run(start, {k, k, k}, RecursionMethod::optimized);
}

KrylovState optimized_recursion(const DenseTensor3& A, const StartVectors& start, int k,
                                const OptimizeOptions& oopt, const RecursionOptions& opt) {
    return optimized_impl(A, start, k, oopt, opt);
}
KrylovState optimized_recursion(const SparseTensor3& A, const StartVectors& start, int k,
                                const OptimizeOptions& oopt, const RecursionOptions& opt) {
    return optimized_impl(A, start, k, oopt, opt);
}

template <typename TensorT>
static KrylovState small_mode_impl(const TensorT& A, Mode small, int k,
                                   const SmallModeOptions& sopt, const RecursionOptions& opt) {
    const int sdim = A.dim(small);
    if (sdim >= k) {
        std::ostringstream msg;
        msg << "small_mode_recursion: " << mode_name(small) << " dimension " << sdim
            << " is not smaller than k=" << k;
        throw std::invalid_argument(msg.str());
    }
    for (Mode m : other_modes(small)) {
        if (k > A.dim(m)) {
            std::ostringstream msg;
            msg << "small_mode_recursion: k=" << k << " exceeds " << mode_name(m)
                << " dimension " << A.dim(m);
            throw std::invalid_argument(msg.str());
        }
    }
    std::array<int, 3> targets{k, k, k};
    targets[mode_index(small) - 1] = sdim;

    MinimalEngine<TensorT> engine(A, opt);
    engine.configure_small_mode(small, sopt);
    // Fibre means always lie in the mode subspaces, so the recovery
    // guarantees apply without an extra iteration.
    KrylovState state = engine.run(fibre_mean_starts(A), targets, RecursionMethod::small_mode);
    return state;
}

KrylovState small_mode_recursion(const DenseTensor3& A, Mode small, int k,
                                 const SmallModeOptions& sopt, const RecursionOptions& opt) {
    return small_mode_impl(A, small, k, sopt, opt);
}
KrylovState small_mode_recursion(const SparseTensor3& A, Mode small, int k,
                                 const SmallModeOptions& sopt, const RecursionOptions& opt) {
    return small_mode_impl(A, small, k, sopt, opt);
}

SmallModeCandidate optimized_small_mode_candidate(const DenseTensor3& A,
                                                  const OrthoBasis& small_basis, int cyclic_index,
                                                  const Eigen::VectorXd& fixed_vec,
                                                  Mode fixed_mode, const OrthoBasis& target_basis,
                                                  Counters* counters, int power_iterations) {
    return small_mode_candidate_impl(A, small_basis, cyclic_index, fixed_vec, fixed_mode,
                                     target_basis, counters, power_iterations);
}
SmallModeCandidate optimized_small_mode_candidate(const SparseTensor3& A,
                                                  const OrthoBasis& small_basis, int cyclic_index,
                                                  const Eigen::VectorXd& fixed_vec,
                                                  Mode fixed_mode, const OrthoBasis& target_basis,
                                                  Counters* counters, int power_iterations) {
    return small_mode_candidate_impl(A, small_basis, cyclic_index, fixed_vec, fixed_mode,
                                     target_basis, counters, power_iterations);
}

LanczosResult contracted_lanczos(const DenseTensor3& A, Mode mode, int k,
                                 const Eigen::VectorXd& start, const LanczosOptions& opt) {
    return run_lanczos(A, mode, k, start, opt);
}
LanczosResult contracted_lanczos(const SparseTensor3& A, Mode mode, int k,
                                 const Eigen::VectorXd& start, const LanczosOptions& opt) {
    return run_lanczos(A, mode, k, start, opt);
}

Eigen::MatrixXd LanczosResult::tridiagonal() const {
    const int k = static_cast<int>(alphas.size());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
        T(i, i) = alphas(i);
        if (i + 1 < k) {
            T(i + 1, i) = betas(i);
            T(i, i + 1) = betas(i);
        }
    }
    return T;
}

template <typename TensorT>
static StartVectors fibre_means_impl(const TensorT& A) {
    StartVectors s;
    const Eigen::VectorXd ol = Eigen::VectorXd::Ones(A.dim1());
    const Eigen::VectorXd om = Eigen::VectorXd::Ones(A.dim2());
    const Eigen::VectorXd on = Eigen::VectorXd::Ones(A.dim3());
    auto unit = [](Eigen::VectorXd v) {
        const double n = v.norm();
        if (n == 0.0) v(0) = 1.0;
        return n == 0.0 ? v : Eigen::VectorXd(v / n);
    };
    s.u1 = unit(tvv(A, Mode::two, Mode::three, om, on));
    s.v1 = unit(tvv(A, Mode::one, Mode::three, ol, on));
    s.w1 = unit(tvv(A, Mode::one, Mode::two, ol, om));
    s.provenance = StartVectors::Provenance::fibre_mean;
    return s;
}

StartVectors fibre_mean_starts(const DenseTensor3& A) { return fibre_means_impl(A); }
StartVectors fibre_mean_starts(const SparseTensor3& A) { return fibre_means_impl(A); }

}  // namespace tkrylov
