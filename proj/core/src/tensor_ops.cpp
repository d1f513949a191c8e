#include "tkrylov/tensor_ops.hpp"

#include <sstream>
#include <stdexcept>
#include <vector>

namespace tkrylov {

namespace {

[[noreturn]] void throw_dim(const char* op, Mode mode, long tensor_dim, long arg_dim) {
    std::ostringstream msg;
    msg << op << ": " << mode_name(mode) << " dimension mismatch, tensor has " << tensor_dim
        << ", argument has " << arg_dim;
    throw std::invalid_argument(msg.str());
}

void check_same_dims(const char* op, std::array<int, 3> a, std::array<int, 3> b) {
    if (a != b) {
        std::ostringstream msg;
        msg << op << ": tensors have different dimensions " << a[0] << "x" << a[1] << "x" << a[2]
            << " vs " << b[0] << "x" << b[1] << "x" << b[2];
        throw std::invalid_argument(msg.str());
    }
}

int ttm_check(const char* op, int tensor_dim, const Eigen::MatrixXd& M, Mode mode,
              bool transposed) {
    const long contract = transposed ? M.rows() : M.cols();
    if (contract != tensor_dim) throw_dim(op, mode, tensor_dim, contract);
    return static_cast<int>(transposed ? M.cols() : M.rows());
}

void order_tvv_args(Mode& ma, Mode& mb, const Eigen::VectorXd*& a, const Eigen::VectorXd*& b) {
    if (ma == mb) throw std::invalid_argument("tvv: contraction modes must be distinct");
    if (mode_index(ma) > mode_index(mb)) {
        std::swap(ma, mb);
        std::swap(a, b);
    }
}

void tvv_check(const char* op, int da, int db, Mode ma, Mode mb, const Eigen::VectorXd& a,
               const Eigen::VectorXd& b) {
    if (a.size() != da) throw_dim(op, ma, da, a.size());
    if (b.size() != db) throw_dim(op, mb, db, b.size());
}

}  // namespace

// ---------------------------------------------------------------------------
// ttm

DenseTensor3 ttm(const DenseTensor3& A, const Eigen::MatrixXd& M, Mode mode, bool transposed) {
    const int p = ttm_check("ttm", A.dim(mode), M, mode, transposed);
    switch (mode) {
        case Mode::one: {
            DenseTensor3 B(p, A.dim2(), A.dim3());
            for (int k = 1; k <= A.dim3(); ++k) {
                if (transposed)
                    B.slice(k).noalias() = M.transpose() * A.slice(k);
                else
                    B.slice(k).noalias() = M * A.slice(k);
            }
            return B;
        }
        case Mode::two: {
            DenseTensor3 B(A.dim1(), p, A.dim3());
            for (int k = 1; k <= A.dim3(); ++k) {
                if (transposed)
                    B.slice(k).noalias() = A.slice(k) * M;
                else
                    B.slice(k).noalias() = A.slice(k) * M.transpose();
            }
            return B;
        }
        default: {
            DenseTensor3 B(A.dim1(), A.dim2(), p);
            Eigen::Map<Eigen::MatrixXd> out(B.data().data(),
                                            static_cast<Eigen::Index>(A.dim1()) * A.dim2(), p);
            if (transposed)
                out.noalias() = A.slices_as_columns() * M;
            else
                out.noalias() = A.slices_as_columns() * M.transpose();
            return B;
        }
    }
}

DenseTensor3 ttm(const SparseTensor3& A, const Eigen::MatrixXd& M, Mode mode, bool transposed) {
    const int p = ttm_check("ttm", A.dim(mode), M, mode, transposed);
    const int l = A.dim1(), m = A.dim2();
    switch (mode) {
        case Mode::one: {
            DenseTensor3 B(p, m, A.dim3());
            double* out = B.data().data();
            for (const SparseEntry& e : A.entries()) {
                const std::int64_t base =
                    static_cast<std::int64_t>(p) * ((e.j - 1) + static_cast<std::int64_t>(m) * (e.k - 1));
                Eigen::Map<Eigen::VectorXd> fibre(out + base, p);
                if (transposed)
                    fibre.noalias() += e.value * M.row(e.i - 1).transpose();
                else
                    fibre.noalias() += e.value * M.col(e.i - 1);
            }
            return B;
        }
        case Mode::two: {
            DenseTensor3 B(l, p, A.dim3());
            double* out = B.data().data();
            for (const SparseEntry& e : A.entries()) {
                const std::int64_t base =
                    (e.i - 1) + static_cast<std::int64_t>(l) * p * (e.k - 1);
                Eigen::Map<Eigen::VectorXd, 0, Eigen::InnerStride<>> fibre(out + base, p,
                                                                           Eigen::InnerStride<>(l));
                if (transposed)
                    fibre += e.value * M.row(e.j - 1).transpose();
                else
                    fibre += e.value * M.col(e.j - 1);
            }
            return B;
        }
        default: {
            DenseTensor3 B(l, m, p);
            double* out = B.data().data();
            const std::int64_t stride = static_cast<std::int64_t>(l) * m;
            for (const SparseEntry& e : A.entries()) {
                const std::int64_t base = (e.i - 1) + static_cast<std::int64_t>(l) * (e.j - 1);
                Eigen::Map<Eigen::VectorXd, 0, Eigen::InnerStride<>> fibre(
                    out + base, p, Eigen::InnerStride<>(stride));
                if (transposed)
                    fibre += e.value * M.row(e.k - 1).transpose();
                else
                    fibre += e.value * M.col(e.k - 1);
            }
            return B;
        }
    }
}

DenseTensor3 ttm_multi(const DenseTensor3& A, const Eigen::MatrixXd* U, const Eigen::MatrixXd* V,
                       const Eigen::MatrixXd* W, bool transposed) {
    DenseTensor3 B = A;
    if (U) B = ttm(B, *U, Mode::one, transposed);
    if (V) B = ttm(B, *V, Mode::two, transposed);
    if (W) B = ttm(B, *W, Mode::three, transposed);
    return B;
}

DenseTensor3 ttm_multi(const SparseTensor3& A, const Eigen::MatrixXd* U, const Eigen::MatrixXd* V,
                       const Eigen::MatrixXd* W, bool transposed) {
    // The first factor applied densifies the result; pick the mode giving the
    // smallest dense intermediate.
    const Eigen::MatrixXd* factors[3] = {U, V, W};
    std::int64_t best_size = -1;
    int best = -1;
    for (int d = 0; d < 3; ++d) {
        if (!factors[d]) continue;
        const int out_dim =
            static_cast<int>(transposed ? factors[d]->cols() : factors[d]->rows());
        std::int64_t size = 1;
        for (int o = 0; o < 3; ++o)
            size *= (o == d) ? out_dim : A.dim(mode_from_index(o + 1));
        if (best < 0 || size < best_size) {
            best = d;
            best_size = size;
        }
    }
    if (best < 0) return A.densify();
    DenseTensor3 B = ttm(A, *factors[best], mode_from_index(best + 1), transposed);
    const Eigen::MatrixXd* rest[3] = {U, V, W};
    rest[best] = nullptr;
    return ttm_multi(B, rest[0], rest[1], rest[2], transposed);
}

// ---------------------------------------------------------------------------
// tvv and friends

Eigen::VectorXd tvv(const DenseTensor3& A, Mode ma, Mode mb, const Eigen::VectorXd& a,
                    const Eigen::VectorXd& b) {
    const Eigen::VectorXd* pa = &a;
    const Eigen::VectorXd* pb = &b;
    order_tvv_args(ma, mb, pa, pb);
    tvv_check("tvv", A.dim(ma), A.dim(mb), ma, mb, *pa, *pb);

    const int n = A.dim3();
    if (ma == Mode::one && mb == Mode::two) {
        Eigen::VectorXd out(n);
        for (int k = 1; k <= n; ++k) out(k - 1) = pa->dot(A.slice(k) * (*pb));
        return out;
    }
    if (ma == Mode::one && mb == Mode::three) {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(A.dim2());
        for (int k = 1; k <= n; ++k) out.noalias() += (*pb)(k - 1) * (A.slice(k).transpose() * (*pa));
        return out;
    }
    Eigen::VectorXd out = Eigen::VectorXd::Zero(A.dim1());
    for (int k = 1; k <= n; ++k) out.noalias() += (*pb)(k - 1) * (A.slice(k) * (*pa));
    return out;
}

Eigen::VectorXd tvv(const SparseTensor3& A, Mode ma, Mode mb, const Eigen::VectorXd& a,
                    const Eigen::VectorXd& b) {
    const Eigen::VectorXd* pa = &a;
    const Eigen::VectorXd* pb = &b;
    order_tvv_args(ma, mb, pa, pb);
    tvv_check("tvv", A.dim(ma), A.dim(mb), ma, mb, *pa, *pb);

    const Eigen::VectorXd& x = *pa;
    const Eigen::VectorXd& y = *pb;
    if (ma == Mode::one && mb == Mode::two) {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(A.dim3());
        for (const SparseEntry& e : A.entries()) out(e.k - 1) += e.value * x(e.i - 1) * y(e.j - 1);
        return out;
    }
    if (ma == Mode::one && mb == Mode::three) {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(A.dim2());
        for (const SparseEntry& e : A.entries()) out(e.j - 1) += e.value * x(e.i - 1) * y(e.k - 1);
        return out;
    }
    Eigen::VectorXd out = Eigen::VectorXd::Zero(A.dim1());
    for (const SparseEntry& e : A.entries()) out(e.i - 1) += e.value * x(e.j - 1) * y(e.k - 1);
    return out;
}

double tvv3(const DenseTensor3& A, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
            const Eigen::VectorXd& w) {
    if (u.size() != A.dim1()) throw_dim("tvv3", Mode::one, A.dim1(), u.size());
    if (v.size() != A.dim2()) throw_dim("tvv3", Mode::two, A.dim2(), v.size());
    if (w.size() != A.dim3()) throw_dim("tvv3", Mode::three, A.dim3(), w.size());
    double s = 0.0;
    for (int k = 1; k <= A.dim3(); ++k) s += w(k - 1) * u.dot(A.slice(k) * v);
    return s;
}

double tvv3(const SparseTensor3& A, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
            const Eigen::VectorXd& w) {
    if (u.size() != A.dim1()) throw_dim("tvv3", Mode::one, A.dim1(), u.size());
    if (v.size() != A.dim2()) throw_dim("tvv3", Mode::two, A.dim2(), v.size());
    if (w.size() != A.dim3()) throw_dim("tvv3", Mode::three, A.dim3(), w.size());
    double s = 0.0;
    for (const SparseEntry& e : A.entries()) s += e.value * u(e.i - 1) * v(e.j - 1) * w(e.k - 1);
    return s;
}

// ---------------------------------------------------------------------------
// inner products and norms

double inner(const DenseTensor3& A, const DenseTensor3& B) {
    check_same_dims("inner", A.dims(), B.dims());
    Eigen::Map<const Eigen::VectorXd> a(A.data().data(), A.size());
    Eigen::Map<const Eigen::VectorXd> b(B.data().data(), B.size());
    return a.dot(b);
}

double inner(const SparseTensor3& A, const SparseTensor3& B) {
    check_same_dims("inner", A.dims(), B.dims());
    // Both entry lists are sorted by (k,j,i); merge them.
    auto ea = A.entries();
    auto eb = B.entries();
    std::size_t ia = 0, ib = 0;
    double s = 0.0;
    auto key = [](const SparseEntry& e) {
        return std::array<int, 3>{e.k, e.j, e.i};
    };
    while (ia < ea.size() && ib < eb.size()) {
        const auto ka = key(ea[ia]);
        const auto kb = key(eb[ib]);
        if (ka == kb) {
            s += ea[ia].value * eb[ib].value;
            ++ia;
            ++ib;
        } else if (ka < kb) {
            ++ia;
        } else {
            ++ib;
        }
    }
    return s;
}

double inner(const SparseTensor3& A, const DenseTensor3& B) {
    check_same_dims("inner", A.dims(), B.dims());
    double s = 0.0;
    for (const SparseEntry& e : A.entries()) s += e.value * B(e.i, e.j, e.k);
    return s;
}

double inner(const DenseTensor3& A, const SparseTensor3& B) { return inner(B, A); }

double frob_norm(const DenseTensor3& A) {
    Eigen::Map<const Eigen::VectorXd> a(A.data().data(), A.size());
    return a.norm();
}

double frob_norm(const SparseTensor3& A) {
    double s = 0.0;
    for (const SparseEntry& e : A.entries()) s += e.value * e.value;
    return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// matricization

Eigen::MatrixXd matricize(const DenseTensor3& A, Mode mode) {
    const int l = A.dim1(), m = A.dim2(), n = A.dim3();
    switch (mode) {
        case Mode::one: {
            Eigen::MatrixXd out(l, static_cast<Eigen::Index>(m) * n);
            for (int j = 1; j <= m; ++j)
                for (int k = 1; k <= n; ++k)
                    out.col(static_cast<Eigen::Index>(j - 1) * n + (k - 1)) =
                        A.slice(k).col(j - 1);
            return out;
        }
        case Mode::two: {
            Eigen::MatrixXd out(m, static_cast<Eigen::Index>(l) * n);
            for (int i = 1; i <= l; ++i)
                for (int k = 1; k <= n; ++k)
                    out.col(static_cast<Eigen::Index>(i - 1) * n + (k - 1)) =
                        A.slice(k).row(i - 1).transpose();
            return out;
        }
        default: {
            Eigen::MatrixXd out(n, static_cast<Eigen::Index>(l) * m);
            for (int i = 1; i <= l; ++i)
                for (int j = 1; j <= m; ++j) {
                    const Eigen::Index c = static_cast<Eigen::Index>(i - 1) * m + (j - 1);
                    for (int k = 1; k <= n; ++k) out(k - 1, c) = A(i, j, k);
                }
            return out;
        }
    }
}

Eigen::SparseMatrix<double> matricize_sparse(const SparseTensor3& A, Mode mode) {
    const int m = A.dim2(), n = A.dim3();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(A.nnz()));
    Eigen::Index rows = A.dim(mode), cols = 0;
    switch (mode) {
        case Mode::one:
            cols = static_cast<Eigen::Index>(m) * n;
            for (const SparseEntry& e : A.entries())
                trips.emplace_back(e.i - 1, static_cast<Eigen::Index>(e.j - 1) * n + (e.k - 1),
                                   e.value);
            break;
        case Mode::two:
            cols = static_cast<Eigen::Index>(A.dim1()) * n;
            for (const SparseEntry& e : A.entries())
                trips.emplace_back(e.j - 1, static_cast<Eigen::Index>(e.i - 1) * n + (e.k - 1),
                                   e.value);
            break;
        default:
            cols = static_cast<Eigen::Index>(A.dim1()) * m;
            for (const SparseEntry& e : A.entries())
                trips.emplace_back(e.k - 1, static_cast<Eigen::Index>(e.i - 1) * m + (e.j - 1),
                                   e.value);
            break;
    }
    Eigen::SparseMatrix<double> out(rows, cols);
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

Eigen::MatrixXd matricize(const SparseTensor3& A, Mode mode) {
    return Eigen::MatrixXd(matricize_sparse(A, mode));
}

DenseTensor3 dematricize(const Eigen::MatrixXd& M, Mode mode, std::array<int, 3> dims) {
    const int l = dims[0], m = dims[1], n = dims[2];
    Eigen::Index expect_rows = 0, expect_cols = 0;
    switch (mode) {
        case Mode::one:
            expect_rows = l;
            expect_cols = static_cast<Eigen::Index>(m) * n;
            break;
        case Mode::two:
            expect_rows = m;
            expect_cols = static_cast<Eigen::Index>(l) * n;
            break;
        default:
            expect_rows = n;
            expect_cols = static_cast<Eigen::Index>(l) * m;
            break;
    }
    if (M.rows() != expect_rows || M.cols() != expect_cols) {
        std::ostringstream msg;
        msg << "dematricize: matrix is " << M.rows() << "x" << M.cols() << " but "
            << mode_name(mode) << " matricization of " << l << "x" << m << "x" << n << " is "
            << expect_rows << "x" << expect_cols;
        throw std::invalid_argument(msg.str());
    }
    DenseTensor3 out(l, m, n);
    for (int i = 1; i <= l; ++i)
        for (int j = 1; j <= m; ++j)
            for (int k = 1; k <= n; ++k) {
                switch (mode) {
                    case Mode::one:
                        out(i, j, k) = M(i - 1, static_cast<Eigen::Index>(j - 1) * n + (k - 1));
                        break;
                    case Mode::two:
                        out(i, j, k) = M(j - 1, static_cast<Eigen::Index>(i - 1) * n + (k - 1));
                        break;
                    default:
                        out(i, j, k) = M(k - 1, static_cast<Eigen::Index>(i - 1) * m + (j - 1));
                        break;
                }
            }
    return out;
}

// ---------------------------------------------------------------------------
// contracted products

Eigen::MatrixXd contract_mode1(const DenseTensor3& A, const DenseTensor3& B) {
    if (A.dim1() != B.dim1()) throw_dim("contract_mode1", Mode::one, A.dim1(), B.dim1());
    return matricize(A, Mode::one).transpose() * matricize(B, Mode::one);
}

Eigen::MatrixXd contract_mode1(const SparseTensor3& A, const SparseTensor3& B) {
    if (A.dim1() != B.dim1()) throw_dim("contract_mode1", Mode::one, A.dim1(), B.dim1());
    return Eigen::MatrixXd(matricize_sparse(A, Mode::one).transpose() *
                           matricize_sparse(B, Mode::one));
}

Eigen::MatrixXd contract_modes12(const DenseTensor3& A, const DenseTensor3& B) {
    if (A.dim1() != B.dim1()) throw_dim("contract_modes12", Mode::one, A.dim1(), B.dim1());
    if (A.dim2() != B.dim2()) throw_dim("contract_modes12", Mode::two, A.dim2(), B.dim2());
    return A.slices_as_columns().transpose() * B.slices_as_columns();
}

Eigen::MatrixXd contract_modes12(const SparseTensor3& A, const SparseTensor3& B) {
    if (A.dim1() != B.dim1()) throw_dim("contract_modes12", Mode::one, A.dim1(), B.dim1());
    if (A.dim2() != B.dim2()) throw_dim("contract_modes12", Mode::two, A.dim2(), B.dim2());
    return Eigen::MatrixXd(matricize_sparse(A, Mode::three) *
                           matricize_sparse(B, Mode::three).transpose());
}

namespace {

template <typename TensorT>
Eigen::MatrixXd contract_all_but_impl(const TensorT& A, const TensorT& B, Mode keep) {
    for (Mode m : other_modes(keep)) {
        if (A.dim(m) != B.dim(m)) throw_dim("contract_all_but", m, A.dim(m), B.dim(m));
    }
    if constexpr (std::is_same_v<TensorT, SparseTensor3>) {
        return Eigen::MatrixXd(matricize_sparse(A, keep) * matricize_sparse(B, keep).transpose());
    } else {
        return matricize(A, keep) * matricize(B, keep).transpose();
    }
}

}  // namespace

Eigen::MatrixXd contract_all_but(const DenseTensor3& A, const DenseTensor3& B, Mode keep) {
    return contract_all_but_impl(A, B, keep);
}

Eigen::MatrixXd contract_all_but(const SparseTensor3& A, const SparseTensor3& B, Mode keep) {
    return contract_all_but_impl(A, B, keep);
}

Eigen::MatrixXd gram(const DenseTensor3& A, Mode mode) {
    const Eigen::MatrixXd M = matricize(A, mode);
    return M * M.transpose();
}

Eigen::MatrixXd gram(const SparseTensor3& A, Mode mode) {
    const Eigen::SparseMatrix<double> M = matricize_sparse(A, mode);
    return Eigen::MatrixXd(M * M.transpose());
}

// ---------------------------------------------------------------------------
// Gram matvec, slice-wise

Eigen::VectorXd gram_matvec(const SparseTensor3& A, Mode mode, const Eigen::VectorXd& u) {
    if (u.size() != A.dim(mode)) throw_dim("gram_matvec", mode, A.dim(mode), u.size());
    const int l = A.dim1(), m = A.dim2(), n = A.dim3();

    switch (mode) {
        case Mode::one: {
            // sum_k A_k A_k^T u; slice entries are sorted by (j,i), so the
            // column sums s_j = sum_i a_{ijk} u_i come out of contiguous runs.
            Eigen::VectorXd y = Eigen::VectorXd::Zero(l);
            std::vector<double> run_sums;
            for (int k = 1; k <= n; ++k) {
                auto es = A.slice(k);
                run_sums.clear();
                for (std::size_t r = 0; r < es.size();) {
                    const int j = es[r].j;
                    double s = 0.0;
                    while (r < es.size() && es[r].j == j) {
                        s += es[r].value * u(es[r].i - 1);
                        ++r;
                    }
                    run_sums.push_back(s);
                }
                std::size_t run = 0;
                for (std::size_t r = 0; r < es.size();) {
                    const int j = es[r].j;
                    while (r < es.size() && es[r].j == j) {
                        y(es[r].i - 1) += es[r].value * run_sums[run];
                        ++r;
                    }
                    ++run;
                }
            }
            return y;
        }
        case Mode::two: {
            // sum_k A_k^T A_k u with a touched-index workspace per slice.
            Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
            std::vector<double> t(static_cast<std::size_t>(l), 0.0);
            std::vector<int> touched;
            for (int k = 1; k <= n; ++k) {
                auto es = A.slice(k);
                touched.clear();
                for (const SparseEntry& e : es) {
                    t[e.i - 1] += e.value * u(e.j - 1);
                    touched.push_back(e.i - 1);
                }
                for (const SparseEntry& e : es) y(e.j - 1) += e.value * t[e.i - 1];
                for (int idx : touched) t[idx] = 0.0;
            }
            return y;
        }
        default: {
            // Tube contraction T(i,j) = sum_k a_{ijk} u_k followed by
            // y_k = <A_k, T>; T is an l*m scratch array, not the Gram matrix.
            Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
            std::vector<double> t(static_cast<std::size_t>(l) * m, 0.0);
            for (const SparseEntry& e : A.entries())
                t[(e.i - 1) + static_cast<std::size_t>(l) * (e.j - 1)] += e.value * u(e.k - 1);
            for (const SparseEntry& e : A.entries())
                y(e.k - 1) += e.value * t[(e.i - 1) + static_cast<std::size_t>(l) * (e.j - 1)];
            return y;
        }
    }
}

Eigen::VectorXd gram_matvec(const DenseTensor3& A, Mode mode, const Eigen::VectorXd& u) {
    if (u.size() != A.dim(mode)) throw_dim("gram_matvec", mode, A.dim(mode), u.size());
    const int n = A.dim3();
    switch (mode) {
        case Mode::one: {
            Eigen::VectorXd y = Eigen::VectorXd::Zero(A.dim1());
            for (int k = 1; k <= n; ++k) y.noalias() += A.slice(k) * (A.slice(k).transpose() * u);
            return y;
        }
        case Mode::two: {
            Eigen::VectorXd y = Eigen::VectorXd::Zero(A.dim2());
            for (int k = 1; k <= n; ++k) y.noalias() += A.slice(k).transpose() * (A.slice(k) * u);
            return y;
        }
        default: {
            const auto S = A.slices_as_columns();
            return S.transpose() * (S * u);
        }
    }
}

// ---------------------------------------------------------------------------
// single-mode contraction with a vector

Eigen::MatrixXd tv(const DenseTensor3& A, Mode mode, const Eigen::VectorXd& u) {
    if (u.size() != A.dim(mode)) throw_dim("tv", mode, A.dim(mode), u.size());
    const int n = A.dim3();
    switch (mode) {
        case Mode::one: {
            Eigen::MatrixXd out(A.dim2(), n);
            for (int k = 1; k <= n; ++k) out.col(k - 1) = A.slice(k).transpose() * u;
            return out;
        }
        case Mode::two: {
            Eigen::MatrixXd out(A.dim1(), n);
            for (int k = 1; k <= n; ++k) out.col(k - 1) = A.slice(k) * u;
            return out;
        }
        default: {
            Eigen::VectorXd flat = A.slices_as_columns() * u;
            return Eigen::Map<const Eigen::MatrixXd>(flat.data(), A.dim1(), A.dim2());
        }
    }
}

Eigen::MatrixXd tv(const SparseTensor3& A, Mode mode, const Eigen::VectorXd& u) {
    if (u.size() != A.dim(mode)) throw_dim("tv", mode, A.dim(mode), u.size());
    switch (mode) {
        case Mode::one: {
            Eigen::MatrixXd out = Eigen::MatrixXd::Zero(A.dim2(), A.dim3());
            for (const SparseEntry& e : A.entries())
                out(e.j - 1, e.k - 1) += e.value * u(e.i - 1);
            return out;
        }
        case Mode::two: {
            Eigen::MatrixXd out = Eigen::MatrixXd::Zero(A.dim1(), A.dim3());
            for (const SparseEntry& e : A.entries())
                out(e.i - 1, e.k - 1) += e.value * u(e.j - 1);
            return out;
        }
        default: {
            Eigen::MatrixXd out = Eigen::MatrixXd::Zero(A.dim1(), A.dim2());
            for (const SparseEntry& e : A.entries())
                out(e.i - 1, e.j - 1) += e.value * u(e.k - 1);
            return out;
        }
    }
}

}  // namespace tkrylov
