#include <doctest.h>

#include <random>

#include "test_support.hpp"
#include "tkrylov/subspace.hpp"
#include "tkrylov/tensor_ops.hpp"

using namespace tkrylov;
using namespace testsupport;

namespace {

SparseTensor3 random_sparse(int l, int m, int n, double density, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::normal_distribution<double> val(0.0, 1.0);
    std::vector<SparseEntry> entries;
    for (int k = 1; k <= n; ++k)
        for (int j = 1; j <= m; ++j)
            for (int i = 1; i <= l; ++i)
                if (coin(rng) < density) entries.push_back({i, j, k, val(rng)});
    return SparseTensor3(l, m, n, std::move(entries));
}

}  // namespace

TEST_CASE("ttm by identity returns the tensor") {
    const DenseTensor3 A = random_dense(3, 4, 5, 11);
    for (Mode m : {Mode::one, Mode::two, Mode::three}) {
        const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(A.dim(m), A.dim(m));
        CHECK(max_abs_diff(ttm(A, I, m), A) == doctest::Approx(0.0).epsilon(1e-15));
    }
}

TEST_CASE("ttm by an all-ones row sums the slice columns") {
    const DenseTensor3 A = example_tensor();
    Eigen::MatrixXd ones(1, 2);
    ones << 1, 1;
    const DenseTensor3 B = ttm(A, ones, Mode::one);
    CHECK(B.dim1() == 1);
    CHECK(B.dim2() == 2);
    CHECK(B.dim3() == 2);
    // frozen from the triple-loop oracle
    CHECK(max_abs_diff(B, ttm_ref(A, ones, Mode::one)) == 0.0);
    CHECK(B(1, 1, 1) == 4.0);
    CHECK(B(1, 2, 1) == 6.0);
    CHECK(B(1, 1, 2) == 12.0);
    CHECK(B(1, 2, 2) == 14.0);
}

TEST_CASE("ttm by a zero matrix annihilates") {
    const DenseTensor3 A = random_dense(3, 4, 5, 12);
    const DenseTensor3 B = ttm(A, Eigen::MatrixXd::Zero(2, 4), Mode::two);
    CHECK(frob_norm(B) == 0.0);
}

TEST_CASE("ttm rejects mismatched dimensions naming the mode") {
    const DenseTensor3 A = random_dense(3, 4, 5, 13);
    try {
        ttm(A, Eigen::MatrixXd::Zero(2, 3), Mode::two);
        FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& err) {
        const std::string what = err.what();
        CHECK(what.find("mode-2") != std::string::npos);
        CHECK(what.find('4') != std::string::npos);
        CHECK(what.find('3') != std::string::npos);
    }
}

TEST_CASE("ttm agrees with the triple-loop reference in all modes") {
    const DenseTensor3 A = random_dense(4, 3, 5, 17);
    std::mt19937_64 rng(18);
    for (Mode m : {Mode::one, Mode::two, Mode::three}) {
        const Eigen::MatrixXd M = random_gaussian(2, A.dim(m), rng);
        CHECK(max_abs_diff(ttm(A, M, m), ttm_ref(A, M, m)) < 1e-13);
        const Eigen::MatrixXd Mt = random_gaussian(A.dim(m), 2, rng);
        CHECK(max_abs_diff(ttm(A, Mt, m, true), ttm_ref(A, Mt, m, true)) < 1e-13);
    }
}

TEST_CASE("ttm along distinct modes commutes") {
    const DenseTensor3 A = random_dense(5, 4, 3, 19);
    std::mt19937_64 rng(20);
    const Eigen::MatrixXd U = random_gaussian(2, 5, rng);
    const Eigen::MatrixXd V = random_gaussian(3, 4, rng);
    const DenseTensor3 B1 = ttm(ttm(A, U, Mode::one), V, Mode::two);
    const DenseTensor3 B2 = ttm(ttm(A, V, Mode::two), U, Mode::one);
    CHECK(max_abs_diff(B1, B2) < 1e-13 * frob_norm(B1));
}

TEST_CASE("ttm_multi equals sequential ttm and identity factors are neutral") {
    const DenseTensor3 A = random_dense(3, 4, 5, 21);
    std::mt19937_64 rng(22);
    const Eigen::MatrixXd U = random_gaussian(2, 3, rng);
    const Eigen::MatrixXd V = random_gaussian(6, 4, rng);
    const Eigen::MatrixXd W = random_gaussian(3, 5, rng);

    const Eigen::MatrixXd I1 = Eigen::MatrixXd::Identity(3, 3);
    const Eigen::MatrixXd I2 = Eigen::MatrixXd::Identity(4, 4);
    const Eigen::MatrixXd I3 = Eigen::MatrixXd::Identity(5, 5);
    CHECK(max_abs_diff(ttm_multi(A, &I1, &I2, &I3), A) < 1e-14);

    const DenseTensor3 chained = ttm(ttm(ttm(A, U, Mode::one), V, Mode::two), W, Mode::three);
    CHECK(max_abs_diff(ttm_multi(A, &U, &V, &W), chained) < 1e-12);

    // partial factor sets
    const DenseTensor3 two = ttm(ttm(A, V, Mode::two), W, Mode::three);
    CHECK(max_abs_diff(ttm_multi(A, nullptr, &V, &W), two) < 1e-12);
}

TEST_CASE("transposed ttm_multi matches the elementwise projected-core formula") {
    const DenseTensor3 A = random_dense(4, 4, 4, 23);
    std::mt19937_64 rng(24);
    const Eigen::MatrixXd U = random_orthonormal(4, 2, rng);
    const Eigen::MatrixXd V = random_orthonormal(4, 2, rng);
    const Eigen::MatrixXd W = random_orthonormal(4, 2, rng);
    const DenseTensor3 S = ttm_multi(A, &U, &V, &W, true);
    for (int a = 1; a <= 2; ++a)
        for (int b = 1; b <= 2; ++b)
            for (int c = 1; c <= 2; ++c) {
                double s = 0;
                for (int i = 1; i <= 4; ++i)
                    for (int j = 1; j <= 4; ++j)
                        for (int k = 1; k <= 4; ++k)
                            s += A(i, j, k) * U(i - 1, a - 1) * V(j - 1, b - 1) * W(k - 1, c - 1);
                CHECK(S(a, b, c) == doctest::Approx(s).epsilon(1e-12));
            }
}

TEST_CASE("tvv with unit vectors selects fibres") {
    const DenseTensor3 A = example_tensor();
    const Eigen::VectorXd f = tvv(A, Mode::one, Mode::two, unit(2, 0), unit(2, 0));
    CHECK(f(0) == 1.0);  // A(1,1,1)
    CHECK(f(1) == 5.0);  // A(1,1,2)

    const Eigen::VectorXd g = tvv(A, Mode::two, Mode::three, unit(2, 0), unit(2, 0));
    CHECK(g(0) == 1.0);
    CHECK(g(1) == 3.0);  // the fibre A(:,1,1)
}

TEST_CASE("tvv agrees with the triple-loop reference on random input") {
    const DenseTensor3 A = random_dense(5, 6, 7, 29);
    std::mt19937_64 rng(30);
    const Eigen::VectorXd u = random_gaussian(5, 1, rng).col(0);
    const Eigen::VectorXd v = random_gaussian(6, 1, rng).col(0);
    const Eigen::VectorXd w = random_gaussian(7, 1, rng).col(0);

    CHECK((tvv(A, Mode::one, Mode::three, u, w) - tvv_ref(A, Mode::one, Mode::three, u, w)).norm() <
          1e-12);
    CHECK((tvv(A, Mode::one, Mode::two, u, v) - tvv_ref(A, Mode::one, Mode::two, u, v)).norm() <
          1e-12);
    CHECK((tvv(A, Mode::two, Mode::three, v, w) - tvv_ref(A, Mode::two, Mode::three, v, w)).norm() <
          1e-12);
    // argument order follows the mode order
    CHECK((tvv(A, Mode::three, Mode::one, w, u) - tvv(A, Mode::one, Mode::three, u, w)).norm() ==
          0.0);
    CHECK_THROWS_AS(tvv(A, Mode::one, Mode::one, u, u), std::invalid_argument);
}

TEST_CASE("tvv consistency with full contractions") {
    const DenseTensor3 A = random_dense(4, 5, 6, 31);
    std::mt19937_64 rng(32);
    const Eigen::VectorXd u = random_gaussian(4, 1, rng).col(0);
    const Eigen::VectorXd v = random_gaussian(5, 1, rng).col(0);
    const Eigen::VectorXd w = random_gaussian(6, 1, rng).col(0);

    const double full = tvv3(A, u, v, w);
    CHECK(full == doctest::Approx(w.dot(tvv(A, Mode::one, Mode::two, u, v))).epsilon(1e-12));
    CHECK(full == doctest::Approx(u.dot(tvv(A, Mode::two, Mode::three, v, w))).epsilon(1e-12));
    CHECK(full == doctest::Approx(v.dot(tvv(A, Mode::one, Mode::three, u, w))).epsilon(1e-12));
}

TEST_CASE("inner product basics") {
    const DenseTensor3 A = example_tensor();
    CHECK(inner(A, DenseTensor3(2, 2, 2)) == 0.0);
    CHECK(inner(A, A) == 204.0);

    const DenseTensor3 B = random_dense(3, 3, 3, 33);
    const DenseTensor3 C = random_dense(3, 3, 3, 34);
    CHECK(inner(B, C) == doctest::Approx(inner(C, B)).epsilon(1e-14));
    CHECK(inner(B, C) == doctest::Approx(inner_ref(B, C)).epsilon(1e-12));
}

TEST_CASE("frob_norm basics and orthogonal invariance") {
    CHECK(frob_norm(DenseTensor3(4, 4, 4)) == 0.0);
    CHECK(frob_norm(example_tensor()) == doctest::Approx(std::sqrt(204.0)).epsilon(1e-15));

    const DenseTensor3 A = random_dense(5, 6, 4, 35);
    std::mt19937_64 rng(36);
    const Eigen::MatrixXd Q1 = random_orthonormal(5, 5, rng);
    const Eigen::MatrixXd Q2 = random_orthonormal(6, 6, rng);
    const Eigen::MatrixXd Q3 = random_orthonormal(4, 4, rng);
    const DenseTensor3 B = ttm_multi(A, &Q1, &Q2, &Q3);
    CHECK(frob_norm(B) == doctest::Approx(frob_norm(A)).epsilon(1e-12));
}

TEST_CASE("matricize is a bijection and 1x1x1 is scalar") {
    DenseTensor3 one(1, 1, 1);
    one(1, 1, 1) = 7.0;
    CHECK(matricize(one, Mode::one)(0, 0) == 7.0);

    const DenseTensor3 A = random_dense(3, 4, 5, 37);
    for (Mode m : {Mode::one, Mode::two, Mode::three}) {
        const DenseTensor3 back = dematricize(matricize(A, m), m, A.dims());
        CHECK(max_abs_diff(back, A) == 0.0);
    }
}

TEST_CASE("matricization of a multilinear product factors through Kronecker products") {
    const DenseTensor3 A = random_dense(3, 4, 5, 38);
    std::mt19937_64 rng(39);
    const Eigen::MatrixXd U = random_gaussian(2, 3, rng);
    const Eigen::MatrixXd V = random_gaussian(3, 4, rng);
    const Eigen::MatrixXd W = random_gaussian(4, 5, rng);
    const DenseTensor3 B = ttm_multi(A, &U, &V, &W);

    const double scale = frob_norm(B);
    CHECK((matricize(B, Mode::one) - U * matricize(A, Mode::one) * kron(V, W).transpose()).norm() <
          1e-12 * scale);
    CHECK((matricize(B, Mode::two) - V * matricize(A, Mode::two) * kron(U, W).transpose()).norm() <
          1e-12 * scale);
    CHECK((matricize(B, Mode::three) - W * matricize(A, Mode::three) * kron(U, V).transpose())
              .norm() < 1e-12 * scale);
}

TEST_CASE("contracted products reduce to matricization products") {
    const DenseTensor3 A = random_dense(3, 4, 5, 40);
    const DenseTensor3 B = random_dense(3, 4, 5, 41);

    // full contraction
    CHECK(inner(A, A) == doctest::Approx(contract_all_but(A, A, Mode::one).trace()).epsilon(1e-12));

    for (Mode m : {Mode::one, Mode::two, Mode::three}) {
        const Eigen::MatrixXd Am = matricize(A, m);
        CHECK((gram(A, m) - Am * Am.transpose()).norm() < 1e-12 * Am.squaredNorm());
    }

    const Eigen::MatrixXd C1 = contract_mode1(A, B);
    CHECK((C1 - matricize(A, Mode::one).transpose() * matricize(B, Mode::one)).norm() < 1e-12);

    const Eigen::MatrixXd D = contract_modes12(A, B);
    CHECK((D - matricize(A, Mode::three) * matricize(B, Mode::three).transpose()).norm() < 1e-12);
}

TEST_CASE("gram_matvec matches the explicit Gram matrix") {
    const SparseTensor3 A = random_sparse(10, 10, 10, 0.05, 42);
    const DenseTensor3 Ad = A.densify();
    std::mt19937_64 rng(43);
    for (Mode m : {Mode::one, Mode::two, Mode::three}) {
        const Eigen::VectorXd u = random_gaussian(10, 1, rng).col(0);
        const Eigen::VectorXd sparse_path = gram_matvec(A, m, u);
        const Eigen::VectorXd dense_path = gram_matvec(Ad, m, u);
        const Eigen::VectorXd explicit_path = gram(A, m) * u;
        CHECK((sparse_path - explicit_path).norm() < 1e-12 * std::max(1.0, explicit_path.norm()));
        CHECK((dense_path - explicit_path).norm() < 1e-12 * std::max(1.0, explicit_path.norm()));
    }

    CHECK(gram_matvec(A, Mode::one, Eigen::VectorXd::Zero(10)).norm() == 0.0);

    SparseTensor3 single(2, 2, 2, {{1, 1, 1, 2.0}});
    const Eigen::VectorXd y = gram_matvec(single, Mode::one, unit(2, 0));
    CHECK(y(0) == 4.0);
    CHECK(y(1) == 0.0);
}

TEST_CASE("sparse operations agree with their densified copies") {
    for (std::uint64_t seed : {7ull, 8ull, 9ull}) {
        const SparseTensor3 S = random_sparse(6, 5, 4, 0.2, seed);
        const DenseTensor3 D = S.densify();
        std::mt19937_64 rng(seed + 100);

        CHECK(frob_norm(S) == doctest::Approx(frob_norm(D)).epsilon(1e-13));
        CHECK(inner(S, S) == doctest::Approx(inner(D, D)).epsilon(1e-13));
        CHECK(inner(S, D) == doctest::Approx(inner(D, D)).epsilon(1e-13));

        const Eigen::VectorXd u = random_gaussian(6, 1, rng).col(0);
        const Eigen::VectorXd v = random_gaussian(5, 1, rng).col(0);
        const Eigen::VectorXd w = random_gaussian(4, 1, rng).col(0);
        CHECK((tvv(S, Mode::one, Mode::two, u, v) - tvv(D, Mode::one, Mode::two, u, v)).norm() <
              1e-13 * frob_norm(D));
        CHECK((tvv(S, Mode::two, Mode::three, v, w) - tvv(D, Mode::two, Mode::three, v, w)).norm() <
              1e-13 * frob_norm(D));
        CHECK(tvv3(S, u, v, w) == doctest::Approx(tvv3(D, u, v, w)).epsilon(1e-12));

        const Eigen::MatrixXd M = random_gaussian(3, 5, rng);
        CHECK(max_abs_diff(ttm(S, M, Mode::two), ttm(D, M, Mode::two)) < 1e-13 * frob_norm(D));

        for (Mode m : {Mode::one, Mode::two, Mode::three}) {
            CHECK((matricize(S, m) - matricize(D, m)).norm() == 0.0);
            CHECK((gram(S, m) - gram(D, m)).norm() < 1e-12 * frob_norm(D) * frob_norm(D));
            CHECK((tv(S, m, m == Mode::one ? u : (m == Mode::two ? v : w)) -
                   tv(D, m, m == Mode::one ? u : (m == Mode::two ? v : w)))
                      .norm() < 1e-13 * frob_norm(D));
        }
        CHECK((contract_mode1(S, S) - contract_mode1(D, D)).norm() < 1e-12);
        CHECK((contract_modes12(S, S) - contract_modes12(D, D)).norm() < 1e-12);
    }
}

TEST_CASE("sparse construction invariants") {
    // duplicates are summed by default, rejected in strict mode
    std::vector<SparseEntry> dup = {{1, 1, 1, 2.0}, {1, 1, 1, 3.0}, {2, 2, 2, 1.0}};
    const SparseTensor3 summed(2, 2, 2, dup);
    CHECK(summed.nnz() == 2);
    CHECK(summed.densify()(1, 1, 1) == 5.0);
    CHECK_THROWS_AS(SparseTensor3(2, 2, 2, dup, SparseTensor3::DuplicatePolicy::reject),
                    std::invalid_argument);

    // exact cancellation is not stored
    std::vector<SparseEntry> cancel = {{1, 1, 1, 2.0}, {1, 1, 1, -2.0}};
    CHECK(SparseTensor3(2, 2, 2, cancel).nnz() == 0);

    // out-of-bounds entries rejected
    CHECK_THROWS_AS(SparseTensor3(2, 2, 2, {{3, 1, 1, 1.0}}), std::invalid_argument);

    // slices enumerate exactly the entries, sorted by (j,i)
    const SparseTensor3 S = random_sparse(5, 5, 5, 0.3, 77);
    std::int64_t total = 0;
    for (int k = 1; k <= 5; ++k) {
        auto es = S.slice(k);
        total += static_cast<std::int64_t>(es.size());
        for (std::size_t x = 0; x + 1 < es.size(); ++x) {
            CHECK(es[x].k == k);
            const bool ordered =
                es[x].j < es[x + 1].j || (es[x].j == es[x + 1].j && es[x].i < es[x + 1].i);
            CHECK(ordered);
        }
    }
    CHECK(total == S.nnz());
}

TEST_CASE("mode-3 Gram is diagonal when every tube has a single nonzero") {
    std::vector<SparseEntry> entries;
    std::mt19937_64 rng(55);
    std::uniform_int_distribution<int> dk(1, 6);
    for (int i = 1; i <= 5; ++i)
        for (int j = 1; j <= 4; ++j) entries.push_back({i, j, dk(rng), 1.0 + i + j});
    const SparseTensor3 A(5, 4, 6, std::move(entries));
    const Eigen::MatrixXd G = gram(A, Mode::three);
    const Eigen::MatrixXd offdiag = G - Eigen::MatrixXd(G.diagonal().asDiagonal());
    CHECK(offdiag.norm() == 0.0);
}
