#include <doctest.h>

#include <random>

#include "test_support.hpp"
#include "tkrylov/bench/generators.hpp"
#include "tkrylov/recursions.hpp"
#include "tkrylov/subspace.hpp"
#include "tkrylov/tensor_ops.hpp"
#include "tkrylov/tucker.hpp"

using namespace tkrylov;
using testsupport::max_abs_diff;
using testsupport::random_dense;

TEST_CASE("core projection with identity factors returns the tensor") {
    const DenseTensor3 A = random_dense(4, 5, 6, 200);
    const Eigen::MatrixXd I1 = Eigen::MatrixXd::Identity(4, 4);
    const Eigen::MatrixXd I2 = Eigen::MatrixXd::Identity(5, 5);
    const Eigen::MatrixXd I3 = Eigen::MatrixXd::Identity(6, 6);
    CHECK(max_abs_diff(core_project(A, I1, I2, I3), A) < 1e-14);
}

TEST_CASE("core projection inverts an exact orthonormal representation") {
    const auto t = bench::gen_low_rank({12, 13, 14}, {3, 4, 5}, 201);
    const DenseTensor3 C = core_project(t.tensor, t.X, t.Y, t.Z);
    CHECK(max_abs_diff(C, t.core) < 1e-11);
}

TEST_CASE("core projection rejects non-orthonormal factors") {
    const DenseTensor3 A = random_dense(5, 5, 5, 202);
    std::mt19937_64 rng(203);
    Eigen::MatrixXd U = random_orthonormal(5, 2, rng);
    Eigen::MatrixXd V = random_orthonormal(5, 2, rng);
    Eigen::MatrixXd W = random_orthonormal(5, 2, rng);
    Eigen::MatrixXd bad = U;
    bad.col(1) = bad.col(0);
    CHECK_THROWS_AS(core_project(A, bad, V, W), std::invalid_argument);
}

TEST_CASE("projected core beats random perturbed cores") {
    const DenseTensor3 A = random_dense(6, 6, 6, 204);
    std::mt19937_64 rng(205);
    const Eigen::MatrixXd U = random_orthonormal(6, 2, rng);
    const Eigen::MatrixXd V = random_orthonormal(6, 2, rng);
    const Eigen::MatrixXd W = random_orthonormal(6, 2, rng);
    const DenseTensor3 C = core_project(A, U, V, W);

    auto residual = [&](const DenseTensor3& core) {
        const DenseTensor3 approx = ttm_multi(core, &U, &V, &W);
        double s = 0;
        for (int i = 1; i <= 6; ++i)
            for (int j = 1; j <= 6; ++j)
                for (int k = 1; k <= 6; ++k) {
                    const double d = A(i, j, k) - approx(i, j, k);
                    s += d * d;
                }
        return std::sqrt(s);
    };

    const double best = residual(C);
    std::normal_distribution<double> noise(0.0, 0.05);
    for (int trial = 0; trial < 100; ++trial) {
        DenseTensor3 C2 = C;
        for (double& x : C2.data()) x += noise(rng);
        CHECK(residual(C2) > best);
    }
}

TEST_CASE("approx_error matches dense reconstruction and the norm identity") {
    const DenseTensor3 A = random_dense(10, 10, 10, 206);
    std::mt19937_64 rng(207);
    const Eigen::MatrixXd U = random_orthonormal(10, 3, rng);
    const Eigen::MatrixXd V = random_orthonormal(10, 3, rng);
    const Eigen::MatrixXd W = random_orthonormal(10, 3, rng);
    const DenseTensor3 C = core_project(A, U, V, W);

    const DenseTensor3 approx = ttm_multi(C, &U, &V, &W);
    double s = 0;
    for (int i = 1; i <= 10; ++i)
        for (int j = 1; j <= 10; ++j)
            for (int k = 1; k <= 10; ++k) {
                const double d = A(i, j, k) - approx(i, j, k);
                s += d * d;
            }
    const double direct = std::sqrt(s);
    const double via_norms = approx_error(A, C);
    CHECK(via_norms == doctest::Approx(direct).epsilon(1e-10));

    // error^2 + core^2 = tensor^2
    const double an = frob_norm(A), cn = frob_norm(C);
    CHECK(via_norms * via_norms + cn * cn == doctest::Approx(an * an).epsilon(1e-10));
}

TEST_CASE("approx_error edge cases") {
    const DenseTensor3 A = random_dense(5, 5, 5, 208);
    std::mt19937_64 rng(209);

    // square orthogonal factors: zero error
    const Eigen::MatrixXd Q1 = random_orthonormal(5, 5, rng);
    const Eigen::MatrixXd Q2 = random_orthonormal(5, 5, rng);
    const Eigen::MatrixXd Q3 = random_orthonormal(5, 5, rng);
    const DenseTensor3 C = core_project(A, Q1, Q2, Q3);
    CHECK(approx_error(A, C) < 1e-6);  // sqrt cancellation floor of the norm identity

    // zero-rank factors: error equals the tensor norm
    const Eigen::MatrixXd E(5, 0);
    const DenseTensor3 empty_core = core_project(A, E, E, E);
    CHECK(approx_error(A, empty_core) == doctest::Approx(frob_norm(A)));

    // violating the projection bound is an error
    DenseTensor3 big(2, 2, 2);
    big(1, 1, 1) = 1e6;
    CHECK_THROWS_AS(approx_error(A, big), std::invalid_argument);
}

TEST_CASE("truncated HOSVD reproduces exact low rank and the diagonal example") {
    const auto t = bench::gen_low_rank({14, 15, 16}, {3, 4, 5}, 210);
    const TuckerDecomp d = truncated_hosvd(t.tensor, {3, 4, 5});
    CHECK(approx_error(t.tensor, d.core) < 1e-7 * frob_norm(t.tensor));
    CHECK(max_principal_angle(d.U, t.X) < 1e-8);

    // diagonal 3x3x3 with entries 3,2,1: rank-(1,1,1) keeps the 3 component
    DenseTensor3 D(3, 3, 3);
    for (int i = 1; i <= 3; ++i) D(i, i, i) = 4.0 - i;
    const TuckerDecomp d1 = truncated_hosvd(D, {1, 1, 1});
    CHECK(frob_norm(d1.core) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(approx_error(D, d1.core) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
}

TEST_CASE("full HOSVD core is all-orthogonal") {
    const DenseTensor3 A = random_dense(6, 7, 8, 211);
    const TuckerDecomp d = truncated_hosvd(A, {6, 7, 8});
    const DenseTensor3& S = d.core;
    for (Mode m : {Mode::one, Mode::two, Mode::three}) {
        const Eigen::MatrixXd G = gram(S, m);
        const Eigen::MatrixXd offdiag = G - Eigen::MatrixXd(G.diagonal().asDiagonal());
        CHECK(offdiag.cwiseAbs().maxCoeff() < 1e-9 * G.diagonal().maxCoeff());
        // eigenvalues come out descending
        for (int i = 0; i + 1 < G.rows(); ++i) CHECK(G(i, i) >= G(i + 1, i + 1) - 1e-9);
    }
}

TEST_CASE("truncated HOSVD error is non-increasing in each rank component") {
    const DenseTensor3 A = random_dense(8, 8, 8, 212);
    double prev = frob_norm(A);
    for (int r = 1; r <= 8; ++r) {
        const TuckerDecomp d = truncated_hosvd(A, {r, r, r});
        const double err = approx_error(A, d.core);
        CHECK(err <= prev * (1 + 1e-12));
        prev = err;
    }
    CHECK(prev < 1e-9);  // full rank is exact
}

TEST_CASE("hosvd_via_krylov matches truncated HOSVD on exact-rank input") {
    const auto t = bench::gen_low_rank({40, 40, 40}, {6, 6, 6}, 213);
    const TuckerDecomp via_krylov = hosvd_via_krylov(t.tensor, {6, 6, 6});
    const TuckerDecomp direct = truncated_hosvd(t.tensor, {6, 6, 6});

    CHECK(via_krylov.rel_error < 1e-7);
    CHECK(max_principal_angle(via_krylov.U, direct.U) < 1e-8);
    CHECK(max_principal_angle(via_krylov.V, direct.V) < 1e-8);
    CHECK(max_principal_angle(via_krylov.W, direct.W) < 1e-8);
    CHECK(frob_norm(via_krylov.core) ==
          doctest::Approx(frob_norm(direct.core)).epsilon(1e-8));
}

TEST_CASE("hosvd_via_krylov on a full-rank tiny tensor equals the full HOSVD") {
    const DenseTensor3 A = random_dense(2, 2, 2, 214);
    const TuckerDecomp a = hosvd_via_krylov(A, {2, 2, 2});
    const TuckerDecomp b = truncated_hosvd(A, {2, 2, 2});
    CHECK(a.rel_error < 1e-10);
    CHECK(max_principal_angle(a.U, b.U) < 1e-8);
    // reconstructions agree
    const DenseTensor3 ra = ttm_multi(a.core, &a.U, &a.V, &a.W);
    const DenseTensor3 rb = ttm_multi(b.core, &b.U, &b.V, &b.W);
    CHECK(max_abs_diff(ra, rb) < 1e-10);
    CHECK(max_abs_diff(ra, A) < 1e-10);
}

TEST_CASE("best rank-(1,1,1) of an exactly rank-1 tensor") {
    std::mt19937_64 rng(215);
    const Eigen::VectorXd x = random_unit_vector(5, rng);
    const Eigen::VectorXd y = random_unit_vector(6, rng);
    const Eigen::VectorXd z = random_unit_vector(7, rng);
    DenseTensor3 C(5, 6, 7);
    for (int i = 1; i <= 5; ++i)
        for (int j = 1; j <= 6; ++j)
            for (int k = 1; k <= 7; ++k) C(i, j, k) = 2.5 * x(i - 1) * y(j - 1) * z(k - 1);

    const Rank1Triple r = best_rank111(C);
    CHECK(r.sigma == doctest::Approx(2.5).epsilon(1e-10));
    CHECK(std::abs(r.theta.dot(x)) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(r.eta.dot(y)) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(r.omega.dot(z)) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.sweeps <= 2);
}

TEST_CASE("best rank-(1,1,1) matches a multi-restart search on a small tensor") {
    const DenseTensor3 C = random_dense(3, 3, 3, 216);
    const Rank1Triple r = best_rank111(C);

    // brute force: many random restarts of the same alternating map
    std::mt19937_64 rng(217);
    double best = 0;
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::VectorXd th = random_unit_vector(3, rng);
        Eigen::VectorXd et = random_unit_vector(3, rng);
        Eigen::VectorXd om = random_unit_vector(3, rng);
        for (int it = 0; it < 200; ++it) {
            th = tvv(C, Mode::two, Mode::three, et, om).normalized();
            et = tvv(C, Mode::one, Mode::three, th, om).normalized();
            om = tvv(C, Mode::one, Mode::two, th, et).normalized();
        }
        best = std::max(best, tvv3(C, th, et, om));
    }
    CHECK(r.sigma >= best - 1e-6);
    CHECK(r.sigma <= frob_norm(C) + 1e-12);
    CHECK(r.sigma >= 0.0);
    CHECK_THROWS_AS(best_rank111(DenseTensor3(2, 2, 2)), std::invalid_argument);
}

TEST_CASE("growing any basis never shrinks the captured core norm") {
    const DenseTensor3 A = random_dense(9, 9, 9, 219);
    std::mt19937_64 rng(220);
    Eigen::MatrixXd U = random_orthonormal(9, 2, rng);
    Eigen::MatrixXd V = random_orthonormal(9, 2, rng);
    Eigen::MatrixXd W = random_orthonormal(9, 2, rng);

    double prev = frob_norm(core_project(A, U, V, W));
    for (int round = 0; round < 12; ++round) {
        Eigen::MatrixXd* target = round % 3 == 0 ? &U : (round % 3 == 1 ? &V : &W);
        OrthoBasis b = OrthoBasis::from_columns(Mode::one, *target);
        REQUIRE(b.append_random_orthogonal(rng));
        *target = b.matrix();
        const double grown = frob_norm(core_project(A, U, V, W));
        CHECK(grown >= prev - 1e-12);
        prev = grown;
    }
}

TEST_CASE("sparse tensors go through the same Tucker layer") {
    const SparseTensor3 S = bench::gen_sparse({25, 25, 25}, 300, 218);
    const DenseTensor3 D = S.densify();
    const TuckerDecomp ds = truncated_hosvd(S, {4, 4, 4});
    const TuckerDecomp dd = truncated_hosvd(D, {4, 4, 4});
    CHECK(frob_norm(ds.core) == doctest::Approx(frob_norm(dd.core)).epsilon(1e-10));
    CHECK(ds.rel_error == doctest::Approx(dd.rel_error).epsilon(1e-10));

    Counters c;
    const DenseTensor3 cs = core_project(S, ds.U, ds.V, ds.W, &c);
    const DenseTensor3 cd = core_project(D, ds.U, ds.V, ds.W, &c);
    CHECK(max_abs_diff(cs, cd) < 1e-12);
    CHECK(c.tvv == 2 * 4 * 4);  // p*q equivalents per call
}
