#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "test_support.hpp"
#include "tkrylov/bench/experiment.hpp"
#include "tkrylov/bench/generators.hpp"
#include "tkrylov/tensor_ops.hpp"
#include "tkrylov/tucker.hpp"

using namespace tkrylov;
using namespace tkrylov::bench;

TEST_CASE("low-rank generator: dimensions, rank and determinism") {
    const auto t = gen_low_rank({50, 60, 40}, {10, 10, 10}, 42);
    CHECK(t.tensor.dims() == std::array<int, 3>{50, 60, 40});

    // exactly 10 significant eigenvalues in the mode-1 Gram
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram(t.tensor, Mode::one));
    const double top = eig.eigenvalues().maxCoeff();
    int significant = 0;
    for (int i = 0; i < 50; ++i)
        if (eig.eigenvalues()(i) > 1e-10 * top) ++significant;
    CHECK(significant == 10);

    // bit-identical regeneration
    const auto t2 = gen_low_rank({50, 60, 40}, {10, 10, 10}, 42);
    CHECK(testsupport::max_abs_diff(t.tensor, t2.tensor) == 0.0);
    CHECK((t.X - t2.X).norm() == 0.0);

    // ranks equal to dims gives a generic full-rank tensor
    const auto full = gen_low_rank({6, 6, 6}, {6, 6, 6}, 43);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ef(gram(full.tensor, Mode::one));
    CHECK(ef.eigenvalues().minCoeff() > 1e-10 * ef.eigenvalues().maxCoeff());

    CHECK_THROWS_AS(gen_low_rank({5, 5, 5}, {6, 5, 5}, 1), std::invalid_argument);
}

TEST_CASE("sparse generator: count, tube structure, feasibility") {
    const SparseTensor3 empty = gen_sparse({5, 5, 5}, 0, 1);
    CHECK(empty.nnz() == 0);
    CHECK(frob_norm(empty) == 0.0);

    const SparseTensor3 A = gen_sparse({20, 20, 20}, 500, 2);
    CHECK(A.nnz() == 500);

    const SparseTensor3 tube = gen_sparse({10, 10, 10}, 60, 3, ValueDistribution::gaussian, true);
    CHECK(tube.nnz() == 60);
    const Eigen::MatrixXd G = gram(tube, Mode::three);
    CHECK((G - Eigen::MatrixXd(G.diagonal().asDiagonal())).norm() == 0.0);

    CHECK_THROWS_AS(gen_sparse({2, 2, 2}, 9, 4), std::invalid_argument);
    // single-per-tube capacity is l*m
    CHECK_THROWS_AS(gen_sparse({2, 2, 8}, 5, 5, ValueDistribution::gaussian, true),
                    std::invalid_argument);
}

TEST_CASE("spec files parse and env overrides apply") {
    std::istringstream in(
        "# demo spec\n"
        "experiment_id = demo\n"
        "source = low-rank\n"
        "dims = 20 22 24\n"
        "gen_ranks = 4 4 4\n"
        "methods = minimal,hosvd\n"
        "rank_schedule = 2:2:6\n"
        "reps = 2\n"
        "seed = 9\n"
        "start_policy = fibre-mean\n");
    ExperimentSpec spec = parse_spec(in);
    CHECK(spec.experiment_id == "demo");
    CHECK(spec.dims == std::array<int, 3>{20, 22, 24});
    CHECK(spec.methods.size() == 2);
    CHECK(spec.rank_schedule == std::vector<int>{2, 4, 6});
    CHECK(spec.reps == 2);
    CHECK(spec.start_policy == StartPolicy::fibre_mean);

    setenv("TKRYLOV_SEED", "77", 1);
    setenv("TKRYLOV_RANK_SCHEDULE", "3,5", 1);
    apply_env_overrides(spec);
    unsetenv("TKRYLOV_SEED");
    unsetenv("TKRYLOV_RANK_SCHEDULE");
    CHECK(spec.seed == 77);
    CHECK(spec.rank_schedule == std::vector<int>{3, 5});

    std::istringstream bad("unknown_key = 1\n");
    CHECK_THROWS_AS(parse_spec(bad), std::invalid_argument);
    std::istringstream bad2("dims 1 2 3\n");
    CHECK_THROWS_AS(parse_spec(bad2), std::invalid_argument);
}

TEST_CASE("file-supplied start vectors are read and normalized") {
    std::istringstream in(
        "3  1 0 0\n"
        "2  3 4\n"
        "2  0 2\n");
    const StartVectors s = read_start_vectors(in);
    CHECK(s.u1.size() == 3);
    CHECK(s.v1.size() == 2);
    CHECK(s.v1(0) == doctest::Approx(0.6));
    CHECK(s.v1(1) == doctest::Approx(0.8));
    REQUIRE(s.w1.has_value());
    CHECK((*s.w1)(1) == 1.0);
    CHECK(s.provenance == StartVectors::Provenance::user);

    std::istringstream missing("3 1 0 0\n2 1\n");
    CHECK_THROWS_AS(read_start_vectors(missing), std::runtime_error);
    std::istringstream two_only("2 1 0\n2 0 1\n");
    const StartVectors s2 = read_start_vectors(two_only);
    CHECK_FALSE(s2.w1.has_value());
}

TEST_CASE("experiment on an exact-rank tensor reports zero error") {
    ExperimentSpec spec;
    spec.experiment_id = "exact";
    spec.source = "low-rank";
    spec.dims = {18, 18, 18};
    spec.gen_ranks = {4, 4, 4};
    spec.methods = {Method::minimal};
    spec.rank_schedule = {4};
    spec.reps = 1;
    spec.seed = 11;
    spec.start_policy = StartPolicy::fibre_mean;

    const auto rows = run_experiment(spec);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].error.empty());
    CHECK(rows[0].rel_error < 1e-8);
    REQUIRE(rows[0].max_principal_angle.has_value());
    CHECK(*rows[0].max_principal_angle < 1e-8);
    CHECK(rows[0].breakdowns == 0);
}

TEST_CASE("experiment CSV is reproducible excluding wall time") {
    ExperimentSpec spec;
    spec.experiment_id = "repro";
    spec.source = "sparse";
    spec.dims = {15, 15, 15};
    spec.nnz = 120;
    spec.methods = {Method::minimal, Method::contracted};
    spec.rank_schedule = {3, 5};
    spec.reps = 2;
    spec.seed = 21;

    auto strip_wall = [](const std::string& csv) {
        std::istringstream in(csv);
        std::ostringstream out;
        std::string line;
        while (std::getline(in, line)) {
            // wall_ms is the second-to-last column
            const auto last = line.rfind(',');
            const auto prev = line.rfind(',', last - 1);
            out << line.substr(0, prev) << line.substr(last) << "\n";
        }
        return out.str();
    };

    const std::string a = to_csv(run_experiment(spec));
    const std::string b = to_csv(run_experiment(spec));
    CHECK(strip_wall(a) == strip_wall(b));

    // row count and header shape
    std::istringstream in(a);
    std::string header;
    std::getline(in, header);
    CHECK(header == std::string(kCsvHeader));
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 2 * 2 * 2);
}

TEST_CASE("error column stays in range and core norms grow along the schedule") {
    ExperimentSpec spec;
    spec.experiment_id = "growth";
    spec.source = "low-rank";
    spec.dims = {16, 16, 16};
    spec.gen_ranks = {8, 8, 8};
    spec.methods = {Method::minimal};
    spec.rank_schedule = {2, 4, 6, 8};
    spec.reps = 1;
    spec.seed = 31;

    const auto rows = run_experiment(spec);
    REQUIRE(rows.size() == 4);
    double prev_core = 0.0;
    for (const auto& r : rows) {
        CHECK(r.error.empty());
        CHECK(r.rel_error >= 0.0);
        CHECK(r.rel_error <= 1.0);
        CHECK(r.core_norm >= prev_core - 1e-12);
        prev_core = r.core_norm;
    }
}

TEST_CASE("incompatible configurations are reported per row and the run continues") {
    ExperimentSpec spec;
    spec.experiment_id = "partial";
    spec.source = "low-rank";
    spec.dims = {10, 10, 10};
    spec.gen_ranks = {3, 3, 3};
    spec.methods = {Method::minimal};
    spec.rank_schedule = {4, 40};  // 40 exceeds the dimensions
    spec.reps = 1;
    spec.seed = 41;

    const auto rows = run_experiment(spec);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].error.empty());
    CHECK_FALSE(rows[1].error.empty());

    std::ostringstream csv;
    write_csv(csv, rows);
    CHECK(csv.str().find("error: ") != std::string::npos);
}

TEST_CASE("counter column reflects the recursion-plus-core accounting") {
    ExperimentSpec spec;
    spec.experiment_id = "counters";
    spec.source = "low-rank";
    spec.dims = {25, 25, 25};
    spec.gen_ranks = {12, 12, 12};
    spec.methods = {Method::minimal};
    spec.rank_schedule = {10};
    spec.reps = 1;
    spec.seed = 51;

    const auto rows = run_experiment(spec);
    REQUIRE(rows.size() == 1);
    const int k = 10;
    CHECK(rows[0].counter.ops.tvv_equivalents() == 3 * (k - 1) + 1 + k * k);
    // k^2 pairwise contractions finished by k dots each
    CHECK(rows[0].counter.ops.inner_products == k * k * k);
    CHECK(rows[0].counter.wall_ms > 0.0);
}
