#include <doctest.h>

#include <random>
#include <sstream>

#include "test_support.hpp"
#include "tkrylov/bench/generators.hpp"
#include "tkrylov/coordinate_io.hpp"
#include "tkrylov/tensor_ops.hpp"

using namespace tkrylov;

TEST_CASE("coordinate parsing of a small fixture") {
    std::istringstream in(
        "# tiny fixture\n"
        "\n"
        "2 2 2 1\n"
        "1 1 1 2.0\n");
    const SparseTensor3 A = read_coordinate(in);
    CHECK(A.dims() == std::array<int, 3>{2, 2, 2});
    CHECK(A.nnz() == 1);
    CHECK(frob_norm(A) == 2.0);
}

TEST_CASE("out-of-bounds index reports the offending line") {
    std::istringstream in(
        "2 2 2 1\n"
        "3 1 1 1.0\n");
    try {
        read_coordinate(in);
        FAIL("expected parse error");
    } catch (const std::runtime_error& err) {
        const std::string what = err.what();
        CHECK(what.find("line 2") != std::string::npos);
        CHECK(what.find("(3,1,1)") != std::string::npos);
    }
}

TEST_CASE("malformed inputs are rejected with diagnostics") {
    auto expect_error = [](const char* text, const char* needle) {
        std::istringstream in(text);
        try {
            read_coordinate(in);
            FAIL_CHECK("expected parse error for: " << text);
        } catch (const std::runtime_error& err) {
            CHECK(std::string(err.what()).find(needle) != std::string::npos);
        }
    };
    expect_error("", "missing header");
    expect_error("2 2\n", "header");
    expect_error("2 2 2 1 9\n", "unexpected token");
    expect_error("2 2 2 9\n1 1 1 1.0\n", "nnz exceeds");
    expect_error("2 2 2 2\n1 1 1 1.0\n", "file ended");
    expect_error("2 2 2 1\n1 1 oops 1.0\n", "expected \"i j k value\"");
    expect_error("-2 2 2 0\n", "positive");
}

TEST_CASE("duplicate policy is honored at parse time") {
    const char* text =
        "2 2 2 2\n"
        "1 1 1 1.5\n"
        "1 1 1 2.5\n";
    std::istringstream summing(text);
    const SparseTensor3 A = read_coordinate(summing);
    CHECK(A.nnz() == 1);
    CHECK(A.densify()(1, 1, 1) == 4.0);

    std::istringstream strict(text);
    CHECK_THROWS_AS(read_coordinate(strict, SparseTensor3::DuplicatePolicy::reject),
                    std::runtime_error);
}

TEST_CASE("write then read round-trips bit-exactly") {
    const SparseTensor3 A = bench::gen_sparse({7, 6, 5}, 40, 321);

    std::ostringstream first;
    write_coordinate(first, A);
    std::istringstream back(first.str());
    const SparseTensor3 B = read_coordinate(back);

    CHECK(B.nnz() == A.nnz());
    for (std::size_t i = 0; i < A.entries().size(); ++i) {
        CHECK(A.entries()[i].i == B.entries()[i].i);
        CHECK(A.entries()[i].j == B.entries()[i].j);
        CHECK(A.entries()[i].k == B.entries()[i].k);
        CHECK(A.entries()[i].value == B.entries()[i].value);  // exact
    }

    std::ostringstream second;
    write_coordinate(second, B);
    CHECK(first.str() == second.str());  // byte-identical
}

TEST_CASE("writer emits entries sorted by (k,j,i)") {
    const SparseTensor3 A(3, 3, 3, {{3, 3, 3, 1.0}, {1, 1, 1, 2.0}, {2, 1, 1, 3.0}});
    std::ostringstream out;
    write_coordinate(out, A);
    CHECK(out.str() ==
          "3 3 3 3\n"
          "1 1 1 2\n"
          "2 1 1 3\n"
          "3 3 3 1\n");
}

TEST_CASE("dense tensors write through the same format") {
    const DenseTensor3 A = testsupport::example_tensor();
    std::ostringstream out;
    write_coordinate(out, A);
    std::istringstream in(out.str());
    const SparseTensor3 B = read_coordinate(in);
    CHECK(B.nnz() == 8);
    CHECK(testsupport::max_abs_diff(B.densify(), A) == 0.0);
}
