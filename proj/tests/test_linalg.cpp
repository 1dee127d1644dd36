#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "lanczos/linalg.hpp"
#include "lanczos/problems.hpp"
#include "support.hpp"

using namespace lanczos;
using Catch::Approx;

TEST_CASE("dot examples", "[linalg]") {
  CHECK(dot(Vector{1, 0}, Vector{0, 1}) == 0.0);
  CHECK(dot(Vector{2, 3}, Vector{2, 3}) == 13.0);
  CHECK(dot(Vector{1, 1, 1}, Vector{1, 2, 3}) == 6.0);
  CHECK_THROWS_AS(dot(Vector{1, 2}, Vector{1, 2, 3}), dimension_error);
}

TEST_CASE("norm2 examples", "[linalg]") {
  CHECK(norm2(Vector{0, 0, 0}) == 0.0);
  CHECK(norm2(Vector{3, 4}) == 5.0);
  CHECK(norm2(Vector{1, 1, 1, 1}) == 2.0);
}

TEST_CASE("vectors reject non-finite entries", "[linalg]") {
  CHECK_THROWS_AS(Vector({1.0, std::numeric_limits<double>::quiet_NaN()}), numerical_error);
  CHECK_THROWS_AS(Vector({std::numeric_limits<double>::infinity()}), numerical_error);
}

TEST_CASE("matvec examples", "[linalg]") {
  CHECK(matvec(SparseMatrix::identity(3), Vector{1, 2, 3}) == Vector{1, 2, 3});
  const std::vector<double> d{2, 3};
  CHECK(matvec(SparseMatrix::diagonal(d), Vector{2, 3}) == Vector{4, 9});
  CHECK_THROWS_AS(matvec(SparseMatrix::identity(3), Vector{1, 2}), dimension_error);
}

TEST_CASE("matvec on Baheux gives stencil row sums", "[linalg]") {
  const auto inst = gen_baheux({20, 0.0});
  const Vector sums = matvec(inst.A, Vector::constant(20, 1.0));
  for (std::size_t i = 0; i < 20; ++i) {
    const std::size_t pos = i % 10;
    double expect = 4.0;
    if (pos > 0) expect -= 1.0;
    if (pos < 9) expect -= 1.0;
    if (i >= 10) expect -= 1.0;
    if (i + 10 < 20) expect -= 1.0;
    CHECK(sums[i] == expect);
  }
}

TEST_CASE("matvec_t examples", "[linalg]") {
  CHECK(matvec_t(SparseMatrix::identity(3), Vector{1, 2, 3}) == Vector{1, 2, 3});
  const auto shift = SparseMatrix::from_dense(2, 2, std::vector<double>{0, 1, 0, 0});
  CHECK(matvec_t(shift, Vector{1, 0}) == Vector{0, 1});

  const auto inst = gen_baheux({20, 0.0});
  const Vector v = testing::random_vector(20, 7);
  CHECK(matvec_t(inst.A, v) == matvec(inst.A, v));
}

TEST_CASE("combine examples", "[linalg]") {
  const Vector a{1, 2};
  CHECK(combine({1.0}, {&a}) == Vector{1, 2});
  const Vector f{5, 5};
  CHECK(combine({1.0, -1.0}, {&f, &f}) == Vector{0, 0});
  const Vector e1{1, 0}, e2{0, 1};
  CHECK(combine({2.0, 3.0}, {&e1, &e2}) == Vector{2, 3});
  CHECK_THROWS_AS(combine({1.0, 2.0}, {&a}), dimension_error);
  const Vector c{1, 2, 3};
  CHECK_THROWS_AS(combine({1.0, 1.0}, {&a, &c}), dimension_error);
}

TEST_CASE("adjoint identity holds on random operators", "[linalg][property]") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const std::size_t n = 5 + seed;
    const auto M = testing::random_matrix(n, seed);
    const Vector u = testing::random_vector(n, 100 + seed);
    const Vector v = testing::random_vector(n, 200 + seed);
    const double lhs = dot(matvec(M, u), v);
    const double rhs = dot(u, matvec_t(M, v));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("matvec agrees with a dense reference", "[linalg][property]") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto M = testing::random_matrix(50, seed);
    const Vector u = testing::random_vector(50, seed + 9);
    const Eigen::VectorXd ref = testing::to_eigen(M) * testing::to_eigen(u);
    const Vector got = matvec(M, u);
    for (std::size_t i = 0; i < 50; ++i) {
      CHECK(std::abs(got[i] - ref(static_cast<Eigen::Index>(i))) <=
            1e-13 * (1.0 + std::abs(ref(static_cast<Eigen::Index>(i)))));
    }
  }
}

TEST_CASE("triplet assembly sums duplicates and validates", "[linalg]") {
  const auto M = SparseMatrix::from_triplets(2, 2, {{1, 0, 1.0}, {0, 1, 2.0}, {1, 0, 3.0}});
  CHECK(M.at(1, 0) == 4.0);
  CHECK(M.at(0, 1) == 2.0);
  CHECK(M.at(0, 0) == 0.0);
  CHECK(M.nonzeros() == 2);
  CHECK_THROWS_AS(SparseMatrix::from_triplets(2, 2, {{2, 0, 1.0}}), dimension_error);
  CHECK_THROWS(SparseMatrix::from_triplets(2, 2, {{0, 0, std::nan("")}}));
  CHECK_THROWS_AS(require_square(SparseMatrix::from_dense(1, 2, std::vector<double>{1, 2})),
                  dimension_error);
}

TEST_CASE("residual and norms", "[linalg]") {
  const std::vector<double> d{2, 3};
  const auto A = SparseMatrix::diagonal(d);
  CHECK(residual(A, Vector{2, 3}, Vector{1, 1}) == Vector{0, 0});
  CHECK(norm_inf(Vector{-4, 2}) == 4.0);
  CHECK(gen_baheux({20, 0.2}).A.inf_norm() == Approx(4 + 0.8 + 1.2 + 1));
}
