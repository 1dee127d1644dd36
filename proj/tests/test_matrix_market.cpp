#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lanczos/matrix_market.hpp"

using namespace lanczos;

namespace {

SparseMatrix parse(const std::string& text) {
  std::istringstream in(text);
  return parse_matrix_market(in);
}

}  // namespace

TEST_CASE("3x3 identity from file", "[mm]") {
  const auto path = std::filesystem::temp_directory_path() / "lanczos_identity.mtx";
  {
    std::ofstream out(path);
    out << "%%MatrixMarket matrix coordinate real general\n% comment\n3 3 3\n1 1 1\n2 2 1\n3 3 1.0\n";
  }
  const auto inst = read_matrix_market(path.string());
  CHECK(inst.A == SparseMatrix::identity(3));
  CHECK(inst.b == Vector{1, 1, 1});
  REQUIRE(inst.x_true.has_value());
  CHECK(*inst.x_true == Vector{1, 1, 1});

  const auto rhs = std::filesystem::temp_directory_path() / "lanczos_identity.rhs";
  {
    std::ofstream out(rhs);
    out << "1.5\n-2\n3e-1\n";
  }
  const auto with_rhs = read_matrix_market(path.string(), rhs.string());
  CHECK(with_rhs.b == Vector{1.5, -2, 0.3});
  CHECK_FALSE(with_rhs.x_true.has_value());
  std::filesystem::remove(path);
  std::filesystem::remove(rhs);
}

TEST_CASE("symmetric storage round-trips Baheux(20, 0)", "[mm]") {
  const auto inst = gen_baheux({20, 0.0});
  std::stringstream buf;
  write_matrix_market(buf, inst.A, true);
  CHECK(buf.str().find("symmetric") != std::string::npos);
  CHECK(parse_matrix_market(buf) == inst.A);

  const auto nonsym = gen_baheux({20, 0.2});
  std::stringstream general;
  write_matrix_market(general, nonsym.A);
  CHECK(parse_matrix_market(general) == nonsym.A);
  std::stringstream bad;
  CHECK_THROWS_AS(write_matrix_market(bad, nonsym.A, true), std::invalid_argument);
}

TEST_CASE("integer field is accepted", "[mm]") {
  const auto A = parse("%%MatrixMarket matrix coordinate integer general\n2 2 2\n1 1 3\n2 1 -1\n");
  CHECK(A.at(0, 0) == 3.0);
  CHECK(A.at(1, 0) == -1.0);
}

TEST_CASE("malformed input is rejected", "[mm]") {
  CHECK_THROWS_AS(parse(""), format_error);
  CHECK_THROWS_AS(parse("%%MatrixMarket matrix array real general\n2 2\n1\n"), format_error);
  CHECK_THROWS_AS(parse("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n"),
                  format_error);
  CHECK_THROWS_AS(parse("%%MatrixMarket matrix coordinate real general\n2 3 1\n1 1 1\n"),
                  dimension_error);
  CHECK_THROWS_AS(parse("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n"),
                  dimension_error);
  CHECK_THROWS_AS(parse("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n"),
                  format_error);
  CHECK_THROWS_AS(parse("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 x 1\n"),
                  format_error);
  CHECK_THROWS_AS(read_matrix_market("/nonexistent/file.mtx"), format_error);
}
