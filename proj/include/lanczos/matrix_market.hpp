#pragma once

/// \file lanczos/matrix_market.hpp
/// \brief MatrixMarket coordinate I/O (real/integer, general/symmetric) and
///        plain-text right-hand sides.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lanczos/linalg.hpp"
#include "lanczos/problems.hpp"

namespace lanczos {

namespace detail {

inline std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace detail

/// Parses a coordinate MatrixMarket stream. Symmetric storage is expanded.
inline SparseMatrix parse_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw format_error("MatrixMarket: empty input");
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || detail::lowercase(object) != "matrix") {
    throw format_error("MatrixMarket: bad banner");
  }
  format = detail::lowercase(format);
  field = detail::lowercase(field);
  symmetry = detail::lowercase(symmetry);
  if (format != "coordinate") throw format_error("MatrixMarket: only coordinate format supported");
  if (field != "real" && field != "integer" && field != "double") {
    throw format_error("MatrixMarket: field must be real or integer");
  }
  const bool symmetric = symmetry == "symmetric";
  if (!symmetric && symmetry != "general") {
    throw format_error("MatrixMarket: symmetry must be general or symmetric");
  }

  do {
    if (!std::getline(in, line)) throw format_error("MatrixMarket: missing size line");
  } while (line.empty() || line[0] == '%');

  long long rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream size_line(line);
    if (!(size_line >> rows >> cols >> nnz) || rows <= 0 || cols <= 0 || nnz < 0) {
      throw format_error("MatrixMarket: malformed size line");
    }
  }
  if (rows != cols) throw dimension_error("MatrixMarket: matrix is not square");
  if (symmetric && rows != cols) throw format_error("MatrixMarket: symmetric but not square");

  const auto n = static_cast<std::size_t>(rows);
  std::vector<SparseMatrix::Triplet> entries;
  entries.reserve(static_cast<std::size_t>(symmetric ? 2 * nnz : nnz));
  long long read = 0;
  while (read < nnz && std::getline(in, line)) {
    if (line.empty() || line[0] == '%') continue;
    std::istringstream entry(line);
    long long i = 0, j = 0;
    double v = 0.0;
    if (!(entry >> i >> j >> v)) throw format_error("MatrixMarket: malformed entry line");
    if (i < 1 || j < 1 || i > rows || j > cols) {
      throw dimension_error("MatrixMarket: entry index out of bounds");
    }
    const auto r = static_cast<std::size_t>(i - 1);
    const auto c = static_cast<std::size_t>(j - 1);
    entries.push_back({r, c, v});
    if (symmetric && r != c) entries.push_back({c, r, v});
    ++read;
  }
  if (read != nnz) throw format_error("MatrixMarket: fewer entries than declared");
  return SparseMatrix::from_triplets(n, n, std::move(entries));
}

/// One float per line, blank lines and '%' comments ignored.
inline Vector parse_rhs(std::istream& in) {
  std::vector<Scalar> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '%') continue;
    std::istringstream is(line);
    double v = 0.0;
    if (!(is >> v)) throw format_error("rhs: malformed line");
    values.push_back(v);
  }
  if (values.empty()) throw format_error("rhs: no values");
  return Vector(std::move(values));
}

/// Loads a problem from disk. Without \p rhs_path, b = A * ones and
/// x_true = ones.
inline ProblemInstance read_matrix_market(const std::string& path,
                                          const std::optional<std::string>& rhs_path = {}) {
  std::ifstream in(path);
  if (!in) throw format_error("cannot open " + path);
  ProblemInstance inst{parse_matrix_market(in), {}, {}, path};
  if (rhs_path) {
    std::ifstream rin(*rhs_path);
    if (!rin) throw format_error("cannot open " + *rhs_path);
    inst.b = parse_rhs(rin);
    if (inst.b.size() != inst.A.rows()) throw dimension_error("rhs length does not match matrix");
  } else {
    Vector ones = Vector::constant(inst.A.rows(), 1.0);
    inst.b = matvec(inst.A, ones);
    inst.x_true = std::move(ones);
  }
  return inst;
}

/// Writes coordinate/real. With \p symmetric, only the lower triangle is
/// written and the matrix must actually be symmetric.
inline void write_matrix_market(std::ostream& out, const SparseMatrix& A, bool symmetric = false) {
  const auto offsets = A.row_offsets();
  const auto cols = A.col_indices();
  const auto vals = A.values();
  std::size_t count = 0;
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t j = offsets[i]; j < offsets[i + 1]; ++j) {
      if (symmetric && cols[j] > i) {
        if (A.at(cols[j], i) != vals[j]) throw std::invalid_argument("matrix is not symmetric");
        continue;
      }
      ++count;
    }
  }
  out << "%%MatrixMarket matrix coordinate real " << (symmetric ? "symmetric" : "general") << '\n';
  out << A.rows() << ' ' << A.cols() << ' ' << count << '\n';
  out << std::setprecision(std::numeric_limits<Scalar>::max_digits10);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t j = offsets[i]; j < offsets[i + 1]; ++j) {
      if (symmetric && cols[j] > i) continue;
      out << i + 1 << ' ' << cols[j] + 1 << ' ' << vals[j] << '\n';
    }
  }
}

}  // namespace lanczos
