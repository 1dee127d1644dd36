#pragma once

/// \file lanczos/problems.hpp
/// \brief Baheux block-tridiagonal test systems and the dense direct-solve
///        oracle used to check solver output.

#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lanczos/linalg.hpp"

namespace lanczos {

struct ProblemInstance {
  SparseMatrix A;
  Vector b;
  std::optional<Vector> x_true;
  std::string label;
};

/// Five-point convection-diffusion stencil with 10x10 diagonal blocks
/// B = tridiag(beta, 4, alpha), alpha = -1 + delta, beta = -1 - delta,
/// coupled by -I blocks.
struct BaheuxSpec {
  static constexpr std::size_t kBlockSize = 10;

  std::size_t n = 0;
  Scalar delta = 0.0;

  void validate() const {
    if (n == 0 || n % kBlockSize != 0) {
      throw std::invalid_argument("Baheux dimension must be a positive multiple of 10");
    }
    if (!std::isfinite(delta)) throw std::invalid_argument("Baheux delta must be finite");
  }

  [[nodiscard]] Scalar alpha() const noexcept { return -1.0 + delta; }
  [[nodiscard]] Scalar beta() const noexcept { return -1.0 - delta; }

  /// n + 2 (n - n/10) + 2 (n - 10)
  [[nodiscard]] std::size_t expected_nonzeros() const noexcept {
    return n + 2 * (n - n / kBlockSize) + 2 * (n - kBlockSize);
  }
};

inline std::string baheux_label(const BaheuxSpec& spec) {
  std::ostringstream os;
  os << "baheux(n=" << spec.n << ",delta=" << spec.delta << ")";
  return os.str();
}

/// Baheux operator with b = A * ones and x_true = ones.
inline ProblemInstance gen_baheux(const BaheuxSpec& spec) {
  spec.validate();
  constexpr std::size_t m = BaheuxSpec::kBlockSize;
  const std::size_t n = spec.n;
  std::vector<SparseMatrix::Triplet> entries;
  entries.reserve(spec.expected_nonzeros());
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t pos = i % m;
    if (i >= m) entries.push_back({i, i - m, -1.0});
    if (pos > 0) entries.push_back({i, i - 1, spec.beta()});
    entries.push_back({i, i, 4.0});
    if (pos + 1 < m) entries.push_back({i, i + 1, spec.alpha()});
    if (i + m < n) entries.push_back({i, i + m, -1.0});
  }
  ProblemInstance inst{SparseMatrix::from_triplets(n, n, std::move(entries)), {}, {},
                       baheux_label(spec)};
  Vector ones = Vector::constant(n, 1.0);
  inst.b = matvec(inst.A, ones);
  inst.x_true = std::move(ones);
  return inst;
}

/// Largest system the dense oracle will densify.
inline constexpr std::size_t kOracleMaxDim = 2000;

/// Densifies A and solves by LU with partial pivoting.
inline Vector direct_solve_oracle(const SparseMatrix& A, const Vector& b) {
  require_square(A);
  const auto n = static_cast<Eigen::Index>(A.rows());
  if (b.size() != A.rows()) throw dimension_error("oracle: rhs length mismatch");
  if (A.rows() > kOracleMaxDim) throw std::invalid_argument("oracle: dimension above 2000");

  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
  const auto offsets = A.row_offsets();
  const auto cols = A.col_indices();
  const auto vals = A.values();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t j = offsets[static_cast<std::size_t>(i)];
         j < offsets[static_cast<std::size_t>(i) + 1]; ++j) {
      dense(i, static_cast<Eigen::Index>(cols[j])) = vals[j];
    }
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(dense);
  const Eigen::VectorXd pivots = lu.matrixLU().diagonal();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(std::abs(pivots(i)) >= 1e-300)) throw singular_matrix_error("oracle: singular pivot");
  }
  const Eigen::Map<const Eigen::VectorXd> rhs(b.raw().data(), n);
  const Eigen::VectorXd x = lu.solve(rhs);
  return Vector(std::vector<Scalar>(x.data(), x.data() + n));
}

}  // namespace lanczos
