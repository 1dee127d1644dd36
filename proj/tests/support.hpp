#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "lanczos/linalg.hpp"

namespace lanczos::testing {

/// Nonsymmetric, diagonally dominant, roughly 30% dense.
inline SparseMatrix random_matrix(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::bernoulli_distribution keep(0.3);
  std::vector<SparseMatrix::Triplet> entries;
  for (std::size_t i = 0; i < n; ++i) {
    entries.push_back({i, i, 4.0 + val(gen)});
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && keep(gen)) entries.push_back({i, j, val(gen)});
    }
  }
  return SparseMatrix::from_triplets(n, n, std::move(entries));
}

inline Vector random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::vector<Scalar> v(n);
  for (auto& e : v) e = val(gen);
  return Vector(std::move(v));
}

inline Eigen::MatrixXd to_eigen(const SparseMatrix& A) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(A.rows()),
                                            static_cast<Eigen::Index>(A.cols()));
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t j = 0; j < A.cols(); ++j) {
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = A.at(i, j);
    }
  }
  return M;
}

inline Eigen::VectorXd to_eigen(const Vector& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.raw().data(), static_cast<Eigen::Index>(v.size()));
}

/// The k-th Lanczos iterate: x_k - x0 in K_k(A, r0), r_k orthogonal to
/// K_k(A^T, y). Both Krylov bases are orthonormalised before the solve.
inline Eigen::VectorXd galerkin_iterate(const SparseMatrix& A, const Vector& b, const Vector& x0,
                                        const Vector& y, int k) {
  const Eigen::MatrixXd M = to_eigen(A);
  const Eigen::VectorXd r0 = to_eigen(b) - M * to_eigen(x0);
  const auto n = M.rows();
  Eigen::MatrixXd V(n, k), W(n, k);
  V.col(0) = r0.normalized();
  W.col(0) = to_eigen(y).normalized();
  for (int j = 1; j < k; ++j) {
    V.col(j) = (M * V.col(j - 1)).normalized();
    W.col(j) = (M.transpose() * W.col(j - 1)).normalized();
  }
  const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(V).householderQ() *
                            Eigen::MatrixXd::Identity(n, k);
  const Eigen::MatrixXd P = Eigen::HouseholderQR<Eigen::MatrixXd>(W).householderQ() *
                            Eigen::MatrixXd::Identity(n, k);
  const Eigen::MatrixXd H = P.transpose() * M * Q;
  const Eigen::VectorXd alpha = H.fullPivLu().solve(P.transpose() * r0);
  return to_eigen(x0) + Q * alpha;
}

/// ||r - (b - A x)|| <= 1e-10 (||b|| + ||A||_inf ||x||)
inline bool residual_identity_holds(const SparseMatrix& A, const Vector& b, const Vector& x,
                                    const Vector& r) {
  const Vector true_r = residual(A, b, x);
  const Vector gap = combine({1.0, -1.0}, {&r, &true_r});
  return norm2(gap) <= 1e-10 * (norm2(b) + A.inf_norm() * norm2(x));
}

}  // namespace lanczos::testing
