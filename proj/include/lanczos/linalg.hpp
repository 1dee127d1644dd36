#pragma once

/// \file lanczos/linalg.hpp
/// \brief Dense vectors, CSR matrices and the handful of kernels the
///        Lanczos recurrences are written in terms of.
///
/// Every reduction accumulates left to right in plain double precision,
/// so results are bitwise reproducible for a fixed operand order.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "lanczos/errors.hpp"

namespace lanczos {

using Scalar = double;

namespace detail {

inline void require_finite(std::span<const Scalar> values, const char* what) {
  for (Scalar v : values) {
    if (!std::isfinite(v)) {
      throw numerical_error(std::string(what) + ": non-finite value");
    }
  }
}

inline Scalar require_finite(Scalar v, const char* what) {
  if (!std::isfinite(v)) throw numerical_error(std::string(what) + ": non-finite value");
  return v;
}

}  // namespace detail

/// Immutable dense vector of finite doubles.
class Vector {
 public:
  Vector() = default;

  explicit Vector(std::vector<Scalar> data) : data_(std::move(data)) {
    detail::require_finite(data_, "Vector");
  }

  Vector(std::initializer_list<Scalar> values) : Vector(std::vector<Scalar>(values)) {}

  static Vector zeros(std::size_t n) { return Vector(std::vector<Scalar>(n, 0.0)); }
  static Vector constant(std::size_t n, Scalar value) {
    return Vector(std::vector<Scalar>(n, value));
  }

  [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
  [[nodiscard]] bool empty() const noexcept { return data_.empty(); }
  Scalar operator[](std::size_t i) const noexcept { return data_[i]; }
  [[nodiscard]] std::span<const Scalar> values() const noexcept { return data_; }
  [[nodiscard]] const std::vector<Scalar>& raw() const noexcept { return data_; }
  [[nodiscard]] auto begin() const noexcept { return data_.begin(); }
  [[nodiscard]] auto end() const noexcept { return data_.end(); }

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<Scalar> data_;
};

/// Square-or-rectangular sparse matrix in compressed sparse row layout.
/// Column indices within a row are sorted and unique.
class SparseMatrix {
 public:
  struct Triplet {
    std::size_t row;
    std::size_t col;
    Scalar value;
  };

  SparseMatrix() = default;

  /// Takes CSR arrays verbatim; validates shape, ordering and finiteness.
  SparseMatrix(std::size_t nrows, std::size_t ncols, std::vector<std::size_t> row_offsets,
               std::vector<std::size_t> col_indices, std::vector<Scalar> values)
      : nrows_(nrows),
        ncols_(ncols),
        offsets_(std::move(row_offsets)),
        cols_(std::move(col_indices)),
        vals_(std::move(values)) {
    if (nrows_ == 0 || ncols_ == 0) throw dimension_error("SparseMatrix: empty dimension");
    if (offsets_.size() != nrows_ + 1) throw dimension_error("SparseMatrix: offsets length");
    if (offsets_.front() != 0 || offsets_.back() != cols_.size() || cols_.size() != vals_.size()) {
      throw dimension_error("SparseMatrix: inconsistent CSR arrays");
    }
    for (std::size_t i = 0; i < nrows_; ++i) {
      if (offsets_[i] > offsets_[i + 1]) throw dimension_error("SparseMatrix: offsets decrease");
      for (std::size_t j = offsets_[i]; j < offsets_[i + 1]; ++j) {
        if (cols_[j] >= ncols_) throw dimension_error("SparseMatrix: column out of range");
        if (j > offsets_[i] && cols_[j] <= cols_[j - 1]) {
          throw dimension_error("SparseMatrix: columns not strictly increasing in row");
        }
      }
    }
    detail::require_finite(vals_, "SparseMatrix");
  }

  /// Assembles from unordered triplets; duplicates are summed, explicit
  /// zeros are kept.
  static SparseMatrix from_triplets(std::size_t nrows, std::size_t ncols,
                                    std::vector<Triplet> entries) {
    for (const auto& t : entries) {
      if (t.row >= nrows || t.col >= ncols) throw dimension_error("triplet index out of range");
    }
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
      return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });
    std::vector<std::size_t> offsets(nrows + 1, 0);
    std::vector<std::size_t> cols;
    std::vector<Scalar> vals;
    cols.reserve(entries.size());
    vals.reserve(entries.size());
    for (std::size_t e = 0; e < entries.size(); ++e) {
      const auto& t = entries[e];
      if (e > 0 && entries[e - 1].row == t.row && entries[e - 1].col == t.col) {
        vals.back() += t.value;
        continue;
      }
      cols.push_back(t.col);
      vals.push_back(t.value);
      ++offsets[t.row + 1];
    }
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    return {nrows, ncols, std::move(offsets), std::move(cols), std::move(vals)};
  }

  static SparseMatrix identity(std::size_t n) {
    std::vector<Scalar> ones(n, 1.0);
    return diagonal(ones);
  }

  static SparseMatrix diagonal(std::span<const Scalar> diag) {
    const std::size_t n = diag.size();
    std::vector<std::size_t> offsets(n + 1), cols(n);
    std::iota(offsets.begin(), offsets.end(), std::size_t{0});
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    return {n, n, std::move(offsets), std::move(cols), std::vector<Scalar>(diag.begin(), diag.end())};
  }

  /// Row-major dense input; exact zeros are dropped.
  static SparseMatrix from_dense(std::size_t nrows, std::size_t ncols,
                                 std::span<const Scalar> row_major) {
    if (row_major.size() != nrows * ncols) throw dimension_error("from_dense: size mismatch");
    std::vector<Triplet> entries;
    for (std::size_t i = 0; i < nrows; ++i) {
      for (std::size_t j = 0; j < ncols; ++j) {
        if (row_major[i * ncols + j] != 0.0) entries.push_back({i, j, row_major[i * ncols + j]});
      }
    }
    return from_triplets(nrows, ncols, std::move(entries));
  }

  [[nodiscard]] std::size_t rows() const noexcept { return nrows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return ncols_; }
  [[nodiscard]] std::size_t nonzeros() const noexcept { return vals_.size(); }
  [[nodiscard]] bool is_square() const noexcept { return nrows_ == ncols_; }

  [[nodiscard]] std::span<const std::size_t> row_offsets() const noexcept { return offsets_; }
  [[nodiscard]] std::span<const std::size_t> col_indices() const noexcept { return cols_; }
  [[nodiscard]] std::span<const Scalar> values() const noexcept { return vals_; }

  /// Stored value at (i, j), zero when not stored.
  [[nodiscard]] Scalar at(std::size_t i, std::size_t j) const {
    if (i >= nrows_ || j >= ncols_) throw dimension_error("SparseMatrix::at out of range");
    auto first = cols_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
    auto last = cols_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
    auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return 0.0;
    return vals_[static_cast<std::size_t>(it - cols_.begin())];
  }

  /// Maximum absolute row sum.
  [[nodiscard]] Scalar inf_norm() const noexcept {
    Scalar best = 0.0;
    for (std::size_t i = 0; i < nrows_; ++i) {
      Scalar row = 0.0;
      for (std::size_t j = offsets_[i]; j < offsets_[i + 1]; ++j) row += std::abs(vals_[j]);
      best = std::max(best, row);
    }
    return best;
  }

  /// Row-major dense copy.
  [[nodiscard]] std::vector<Scalar> to_dense() const {
    std::vector<Scalar> dense(nrows_ * ncols_, 0.0);
    for (std::size_t i = 0; i < nrows_; ++i) {
      for (std::size_t j = offsets_[i]; j < offsets_[i + 1]; ++j) {
        dense[i * ncols_ + cols_[j]] = vals_[j];
      }
    }
    return dense;
  }

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  std::size_t nrows_ = 0;
  std::size_t ncols_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> cols_;
  std::vector<Scalar> vals_;
};

/// Throws unless \p A can serve as the operator of a linear solve.
inline void require_square(const SparseMatrix& A) {
  if (!A.is_square()) throw dimension_error("operator must be square");
}

inline Scalar dot(const Vector& u, const Vector& v) {
  if (u.size() != v.size()) throw dimension_error("dot: length mismatch");
  Scalar sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += u[i] * v[i];
  return detail::require_finite(sum, "dot");
}

inline Scalar norm2(const Vector& v) { return std::sqrt(dot(v, v)); }

inline Scalar norm_inf(const Vector& v) noexcept {
  Scalar best = 0.0;
  for (Scalar x : v) best = std::max(best, std::abs(x));
  return best;
}

inline Vector matvec(const SparseMatrix& M, const Vector& v) {
  if (M.cols() != v.size()) throw dimension_error("matvec: dimension mismatch");
  const auto offsets = M.row_offsets();
  const auto cols = M.col_indices();
  const auto vals = M.values();
  std::vector<Scalar> out(M.rows(), 0.0);
  for (std::size_t i = 0; i < M.rows(); ++i) {
    Scalar sum = 0.0;
    for (std::size_t j = offsets[i]; j < offsets[i + 1]; ++j) sum += vals[j] * v[cols[j]];
    out[i] = sum;
  }
  return Vector(std::move(out));
}

/// M^T v by scattering over the CSR rows; no transpose is stored.
inline Vector matvec_t(const SparseMatrix& M, const Vector& v) {
  if (M.rows() != v.size()) throw dimension_error("matvec_t: dimension mismatch");
  const auto offsets = M.row_offsets();
  const auto cols = M.col_indices();
  const auto vals = M.values();
  std::vector<Scalar> out(M.cols(), 0.0);
  for (std::size_t i = 0; i < M.rows(); ++i) {
    const Scalar vi = v[i];
    for (std::size_t j = offsets[i]; j < offsets[i + 1]; ++j) out[cols[j]] += vals[j] * vi;
  }
  return Vector(std::move(out));
}

/// sum_j coeffs[j] * vecs[j], accumulated per entry in list order.
inline Vector combine(std::span<const Scalar> coeffs, std::span<const Vector* const> vecs) {
  if (coeffs.empty() || vecs.empty()) throw dimension_error("combine: empty operand list");
  if (coeffs.size() != vecs.size()) throw dimension_error("combine: list sizes differ");
  const std::size_t n = vecs.front()->size();
  for (const Vector* v : vecs) {
    if (v->size() != n) throw dimension_error("combine: vector lengths differ");
  }
  std::vector<Scalar> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    Scalar sum = coeffs[0] * (*vecs[0])[i];
    for (std::size_t j = 1; j < vecs.size(); ++j) sum += coeffs[j] * (*vecs[j])[i];
    out[i] = sum;
  }
  return Vector(std::move(out));
}

inline Vector combine(std::initializer_list<Scalar> coeffs,
                      std::initializer_list<const Vector*> vecs) {
  return combine(std::span<const Scalar>(coeffs.begin(), coeffs.size()),
                 std::span<const Vector* const>(vecs.begin(), vecs.size()));
}

inline Vector combine(const std::vector<Scalar>& coeffs, const std::vector<Vector>& vecs) {
  std::vector<const Vector*> ptrs;
  ptrs.reserve(vecs.size());
  for (const auto& v : vecs) ptrs.push_back(&v);
  return combine(std::span<const Scalar>(coeffs), std::span<const Vector* const>(ptrs));
}

/// b - A x
inline Vector residual(const SparseMatrix& A, const Vector& b, const Vector& x) {
  const Vector Ax = matvec(A, x);
  return combine({1.0, -1.0}, {&b, &Ax});
}

}  // namespace lanczos
