#pragma once

#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lanczos/linalg.hpp"

namespace lanczos {

/// The four Lanczos-type recurrences.
enum class AlgoId { A4, A12, A5B10, A8B10 };

inline constexpr std::array<AlgoId, 4> kAllAlgorithms = {AlgoId::A4, AlgoId::A12, AlgoId::A5B10,
                                                         AlgoId::A8B10};

inline std::string_view to_string(AlgoId id) noexcept {
  switch (id) {
    case AlgoId::A4: return "A4";
    case AlgoId::A12: return "A12";
    case AlgoId::A5B10: return "A5B10";
    case AlgoId::A8B10: return "A8B10";
  }
  return "?";
}

/// Accepts "a4", "A12", "a5b10", "A5/B10", ... (case-insensitive, '/' ignored).
inline std::optional<AlgoId> parse_algo(std::string_view text) {
  std::string key;
  for (char c : text) {
    if (c == '/' || c == '_') continue;
    key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (key == "a4") return AlgoId::A4;
  if (key == "a12") return AlgoId::A12;
  if (key == "a5b10") return AlgoId::A5B10;
  if (key == "a8b10") return AlgoId::A8B10;
  return std::nullopt;
}

struct SolverConfig {
  /// Stop once the recurrence residual satisfies ||r_k|| <= tol.
  Scalar tol = 1e-13;
  /// A denominator d counts as vanished when |d| <= breakdown_eps * scale,
  /// scale being the magnitude of the terms that produced d.
  Scalar breakdown_eps = 1e-12;
  /// Unset means 5n, resolved at init.
  std::optional<std::size_t> max_iters;

  void validate() const {
    if (!(tol > 0.0) || !std::isfinite(tol)) throw std::invalid_argument("tol must be > 0");
    if (!(breakdown_eps > 0.0) || !std::isfinite(breakdown_eps)) {
      throw std::invalid_argument("breakdown_eps must be > 0");
    }
    if (max_iters && *max_iters == 0) throw std::invalid_argument("max_iters must be >= 1");
  }
};

enum class OutcomeKind { Continue, Converged, Breakdown, IterLimit };

inline std::string_view to_string(OutcomeKind kind) noexcept {
  switch (kind) {
    case OutcomeKind::Continue: return "Continue";
    case OutcomeKind::Converged: return "Converged";
    case OutcomeKind::Breakdown: return "Breakdown";
    case OutcomeKind::IterLimit: return "IterLimit";
  }
  return "?";
}

struct StepOutcome {
  OutcomeKind kind = OutcomeKind::Continue;
  /// For Breakdown: which denominator vanished, e.g. "A12.delta".
  std::string label;
  /// For Breakdown: the offending value (infinity when a kernel overflowed).
  Scalar value = 0.0;

  [[nodiscard]] bool terminal() const noexcept { return kind != OutcomeKind::Continue; }
  [[nodiscard]] bool converged() const noexcept { return kind == OutcomeKind::Converged; }
  [[nodiscard]] bool breakdown() const noexcept { return kind == OutcomeKind::Breakdown; }

  static StepOutcome cont() { return {}; }
  static StepOutcome converged_() { return {OutcomeKind::Converged, {}, 0.0}; }
  static StepOutcome iter_limit() { return {OutcomeKind::IterLimit, {}, 0.0}; }
  static StepOutcome broke(std::string label, Scalar value) {
    return {OutcomeKind::Breakdown, std::move(label), value};
  }
};

/// A quantity a recurrence divides by, together with the magnitude it is
/// judged against.
struct Denominator {
  std::string label;
  Scalar value = 0.0;
  Scalar scale = 0.0;

  [[nodiscard]] bool vanishes(Scalar eps) const noexcept {
    return !(std::abs(value) > eps * scale);
  }
  [[nodiscard]] Scalar relative() const noexcept {
    return scale > 0.0 ? std::abs(value) / scale : 0.0;
  }
};

// Algorithm-specific recurrence memory. Index names are relative to the
// iterate k currently held in SolverState::x / r.

struct A4Data {
  Vector x_prev;  // x_{k-1}
  Vector r_prev;  // r_{k-1}
  Vector y_prev;  // y_{k-1}
  Vector y;       // y_k
  // coefficients of the last completed step
  Scalar A = 0.0, B = 0.0, E = 0.0;
};

struct A12Data {
  Vector x_m1, x_m2;   // x_{k-1}, x_{k-2}
  Vector r_m1, r_m2;   // r_{k-1}, r_{k-2}
  std::array<Vector, 4> y;  // y_{k-2}, y_{k-1}, y_k, y_{k+1}
  Scalar A = 0.0, B = 0.0, C = 0.0, F = 0.0, G = 0.0;
};

struct A5B10Data {
  Vector y_prev;  // y_{k-1}
  Vector p_prev;  // p_{k-1}
  Scalar c1_prev = 1.0;  // C^1_{k-1}
  Scalar A = 0.0;
  Scalar D = 0.0;
};

struct A8B10Data {
  Vector y;  // y_k
  Vector z;  // z_k
  Scalar c1 = 0.0;  // C^1_k
  Scalar b1 = 0.0;  // B^1_k
  Scalar A = 0.0;
};

using AlgoData = std::variant<A4Data, A12Data, A5B10Data, A8B10Data>;

/// Resumable recurrence state. Built by init(), advanced by step().
///
/// The operator is held by pointer and must outlive the state.
struct SolverState {
  AlgoId algo = AlgoId::A4;
  const SparseMatrix* A = nullptr;
  Vector b;
  Vector y0;
  SolverConfig cfg;
  std::size_t max_iters = 0;

  /// Number of x-updates since init (prologue updates included).
  std::size_t k = 0;
  Vector x;
  Vector r;
  AlgoData data;

  StepOutcome status;
  /// Denominators evaluated by the most recent step (or by init).
  std::vector<Denominator> denominators;

  [[nodiscard]] const SparseMatrix& op() const { return *A; }
  [[nodiscard]] bool terminal() const noexcept { return status.terminal(); }
};

}  // namespace lanczos
