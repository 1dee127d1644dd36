#pragma once

/// \file lanczos/solver.hpp
/// \brief The Lanczos-type recurrences A4, A12, A5/B10 and A8/B10 as
///        resumable state machines sharing one init/step/run interface.
///
/// All four generate the same Lanczos iterates in exact arithmetic: x_k with
/// x_k - x_0 in K_k(A, r_0) and r_k orthogonal to K_k(A^T, y). They differ in
/// which recurrence between formal orthogonal polynomials carries the
/// iteration, hence in which scalar products appear as denominators and
/// can break the run.
///
/// Every denominator is tested before the division; a vanished one ends
/// the run with a Breakdown outcome naming it. Nothing is committed to the
/// state by a step that breaks down before its x/r update.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lanczos/linalg.hpp"
#include "lanczos/solver_types.hpp"

namespace lanczos {

namespace detail {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

/// Records denominators as they are evaluated and decides breakdown.
class DenominatorGuard {
 public:
  DenominatorGuard(std::vector<Denominator>& sink, Scalar eps) : sink_(sink), eps_(eps) {}

  /// True when \p value is usable as a divisor.
  bool check(std::string label, Scalar value, Scalar scale) {
    sink_.push_back({std::move(label), value, scale});
    return !sink_.back().vanishes(eps_);
  }

  [[nodiscard]] StepOutcome failure() const {
    return StepOutcome::broke(sink_.back().label, sink_.back().value);
  }

 private:
  std::vector<Denominator>& sink_;
  Scalar eps_;
};

inline Scalar product_scale(const Vector& u, const Vector& v) { return norm2(u) * norm2(v); }

inline StepOutcome after_update(SolverState& s) {
  if (norm2(s.r) <= s.cfg.tol) return StepOutcome::converged_();
  if (s.k >= s.max_iters) return StepOutcome::iter_limit();
  return StepOutcome::cont();
}

// ---------------------------------------------------------------- A4
//
// r_{k+1} = A_{k+1} { A r_k + B_{k+1} r_k + E_{k+1} r_{k-1} },
// x_{k+1} = A_{k+1} { B_{k+1} x_k + E_{k+1} x_{k-1} - r_k },
// A_{k+1} (B_{k+1} + E_{k+1}) = 1.

inline void init_a4(SolverState& s) {
  const std::size_t n = s.b.size();
  s.data = A4Data{Vector::zeros(n), Vector::zeros(n), Vector::zeros(n), s.y0};
}

inline StepOutcome step_a4(SolverState& s, A4Data& d) {
  const SparseMatrix& A = s.op();
  DenominatorGuard guard(s.denominators, s.cfg.breakdown_eps);
  const bool first = s.k == 0;

  Scalar E = 0.0;
  const Scalar yr = dot(d.y, s.r);
  if (!first) {
    const Scalar yr_prev = dot(d.y_prev, d.r_prev);
    if (!guard.check("A4.(y_{k-1},r_{k-1})", yr_prev, product_scale(d.y_prev, d.r_prev))) {
      return guard.failure();
    }
    E = -yr / yr_prev;
  }
  if (!guard.check("A4.(y_k,r_k)", yr, product_scale(d.y, s.r))) return guard.failure();

  const Vector Ar = matvec(A, s.r);
  // Orthogonality of r_{k+1} against y_k fixes the sign of the E term.
  const Scalar B = -(dot(d.y, Ar) + (first ? 0.0 : E * dot(d.y, d.r_prev))) / yr;
  if (!guard.check("A4.B+E", B + E, std::abs(B) + std::abs(E))) return guard.failure();
  const Scalar Ak = 1.0 / (B + E);

  const Vector x_inner = combine({B, E, -1.0}, {&s.x, &d.x_prev, &s.r});
  Vector x_next = combine({Ak}, {&x_inner});
  const Vector r_inner = combine({1.0, B, E}, {&Ar, &s.r, &d.r_prev});
  Vector r_next = combine({Ak}, {&r_inner});
  Vector y_next = matvec_t(A, d.y);

  d.x_prev = std::exchange(s.x, std::move(x_next));
  d.r_prev = std::exchange(s.r, std::move(r_next));
  d.y_prev = std::exchange(d.y, std::move(y_next));
  d.A = Ak;
  d.B = B;
  d.E = E;
  ++s.k;
  return after_update(s);
}

// ---------------------------------------------------------------- A12
//
// r_k = A_k { (A^2 + B_k A + C_k) r_{k-2} + (F_k A + G_k) r_{k-3} }.
// The prologue produces x_1, x_2 directly from the moments c_0..c_3.

inline StepOutcome init_a12(SolverState& s) {
  const SparseMatrix& A = s.op();
  DenominatorGuard guard(s.denominators, s.cfg.breakdown_eps);
  const Vector& y = s.y0;
  const Vector r0 = s.r;
  const Vector x0 = s.x;

  const Vector p = matvec(A, r0);
  const Vector p1 = matvec(A, p);
  const Vector Ap1 = matvec(A, p1);
  const Scalar c0 = dot(y, r0);
  const Scalar c1 = dot(y, p);
  const Scalar c2 = dot(y, p1);
  const Scalar c3 = dot(y, Ap1);

  if (!guard.check("A12.c1", c1, product_scale(y, p))) return guard.failure();
  const Scalar ratio = c0 / c1;
  Vector r1 = combine({1.0, -ratio}, {&r0, &p});
  Vector x1 = combine({1.0, ratio}, {&x0, &r0});

  const Vector y1 = matvec_t(A, y);
  const Vector y2 = matvec_t(A, y1);
  const Vector y3 = matvec_t(A, y2);

  s.x = std::move(x1);
  s.r = std::move(r1);
  s.k = 1;
  s.data = A12Data{x0, Vector::zeros(x0.size()), r0, Vector::zeros(r0.size()), {y, y1, y2, y3}};
  if (norm2(s.r) <= s.cfg.tol) return StepOutcome::converged_();

  const Scalar delta = c1 * c3 - c2 * c2;
  if (!guard.check("A12.delta", delta, std::abs(c1 * c3) + c2 * c2)) return guard.failure();
  const Scalar alpha = (c0 * c3 - c1 * c2) / delta;
  const Scalar beta = (c0 * c2 - c1 * c1) / delta;
  Vector r2 = combine({1.0, -alpha, beta}, {&r0, &p, &p1});
  Vector x2 = combine({1.0, alpha, -beta}, {&x0, &r0, &p});

  auto& d = std::get<A12Data>(s.data);
  d.x_m2 = x0;
  d.r_m2 = r0;
  d.x_m1 = std::exchange(s.x, std::move(x2));
  d.r_m1 = std::exchange(s.r, std::move(r2));
  d.y = {y, y1, y2, y3};
  s.k = 2;
  return after_update(s);
}

inline StepOutcome step_a12(SolverState& s, A12Data& d) {
  const SparseMatrix& A = s.op();
  DenominatorGuard guard(s.denominators, s.cfg.breakdown_eps);
  // Main-loop index is k = s.k + 1; window holds y_{k-3}, y_{k-2}, y_{k-1}, y_k.
  const Vector& y_km3 = d.y[0];
  const Vector& y_km2 = d.y[1];
  const Vector& y_km1 = d.y[2];
  const Vector& y_k = d.y[3];
  const Vector& r_km2 = d.r_m1;
  const Vector& r_km3 = d.r_m2;
  const Vector& x_km2 = d.x_m1;
  const Vector& x_km3 = d.x_m2;

  Vector y_kp1 = matvec_t(A, y_k);
  const Vector q1 = matvec(A, r_km2);
  const Vector q2 = matvec(A, q1);
  const Vector q3 = matvec(A, r_km3);

  const Scalar a11 = dot(y_km2, r_km2);
  const Scalar a13 = dot(y_km3, r_km3);
  const Scalar a21 = dot(y_km1, r_km2);
  const Scalar a22 = a11;
  const Scalar a23 = dot(y_km2, r_km3);
  const Scalar a31 = dot(y_k, r_km2);
  const Scalar a32 = a21;
  const Scalar a33 = dot(y_km1, r_km3);
  const Scalar s_ = dot(y_kp1, r_km2);
  const Scalar t_ = dot(y_k, r_km3);

  if (!guard.check("A12.a13", a13, product_scale(y_km3, r_km3))) return guard.failure();
  const Scalar F = -a11 / a13;
  const Scalar b1 = -a21 - a23 * F;
  const Scalar b2 = -a31 - a33 * F;
  const Scalar b3 = -s_ - t_ * F;

  const Scalar minor1 = a22 * a33 - a32 * a23;
  const Scalar minor2 = a21 * a32 - a31 * a22;
  const Scalar Delta = a11 * minor1 + a13 * minor2;
  const Scalar Delta_scale = std::abs(a11) * (std::abs(a22 * a33) + std::abs(a32 * a23)) +
                             std::abs(a13) * (std::abs(a21 * a32) + std::abs(a31 * a22));
  if (!guard.check("A12.Delta_k", Delta, Delta_scale)) return guard.failure();
  const Scalar B = (b1 * minor1 + a13 * (b2 * a32 - b3 * a22)) / Delta;
  const Scalar G = (b1 - a11 * B) / a13;
  if (!guard.check("A12.a22", a22, product_scale(y_km2, r_km2))) return guard.failure();
  const Scalar C = (b2 - a21 * B - a23 * G) / a22;
  if (!guard.check("A12.Ak: C_k+G_k", C + G, std::abs(C) + std::abs(G))) {
    return guard.failure();
  }
  const Scalar Ak = 1.0 / (C + G);

  const Vector r_inner = combine({1.0, B, C, F, G}, {&q2, &q1, &r_km2, &q3, &r_km3});
  Vector r_k = combine({Ak}, {&r_inner});
  const Vector x_inner = combine({C, G, -1.0, -B, -F}, {&x_km2, &x_km3, &q1, &r_km2, &r_km3});
  Vector x_k = combine({Ak}, {&x_inner});

  d.x_m2 = std::exchange(d.x_m1, std::exchange(s.x, std::move(x_k)));
  d.r_m2 = std::exchange(d.r_m1, std::exchange(s.r, std::move(r_k)));
  d.y = {std::move(d.y[1]), std::move(d.y[2]), std::move(d.y[3]), std::move(y_kp1)};
  d.A = Ak;
  d.B = B;
  d.C = C;
  d.F = F;
  d.G = G;
  ++s.k;
  return after_update(s);
}

// ---------------------------------------------------------------- A5/B10
//
// p_k = r_k + D_{k+1} C^1_{k-1} p_{k-1},  r_{k+1} = r_k + A_{k+1} A p_k.

inline Scalar a_coefficient_scale(const Vector& y, const Vector& r, Scalar denom) {
  return product_scale(y, r) / std::abs(denom);
}

inline StepOutcome init_a5b10(SolverState& s) {
  const SparseMatrix& A = s.op();
  DenominatorGuard guard(s.denominators, s.cfg.breakdown_eps);
  const Vector& y = s.y0;
  const Vector Ar = matvec(A, s.r);
  const Scalar yAr = dot(y, Ar);
  if (!guard.check("A5B10.(y_k,Ap_k)", yAr, product_scale(y, Ar))) {
    s.data = A5B10Data{y, s.r};
    return guard.failure();
  }
  const Scalar A1 = -dot(y, s.r) / yAr;
  const Vector r0 = s.r;
  Vector r1 = combine({1.0, A1}, {&s.r, &Ar});
  Vector x1 = combine({1.0, -A1}, {&s.x, &s.r});
  A5B10Data d{y, s.r, 1.0, A1, 0.0};
  s.x = std::move(x1);
  s.r = std::move(r1);
  s.data = std::move(d);
  s.k = 1;
  if (norm2(s.r) <= s.cfg.tol) return StepOutcome::converged_();
  if (!guard.check("A5B10.A_{k+1}", A1, a_coefficient_scale(y, r0, yAr))) {
    return guard.failure();
  }
  return after_update(s);
}

inline StepOutcome step_a5b10(SolverState& s, A5B10Data& d) {
  const SparseMatrix& A = s.op();
  DenominatorGuard guard(s.denominators, s.cfg.breakdown_eps);

  Vector y_k = matvec_t(A, d.y_prev);
  const Scalar yr = dot(y_k, s.r);
  const Scalar yp = dot(y_k, d.p_prev);
  if (!guard.check("A5B10.(y_k,p_{k-1})", d.c1_prev * yp,
                   std::abs(d.c1_prev) * product_scale(y_k, d.p_prev))) {
    return guard.failure();
  }
  const Scalar D = -yr / (d.c1_prev * yp);
  Vector p_k = combine({1.0, D * d.c1_prev}, {&s.r, &d.p_prev});
  const Vector Ap = matvec(A, p_k);
  const Scalar yAp = dot(y_k, Ap);
  if (!guard.check("A5B10.(y_k,Ap_k)", yAp, product_scale(y_k, Ap))) return guard.failure();
  const Scalar A_next = -yr / yAp;
  const Scalar A_scale = a_coefficient_scale(y_k, s.r, yAp);

  Vector r_next = combine({1.0, A_next}, {&s.r, &Ap});
  Vector x_next = combine({1.0, -A_next}, {&s.x, &p_k});
  s.x = std::move(x_next);
  s.r = std::move(r_next);
  d.y_prev = std::move(y_k);
  d.p_prev = std::move(p_k);
  d.A = A_next;
  d.D = D;
  ++s.k;
  if (norm2(s.r) <= s.cfg.tol) return StepOutcome::converged_();
  if (!guard.check("A5B10.A_{k+1}", A_next, A_scale)) return guard.failure();
  d.c1_prev = detail::require_finite(d.c1_prev / A_next, "A5B10 C1");
  return after_update(s);
}

// ---------------------------------------------------------------- A8/B10
//
// r_{k+1} = r_k + A_{k+1} A z_k,  z_{k+1} = B^1_{k+1} z_k + C^1_{k+1} r_{k+1}.

inline void init_a8b10(SolverState& s) { s.data = A8B10Data{s.y0, s.r}; }

inline StepOutcome step_a8b10(SolverState& s, A8B10Data& d) {
  const SparseMatrix& A = s.op();
  DenominatorGuard guard(s.denominators, s.cfg.breakdown_eps);

  const Vector Az = matvec(A, d.z);
  const Scalar yAz = dot(d.y, Az);
  if (!guard.check("A8B10.(y_k,Az_k)", yAz, product_scale(d.y, Az))) return guard.failure();
  const Scalar A_next = -dot(d.y, s.r) / yAz;
  const Scalar A_scale = a_coefficient_scale(d.y, s.r, yAz);

  Vector r_next = combine({1.0, A_next}, {&s.r, &Az});
  Vector x_next = combine({1.0, -A_next}, {&s.x, &d.z});
  s.x = std::move(x_next);
  s.r = std::move(r_next);
  d.A = A_next;
  ++s.k;
  if (norm2(s.r) <= s.cfg.tol) return StepOutcome::converged_();

  Vector y_next = matvec_t(A, d.y);
  if (!guard.check("A8B10.A_{k+1}", A_next, A_scale)) return guard.failure();
  const Scalar C1 = 1.0 / A_next;
  const Scalar B1 = -C1 * dot(y_next, s.r) / yAz;
  Vector z_next = combine({B1, C1}, {&d.z, &s.r});
  d.y = std::move(y_next);
  d.z = std::move(z_next);
  d.c1 = C1;
  d.b1 = B1;
  return after_update(s);
}

inline std::string overflow_label(AlgoId algo) {
  return std::string(to_string(algo)) + ".non-finite";
}

}  // namespace detail

/// Builds a solver state positioned at x0.
///
/// A12 runs its whole prologue here (x_1, x_2) and A5/B10 its first update
/// (x_1); either may therefore come back already Converged or in Breakdown.
/// Check status before stepping.
///
/// Throws dimension_error on shape mismatch and std::invalid_argument for a
/// zero shadow vector or an invalid config.
inline SolverState init(AlgoId algo, const SparseMatrix& A, const Vector& b, const Vector& x0,
                        const Vector& y, const SolverConfig& cfg = {}) {
  require_square(A);
  const std::size_t n = A.rows();
  if (b.size() != n || x0.size() != n || y.size() != n) {
    throw dimension_error("init: vector length does not match operator");
  }
  cfg.validate();
  if (norm2(y) == 0.0) throw std::invalid_argument("init: shadow vector y must be nonzero");

  SolverState s;
  s.algo = algo;
  s.A = &A;
  s.b = b;
  s.y0 = y;
  s.cfg = cfg;
  s.max_iters = cfg.max_iters.value_or(5 * n);
  s.x = x0;
  s.r = residual(A, b, x0);

  switch (algo) {
    case AlgoId::A4: detail::init_a4(s); break;
    case AlgoId::A12: s.data = A12Data{x0, x0, s.r, s.r, {y, y, y, y}}; break;
    case AlgoId::A5B10: s.data = A5B10Data{y, s.r}; break;
    case AlgoId::A8B10: detail::init_a8b10(s); break;
  }
  if (norm2(s.r) <= cfg.tol) {
    s.status = StepOutcome::converged_();
    return s;
  }
  try {
    if (algo == AlgoId::A12) s.status = detail::init_a12(s);
    if (algo == AlgoId::A5B10) s.status = detail::init_a5b10(s);
  } catch (const numerical_error&) {
    s.status = StepOutcome::broke(detail::overflow_label(algo),
                                  std::numeric_limits<Scalar>::infinity());
  }
  return s;
}

/// The state refers to \p A; a temporary operator would dangle.
SolverState init(AlgoId, SparseMatrix&&, const Vector&, const Vector&, const Vector&,
                 const SolverConfig& = {}) = delete;

/// Advances one iteration of the algorithm's main loop.
///
/// Throws state_error if the state already reached a terminal outcome.
inline StepOutcome step(SolverState& s) {
  if (s.terminal()) throw state_error("step: solver already terminated");
  s.denominators.clear();
  try {
    s.status = std::visit(
        detail::overloaded{[&](A4Data& d) { return detail::step_a4(s, d); },
                           [&](A12Data& d) { return detail::step_a12(s, d); },
                           [&](A5B10Data& d) { return detail::step_a5b10(s, d); },
                           [&](A8B10Data& d) { return detail::step_a8b10(s, d); }},
        s.data);
  } catch (const numerical_error&) {
    s.status = StepOutcome::broke(detail::overflow_label(s.algo),
                                  std::numeric_limits<Scalar>::infinity());
  }
  return s.status;
}

struct RunResult {
  StepOutcome outcome;
  std::size_t iterations = 0;
};

/// Steps until a terminal outcome or \p budget steps; a Continue result
/// leaves the state resumable.
inline RunResult run(SolverState& s, std::size_t budget) {
  if (budget == 0) throw std::invalid_argument("run: budget must be >= 1");
  RunResult result{s.status, 0};
  while (!s.terminal() && result.iterations < budget) {
    result.outcome = step(s);
    ++result.iterations;
  }
  result.outcome = s.status;
  return result;
}

/// Values of every denominator the next step would divide by, evaluated on
/// a copy so the state is untouched. Stops at the first vanished one.
inline std::vector<Denominator> denominator_report(const SolverState& s) {
  if (s.terminal()) throw state_error("denominator_report: solver already terminated");
  SolverState probe = s;
  step(probe);
  return probe.denominators;
}

/// ||r - (b - A x)||, the drift between recurrence and true residual.
inline Scalar residual_gap(const SolverState& s) {
  const Vector true_r = residual(s.op(), s.b, s.x);
  return norm2(combine({1.0, -1.0}, {&s.r, &true_r}));
}

}  // namespace lanczos
