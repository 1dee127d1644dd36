#pragma once

/// \file lanczos/switching.hpp
/// \brief Breakdown avoidance by handing the current iterate from one
///        Lanczos-type recurrence to another.
///
/// Three strategies decide when to hand off:
///  - ST1 runs the current algorithm until it breaks down;
///  - ST2 stops it after a fixed cycle of iterations;
///  - ST3 watches the next step's denominators and leaves when one of them
///    falls below a relative threshold.
/// At each handoff a SelectionPolicy picks the next pool member; picking the
/// running algorithm again is a restart, picking another one a proper switch.
/// The incoming algorithm is initialised at the last iterate with a freshly
/// computed residual.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lanczos/linalg.hpp"
#include "lanczos/rng.hpp"
#include "lanczos/solver.hpp"

namespace lanczos {

/// Switch only after a breakdown.
struct ST1 {};

/// Pre-emptive switching every cycle_len iterations.
struct ST2 {
  std::size_t cycle_len = 20;
};

/// Switch as soon as a denominator of the next step drops below
/// monitor_threshold relative to the magnitude of its terms.
struct ST3 {
  Scalar monitor_threshold = 1e-8;
  std::size_t check_every = 1;
};

using Strategy = std::variant<ST1, ST2, ST3>;

inline std::string_view strategy_name(const Strategy& s) {
  switch (s.index()) {
    case 0: return "ST1";
    case 1: return "ST2";
    default: return "ST3";
  }
}

inline void validate(const Strategy& strategy) {
  if (const auto* st2 = std::get_if<ST2>(&strategy); st2 && st2->cycle_len == 0) {
    throw std::invalid_argument("ST2 cycle length must be >= 1");
  }
  if (const auto* st3 = std::get_if<ST3>(&strategy)) {
    if (!(st3->monitor_threshold > 0.0)) throw std::invalid_argument("ST3 threshold must be > 0");
    if (st3->check_every == 0) throw std::invalid_argument("ST3 check_every must be >= 1");
  }
}

enum class SelectionMode { CoinToss, RoundRobin, Fixed };

struct SelectionPolicy {
  std::vector<AlgoId> pool;
  SelectionMode mode = SelectionMode::CoinToss;
  std::uint64_t seed = 42;
  /// Target of SelectionMode::Fixed.
  AlgoId fixed = AlgoId::A4;

  [[nodiscard]] bool contains(AlgoId id) const {
    return std::find(pool.begin(), pool.end(), id) != pool.end();
  }

  void validate() const {
    if (pool.empty()) throw std::invalid_argument("selection pool must not be empty");
    for (std::size_t i = 0; i < pool.size(); ++i) {
      for (std::size_t j = i + 1; j < pool.size(); ++j) {
        if (pool[i] == pool[j]) throw std::invalid_argument("selection pool has duplicates");
      }
    }
    if (mode == SelectionMode::Fixed && !contains(fixed)) {
      throw std::invalid_argument("fixed algorithm not in pool");
    }
  }
};

enum class EventKind {
  CycleEnd,
  BreakdownSwitch,
  MonitorSwitch,
  Restart,
  ProperSwitch,
  Converged,
  Exhausted
};

inline std::string_view to_string(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::CycleEnd: return "CycleEnd";
    case EventKind::BreakdownSwitch: return "BreakdownSwitch";
    case EventKind::MonitorSwitch: return "MonitorSwitch";
    case EventKind::Restart: return "Restart";
    case EventKind::ProperSwitch: return "ProperSwitch";
    case EventKind::Converged: return "Converged";
    case EventKind::Exhausted: return "Exhausted";
  }
  return "?";
}

struct Selection {
  AlgoId next;
  EventKind kind;  // Restart or ProperSwitch
};

/// Picks the algorithm for the next cycle. CoinToss draws uniformly from the
/// pool, RoundRobin takes the successor of \p current, Fixed always returns
/// policy.fixed. Consumes exactly one draw from \p rng for CoinToss and none
/// otherwise.
inline Selection select_next(const SelectionPolicy& policy, AlgoId current, SplitMix64& rng) {
  AlgoId next = current;
  switch (policy.mode) {
    case SelectionMode::CoinToss:
      next = policy.pool[rng.uniform_index(policy.pool.size())];
      break;
    case SelectionMode::RoundRobin: {
      auto it = std::find(policy.pool.begin(), policy.pool.end(), current);
      if (it == policy.pool.end()) throw std::invalid_argument("current algorithm not in pool");
      ++it;
      next = it == policy.pool.end() ? policy.pool.front() : *it;
      break;
    }
    case SelectionMode::Fixed:
      next = policy.fixed;
      break;
  }
  return {next, next == current ? EventKind::Restart : EventKind::ProperSwitch};
}

/// Shadow vector used by the incoming algorithm at a handoff.
enum class ShadowRestart {
  /// y := b - A x at the handoff iterate.
  FreshResidual,
  /// The y the switching run started with.
  Original
};

struct SwitchPlan {
  Strategy strategy = ST2{};
  SelectionPolicy policy;
  /// Unset: A8B10 under ST1 when pooled, otherwise the first pool member.
  std::optional<AlgoId> start;
  SolverConfig cfg;
  /// Total x-updates across all cycles; unset means 100 n.
  std::optional<std::size_t> global_budget;
  ShadowRestart shadow = ShadowRestart::FreshResidual;
  /// A recurrence residual below tol is accepted only if the recomputed
  /// ||b - A x|| is at most verify_factor * tol; otherwise the run restarts
  /// from that iterate.
  Scalar verify_factor = 10.0;

  [[nodiscard]] AlgoId resolved_start() const {
    if (start) return *start;
    if (std::holds_alternative<ST1>(strategy) && policy.contains(AlgoId::A8B10)) {
      return AlgoId::A8B10;
    }
    return policy.pool.front();
  }

  void validate() const {
    lanczos::validate(strategy);
    policy.validate();
    cfg.validate();
    if (start && !policy.contains(*start)) throw std::invalid_argument("start not in pool");
    if (global_budget && *global_budget == 0) throw std::invalid_argument("budget must be >= 1");
    if (!(verify_factor >= 1.0)) throw std::invalid_argument("verify_factor must be >= 1");
  }
};

struct SwitchEvent {
  EventKind kind;
  /// Total iterations when the event fired.
  std::size_t iteration = 0;
  AlgoId from;
  AlgoId to;
  /// Recurrence residual norm of the segment that just ended.
  Scalar residual = 0.0;
  /// ||b - A x|| recomputed at the event.
  Scalar true_residual = 0.0;
  /// Breakdown label or exhaustion reason.
  std::string detail;

  friend bool operator==(const SwitchEvent&, const SwitchEvent&) = default;
};

struct SwitchTrace {
  std::vector<SwitchEvent> events;
  friend bool operator==(const SwitchTrace&, const SwitchTrace&) = default;
};

struct SwitchResult {
  Vector x;
  bool converged = false;
  std::size_t iterations = 0;
  /// Recurrence residual norm at termination.
  Scalar residual = 0.0;
  Scalar true_residual = 0.0;
  std::size_t switches = 0;
  std::size_t restarts = 0;
  /// Handoffs whose incoming algorithm broke down before its first update.
  std::size_t failed_handoffs = 0;
  SwitchTrace trace;
};

/// Called with the live solver state at the start of each segment and after
/// every committed step.
using StepHook = std::function<void(const SolverState&)>;

/// Initialises \p next at \p prev_x: the residual is recomputed as
/// b - A prev_x and the shadow sequence restarts from \p y.
/// A prologue breakdown is reported in the returned state's status.
inline SolverState handoff(const SparseMatrix& A, const Vector& b, const Vector& prev_x,
                           const Vector& y, AlgoId next, const SolverConfig& cfg) {
  return init(next, A, b, prev_x, y, cfg);
}

namespace detail {

inline std::size_t prologue_cost(AlgoId algo) {
  switch (algo) {
    case AlgoId::A12: return 2;
    case AlgoId::A5B10: return 1;
    default: return 0;
  }
}

enum class SegmentEnd { Terminal, CycleDone, Monitor, Budget };

}  // namespace detail

/// Drives solver segments under \p plan until convergence or exhaustion.
///
/// Trace event indices increase strictly, except that a closing Converged or
/// Exhausted event may share the index of the event before it when the last
/// handoff made no progress.
inline SwitchResult run_switching(const SparseMatrix& A, const Vector& b, const Vector& x0,
                                  const Vector& y, const SwitchPlan& plan,
                                  const StepHook& hook = {}) {
  plan.validate();
  require_square(A);
  const std::size_t n = A.rows();
  if (b.size() != n || x0.size() != n || y.size() != n) {
    throw dimension_error("run_switching: vector length does not match operator");
  }
  if (norm2(y) == 0.0) throw std::invalid_argument("run_switching: shadow vector must be nonzero");

  const std::size_t budget = plan.global_budget.value_or(100 * n);
  SolverConfig cfg = plan.cfg;
  cfg.max_iters = std::numeric_limits<std::size_t>::max();
  const Scalar tol = cfg.tol;

  SwitchResult result;
  result.x = x0;
  SplitMix64 rng(plan.policy.seed);
  AlgoId current = plan.resolved_start();
  std::vector<AlgoId> failed_here;
  bool first_segment = true;

  auto finish = [&](EventKind kind, AlgoId from, Scalar recurrence, std::string detail) {
    result.residual = recurrence;
    result.true_residual = norm2(residual(A, b, result.x));
    result.converged = kind == EventKind::Converged;
    result.trace.events.push_back({kind, result.iterations, from, from, recurrence,
                                   result.true_residual, std::move(detail)});
    return result;
  };

  while (true) {
    const Vector fresh_r = residual(A, b, result.x);
    const Scalar fresh_norm = norm2(fresh_r);
    if (fresh_norm <= tol) return finish(EventKind::Converged, current, fresh_norm, {});

    const std::size_t remaining = budget - result.iterations;
    if (remaining == 0 || remaining < detail::prologue_cost(current)) {
      return finish(EventKind::Exhausted, current, fresh_norm, "iteration budget exhausted");
    }

    const Vector& shadow =
        (first_segment || plan.shadow == ShadowRestart::Original) ? y : fresh_r;
    SolverState s = handoff(A, b, result.x, shadow, current, cfg);
    if (hook) hook(s);

    // Run one segment.
    auto end = detail::SegmentEnd::Terminal;
    std::size_t cap = remaining;
    if (const auto* st2 = std::get_if<ST2>(&plan.strategy)) cap = std::min(cap, st2->cycle_len);
    const auto* st3 = std::get_if<ST3>(&plan.strategy);
    while (!s.terminal()) {
      if (s.k >= cap) {
        end = cap == remaining ? detail::SegmentEnd::Budget : detail::SegmentEnd::CycleDone;
        break;
      }
      if (st3 && s.k % st3->check_every == 0) {
        SolverState probe = s;
        step(probe);
        const bool low = std::any_of(
            probe.denominators.begin(), probe.denominators.end(),
            [&](const Denominator& d) { return d.relative() < st3->monitor_threshold; });
        if (low) {
          end = detail::SegmentEnd::Monitor;
          break;
        }
        s = std::move(probe);
      } else {
        step(s);
      }
      if (hook) hook(s);
    }

    const std::size_t used = s.k;
    result.iterations += used;
    result.x = s.x;
    const Scalar recurrence = norm2(s.r);

    const bool stalled = used == 0 && (s.status.breakdown() || end == detail::SegmentEnd::Monitor);
    if (stalled) {
      ++result.failed_handoffs;
      failed_here.push_back(current);
      auto untried = std::find_if(plan.policy.pool.begin(), plan.policy.pool.end(), [&](AlgoId id) {
        return std::find(failed_here.begin(), failed_here.end(), id) == failed_here.end();
      });
      if (untried == plan.policy.pool.end()) {
        return finish(EventKind::Exhausted, current, recurrence,
                      "every pool member breaks down at this iterate");
      }
      current = *untried;
      continue;
    }
    failed_here.clear();
    first_segment = false;

    EventKind kind = EventKind::CycleEnd;
    std::string detail;
    if (s.status.converged()) {
      const Scalar true_norm = norm2(residual(A, b, result.x));
      if (true_norm <= plan.verify_factor * tol) {
        return finish(EventKind::Converged, current, recurrence, {});
      }
      detail = "recurrence residual not confirmed";
    } else if (s.status.breakdown()) {
      kind = EventKind::BreakdownSwitch;
      detail = s.status.label;
    } else if (s.status.kind == OutcomeKind::IterLimit || end == detail::SegmentEnd::Budget) {
      return finish(EventKind::Exhausted, current, recurrence, "iteration budget exhausted");
    } else if (end == detail::SegmentEnd::Monitor) {
      kind = EventKind::MonitorSwitch;
    }
    if (result.iterations >= budget) {
      return finish(EventKind::Exhausted, current, recurrence, "iteration budget exhausted");
    }

    const Selection sel = select_next(plan.policy, current, rng);
    if (end == detail::SegmentEnd::CycleDone && kind == EventKind::CycleEnd) kind = sel.kind;
    if (sel.next == current) {
      ++result.restarts;
    } else {
      ++result.switches;
    }
    result.trace.events.push_back({kind, result.iterations, current, sel.next, recurrence,
                                   norm2(residual(A, b, result.x)), std::move(detail)});
    current = sel.next;
  }
}

}  // namespace lanczos
