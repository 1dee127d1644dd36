#pragma once

/// \file lanczos/harness.hpp
/// \brief Batch runs over (problem, combo) cells and table rendering.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "lanczos/matrix_market.hpp"
#include "lanczos/problems.hpp"
#include "lanczos/rng.hpp"
#include "lanczos/solver.hpp"
#include "lanczos/switching.hpp"

namespace lanczos {

struct MatrixFile {
  std::string path;
  std::optional<std::string> rhs_path;
};

using ProblemSource = std::variant<BaheuxSpec, MatrixFile>;

/// A solo algorithm or a switching plan.
using Combo = std::variant<AlgoId, SwitchPlan>;

/// Numbered pairwise pools (6: A4+A12, 7: A4+A5B10, 8: A4+A8B10,
/// 9: A5B10+A8B10) under ST2 with coin-toss selection.
inline SwitchPlan canonical_plan(int algorithm_number) {
  SwitchPlan plan;
  plan.strategy = ST2{20};
  switch (algorithm_number) {
    case 6: plan.policy.pool = {AlgoId::A4, AlgoId::A12}; break;
    case 7: plan.policy.pool = {AlgoId::A4, AlgoId::A5B10}; break;
    case 8: plan.policy.pool = {AlgoId::A4, AlgoId::A8B10}; break;
    case 9: plan.policy.pool = {AlgoId::A5B10, AlgoId::A8B10}; break;
    default: throw std::invalid_argument("canonical plans are numbered 6 to 9");
  }
  return plan;
}

inline std::string combo_label(const Combo& combo) {
  if (const auto* algo = std::get_if<AlgoId>(&combo)) return std::string(to_string(*algo));
  const auto& plan = std::get<SwitchPlan>(combo);
  std::string label;
  for (AlgoId a : plan.policy.pool) {
    if (!label.empty()) label += '+';
    label += to_string(a);
  }
  label += '/';
  label += strategy_name(plan.strategy);
  return label;
}

struct ExperimentConfig {
  std::vector<ProblemSource> problems;
  std::vector<Combo> combos;
  /// Applied to every combo.
  Scalar tol = 1e-13;
  /// Applied to every ST2 plan.
  std::size_t cycle_len = 20;
  std::uint64_t seed = 42;
  std::size_t repeats = 1;
  /// Solo: iteration limit (default 5n). Switching: global budget (default 100n).
  std::optional<std::size_t> budget;

  void validate() const {
    if (problems.empty()) throw std::invalid_argument("experiment: no problems");
    if (combos.empty()) throw std::invalid_argument("experiment: no combos");
    if (!(tol > 0.0) || !std::isfinite(tol)) throw std::invalid_argument("experiment: tol must be > 0");
    if (cycle_len == 0) throw std::invalid_argument("experiment: cycle length must be >= 1");
    if (repeats == 0) throw std::invalid_argument("experiment: repeats must be >= 1");
    if (budget && *budget == 0) throw std::invalid_argument("experiment: budget must be >= 1");
    for (const auto& p : problems) {
      if (const auto* spec = std::get_if<BaheuxSpec>(&p)) spec->validate();
    }
    for (const auto& c : combos) {
      if (const auto* plan = std::get_if<SwitchPlan>(&c)) plan->validate();
    }
  }
};

struct RunRecord {
  std::size_t n = 0;
  /// NaN for problems read from file.
  Scalar delta = std::numeric_limits<Scalar>::quiet_NaN();
  std::string problem;
  std::string combo;
  /// Converged, Breakdown, IterLimit, Exhausted or Error.
  std::string outcome;
  /// Breakdown label or error message.
  std::string detail;
  /// Recurrence residual at termination.
  Scalar residual = std::numeric_limits<Scalar>::quiet_NaN();
  Scalar true_residual = std::numeric_limits<Scalar>::quiet_NaN();
  std::size_t iterations = 0;
  std::size_t switches = 0;
  std::size_t restarts = 0;
  /// Median wall time of the solve over the repeats.
  double seconds = 0.0;
  std::optional<Vector> x;

  [[nodiscard]] bool converged() const noexcept { return outcome == "Converged"; }
};

namespace detail {

inline ProblemInstance load_problem(const ProblemSource& source) {
  return std::visit(overloaded{[](const BaheuxSpec& s) { return gen_baheux(s); },
                               [](const MatrixFile& f) {
                                 return read_matrix_market(f.path, f.rhs_path);
                               }},
                    source);
}

inline double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  return values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

inline RunRecord solve_once(const ProblemInstance& inst, const Combo& combo,
                            const ExperimentConfig& cfg, std::uint64_t cell_seed) {
  const std::size_t n = inst.A.rows();
  const Vector x0 = Vector::zeros(n);
  RunRecord rec;
  if (const auto* algo = std::get_if<AlgoId>(&combo)) {
    SolverConfig sc;
    sc.tol = cfg.tol;
    sc.max_iters = cfg.budget.value_or(5 * n);
    SolverState s = init(*algo, inst.A, inst.b, x0, inst.b, sc);
    while (!s.terminal()) step(s);
    rec.outcome = std::string(to_string(s.status.kind));
    rec.detail = s.status.label;
    rec.residual = norm2(s.r);
    rec.iterations = s.k;
    rec.x = s.x;
  } else {
    SwitchPlan plan = std::get<SwitchPlan>(combo);
    plan.cfg.tol = cfg.tol;
    if (auto* st2 = std::get_if<ST2>(&plan.strategy)) st2->cycle_len = cfg.cycle_len;
    plan.policy.seed = cell_seed;
    if (cfg.budget) plan.global_budget = cfg.budget;
    SwitchResult res = run_switching(inst.A, inst.b, x0, inst.b, plan);
    rec.outcome = res.converged ? "Converged" : "Exhausted";
    if (!res.trace.events.empty()) rec.detail = res.trace.events.back().detail;
    rec.residual = res.residual;
    rec.iterations = res.iterations;
    rec.switches = res.switches;
    rec.restarts = res.restarts;
    rec.x = std::move(res.x);
  }
  rec.true_residual = norm2(residual(inst.A, inst.b, *rec.x));
  return rec;
}

}  // namespace detail

/// Seed handed to the switching engine for cell number \p cell.
inline std::uint64_t cell_seed(std::uint64_t seed, std::size_t cell) {
  return SplitMix64::stream(seed, cell).next();
}

/// Runs every (problem, combo) cell. Problem generation is not timed. A
/// failing cell yields an "Error" record; the batch continues.
inline std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<RunRecord> records;
  std::size_t cell = 0;
  for (const auto& source : cfg.problems) {
    std::optional<ProblemInstance> inst;
    std::string load_error;
    try {
      inst = detail::load_problem(source);
    } catch (const std::exception& e) {
      load_error = e.what();
    }
    for (const auto& combo : cfg.combos) {
      const std::uint64_t seed = cell_seed(cfg.seed, cell++);
      RunRecord rec;
      std::vector<double> times;
      if (!inst) {
        rec.outcome = "Error";
        rec.detail = load_error;
      } else {
        try {
          for (std::size_t rep = 0; rep < cfg.repeats; ++rep) {
            const auto t0 = std::chrono::steady_clock::now();
            RunRecord r = detail::solve_once(*inst, combo, cfg, seed);
            const auto t1 = std::chrono::steady_clock::now();
            times.push_back(std::chrono::duration<double>(t1 - t0).count());
            if (rep == 0) rec = std::move(r);
          }
          rec.seconds = detail::median(times);
        } catch (const std::exception& e) {
          rec = RunRecord{};
          rec.outcome = "Error";
          rec.detail = e.what();
        }
      }
      if (const auto* spec = std::get_if<BaheuxSpec>(&source)) {
        rec.n = spec->n;
        rec.delta = spec->delta;
      } else if (inst) {
        rec.n = inst->A.rows();
      }
      rec.problem = inst ? inst->label : std::get<MatrixFile>(source).path;
      rec.combo = combo_label(combo);
      records.push_back(std::move(rec));
    }
  }
  return records;
}

enum class TableFormat { Csv, Markdown };

/// Five significant digits, scientific; empty for NaN.
inline std::string format_sci(double v) {
  if (std::isnan(v)) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4e", v);
  return buf;
}

inline constexpr std::string_view kCsvHeader =
    "n,delta,combo,outcome,residual,iterations,switches,restarts,seconds";

/// CSV: one row per record. Markdown: one table per delta, rows by n, a
/// (residual, T(s)) column pair per combo.
inline std::string emit_table(const std::vector<RunRecord>& records, TableFormat format) {
  if (records.empty()) throw std::invalid_argument("emit_table: no records");
  std::ostringstream out;
  if (format == TableFormat::Csv) {
    out << kCsvHeader << '\n';
    for (const auto& r : records) {
      out << r.n << ',' << format_sci(r.delta) << ',' << r.combo << ',' << r.outcome << ','
          << format_sci(r.residual) << ',' << r.iterations << ',' << r.switches << ','
          << r.restarts << ',' << format_sci(r.seconds) << '\n';
    }
    return out.str();
  }

  auto first_seen = [](auto&& key_of, const std::vector<RunRecord>& rs) {
    std::vector<std::string> keys;
    for (const auto& r : rs) {
      std::string k = key_of(r);
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(std::move(k));
    }
    return keys;
  };
  const auto delta_key = [](const RunRecord& r) { return format_sci(r.delta); };
  const auto combos = first_seen([](const RunRecord& r) { return r.combo; }, records);

  bool first = true;
  for (const auto& dk : first_seen(delta_key, records)) {
    std::vector<RunRecord> group;
    std::copy_if(records.begin(), records.end(), std::back_inserter(group),
                 [&](const RunRecord& r) { return delta_key(r) == dk; });
    if (!first) out << '\n';
    first = false;
    out << "delta = " << (dk.empty() ? "n/a" : dk) << "\n\n";
    out << "| Dim of Prob |";
    for (const auto& c : combos) out << ' ' << c << " ‖r_k‖ | " << c << " T(s) |";
    out << "\n|---|";
    for (std::size_t i = 0; i < combos.size(); ++i) out << "---|---|";
    out << '\n';
    for (const auto& nk : first_seen([](const RunRecord& r) { return std::to_string(r.n); }, group)) {
      out << "| " << nk << " |";
      for (const auto& c : combos) {
        const auto it = std::find_if(group.begin(), group.end(), [&](const RunRecord& r) {
          return r.combo == c && std::to_string(r.n) == nk;
        });
        if (it == group.end()) {
          out << " - | - |";
          continue;
        }
        out << ' ' << format_sci(it->residual);
        if (!it->converged()) out << " (" << it->outcome << ')';
        out << " | " << format_sci(it->seconds) << " |";
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace lanczos
