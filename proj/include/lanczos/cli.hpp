#pragma once

/// \file lanczos/cli.hpp
/// \brief Command-line front end for run_experiment.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lanczos/harness.hpp"

namespace lanczos {

namespace detail {

inline AlgoId require_algo(const std::string& text) {
  auto algo = parse_algo(text);
  if (!algo) throw std::invalid_argument("unknown algorithm: " + text);
  return *algo;
}

}  // namespace detail

/// Exit codes: 0 all runs converged, 2 some run did not, 1 usage error.
inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  CLI::App app{"Lanczos-type solvers with algorithm switching"};
  std::string problem = "baheux";
  std::vector<std::size_t> dims{100};
  std::vector<double> deltas{0.0};
  std::string solo, strategy, start, rhs, format = "csv", out_path;
  std::vector<std::string> pool;
  std::size_t cycle = 20, check_every = 1, repeats = 1;
  double monitor_threshold = 1e-8, tol = 1e-13;
  std::optional<std::size_t> budget;
  std::uint64_t seed = 42;

  app.add_option("--problem", problem, "baheux or mm:<path>");
  app.add_option("--n", dims, "Baheux dimensions (multiples of 10)")->delimiter(',');
  app.add_option("--delta", deltas, "Baheux delta values")->delimiter(',');
  auto* solo_opt = app.add_option("--solo", solo, "run one algorithm: a4, a12, a5b10, a8b10");
  auto* switch_opt = app.add_option("--switch", strategy, "switching strategy")
                         ->check(CLI::IsMember({"st1", "st2", "st3"}, CLI::ignore_case));
  solo_opt->excludes(switch_opt);
  app.add_option("--pool", pool, "algorithms to switch between")->delimiter(',');
  app.add_option("--start", start, "first algorithm of a switching run");
  app.add_option("--cycle", cycle, "iterations per ST2 cycle")->check(CLI::PositiveNumber);
  app.add_option("--monitor-threshold", monitor_threshold, "ST3 relative denominator threshold");
  app.add_option("--check-every", check_every, "ST3 monitoring interval")->check(CLI::PositiveNumber);
  app.add_option("--rhs", rhs, "right-hand side file for mm problems");
  app.add_option("--tol", tol, "residual tolerance")->check(CLI::PositiveNumber);
  app.add_option("--budget", budget, "iteration budget")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "selection seed");
  app.add_option("--repeats", repeats, "timing repeats")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "csv or md")->check(CLI::IsMember({"csv", "md"}));
  app.add_option("--out", out_path, "write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return 1;
  }

  ExperimentConfig cfg;
  try {
    if (solo.empty() == strategy.empty()) {
      throw std::invalid_argument("exactly one of --solo and --switch is required");
    }
    if (problem == "baheux") {
      for (std::size_t n : dims) {
        for (double d : deltas) cfg.problems.emplace_back(BaheuxSpec{n, d});
      }
    } else if (problem.rfind("mm:", 0) == 0 && problem.size() > 3) {
      std::optional<std::string> rhs_path;
      if (!rhs.empty()) rhs_path = rhs;
      cfg.problems.emplace_back(MatrixFile{problem.substr(3), rhs_path});
    } else {
      throw std::invalid_argument("--problem must be baheux or mm:<path>");
    }

    if (!solo.empty()) {
      cfg.combos.emplace_back(detail::require_algo(solo));
    } else {
      SwitchPlan plan;
      const std::string s = detail::lowercase(strategy);
      if (s == "st1") plan.strategy = ST1{};
      if (s == "st2") plan.strategy = ST2{cycle};
      if (s == "st3") plan.strategy = ST3{monitor_threshold, check_every};
      if (pool.empty()) pool = {"a4", "a12"};
      for (const auto& p : pool) plan.policy.pool.push_back(detail::require_algo(p));
      if (!start.empty()) plan.start = detail::require_algo(start);
      cfg.combos.emplace_back(std::move(plan));
    }
    cfg.tol = tol;
    cfg.cycle_len = cycle;
    cfg.seed = seed;
    cfg.repeats = repeats;
    cfg.budget = budget;
    cfg.validate();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  const auto records = run_experiment(cfg);
  const std::string table =
      emit_table(records, format == "md" ? TableFormat::Markdown : TableFormat::Csv);
  if (out_path.empty()) {
    out << table;
  } else {
    std::ofstream file(out_path);
    if (!file) {
      err << "error: cannot write " << out_path << '\n';
      return 1;
    }
    file << table;
  }
  for (const auto& r : records) {
    if (r.outcome == "Error") err << r.problem << ' ' << r.combo << ": " << r.detail << '\n';
  }
  const bool all = std::all_of(records.begin(), records.end(),
                               [](const RunRecord& r) { return r.converged(); });
  return all ? 0 : 2;
}

}  // namespace lanczos
