#pragma once

// Command-line front end. Exit codes:
//   0 success / VALID / winnable
//   1 infeasible / counterexample / not winnable / trace violates
//   2 usage or input error
//   3 budget exceeded

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "reactsyn/benchmark.hpp"
#include "reactsyn/controller.hpp"
#include "reactsyn/errors.hpp"
#include "reactsyn/oracle.hpp"
#include "reactsyn/problem.hpp"
#include "reactsyn/render.hpp"
#include "reactsyn/semantics.hpp"
#include "reactsyn/solver.hpp"
#include "reactsyn/sygus.hpp"

namespace reactsyn {

namespace cli {

enum Exit : int { kOk = 0, kNegative = 1, kUsage = 2, kBudget = 3 };

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

// One row of space-separated indices per step.
inline AdversarySchedule parse_schedule(const std::string& text) {
  AdversarySchedule s;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    std::vector<int> r;
    std::string tok;
    while (row >> tok) {
      try {
        std::size_t used = 0;
        r.push_back(std::stoi(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::logic_error&) {
        throw ParseError("bad schedule entry '" + tok + "'", s.moves.size() + 1, 1);
      }
    }
    s.moves.push_back(std::move(r));
  }
  return s;
}

inline AdversarySchedule random_schedule(const ProblemInstance& p, int steps, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  AdversarySchedule s;
  for (int j = 0; j < steps; ++j) {
    std::vector<int> row;
    for (const auto& o : p.obstacles) {
      row.push_back(std::uniform_int_distribution<int>(0, static_cast<int>(o.primitives.size()) - 1)(rng));
    }
    s.moves.push_back(std::move(row));
  }
  return s;
}

inline void print_counterexample(std::ostream& out, const Counterexample& cx) {
  out << "COUNTEREXAMPLE: " << cx.describe() << "\n" << format_schedule(cx.schedule);
}

}  // namespace cli

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  using namespace cli;
  CLI::App app{"Compile, solve and check reactive motion-planning problems as SyGuS specifications"};
  app.require_subcommand(1);

  std::string problem_path, controller_path, out_path, emit_path, adversary = "worst", method = "bfs";
  int steps = -1, max_steps = -1, max_depth = 4, start_steps = 1;
  double budget_seconds = -1;
  unsigned long long seed = 0;
  bool annotate = false, stats = false, render = false;
  std::string strategy_path;
  BenchmarkConfig bench;

  auto* compile = app.add_subcommand("compile", "Emit the SyGuS specification for a fixed path length");
  compile->add_option("problem", problem_path, "Problem description (JSON)")->required();
  compile->add_option("--steps", steps, "Path length")->required()->check(CLI::NonNegativeNumber);
  compile->add_option("--out", out_path, "Output .sl file (default: stdout)");
  compile->add_flag("--annotate", annotate, "Comment grammar productions");

  auto* solve_cmd = app.add_subcommand("solve", "Synthesize a controller with the built-in enumerative solver");
  solve_cmd->add_option("problem", problem_path, "Problem description (JSON)")->required();
  solve_cmd->add_option("--max-steps", max_steps, "Largest path length to try")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--start-steps", start_steps, "First path length to try")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--max-depth", max_depth, "Program depth cap")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--budget-seconds", budget_seconds, "Wall-clock budget per path length");
  solve_cmd->add_option("--emit-controller", emit_path, "Also write the controller to this file");
  solve_cmd->add_flag("--stats", stats, "Print search statistics");

  auto* validate = app.add_subcommand("validate", "Check a controller against every legal adversary");
  validate->add_option("problem", problem_path, "Problem description (JSON)")->required();
  validate->add_option("controller", controller_path, "Controller define-fun file")->required();
  validate->add_option("--steps", steps, "Path length")->required()->check(CLI::PositiveNumber);
  validate->add_option("--method", method, "bfs or enumerate")->check(CLI::IsMember({"bfs", "enumerate"}));

  auto* oracle = app.add_subcommand("oracle", "Decide winnability by backward induction");
  oracle->add_option("problem", problem_path, "Problem description (JSON)")->required();
  auto* steps_opt = oracle->add_option("--steps", steps, "Exact path length")->check(CLI::NonNegativeNumber);
  auto* max_opt = oracle->add_option("--max-steps", max_steps, "Search lengths 0..L")->check(CLI::NonNegativeNumber);
  steps_opt->excludes(max_opt);
  oracle->add_option("--strategy-out", strategy_path, "Write the step-indexed strategy (with --steps)")->needs(steps_opt);

  auto* trace = app.add_subcommand("trace", "Simulate a controller against one adversary schedule");
  trace->add_option("problem", problem_path, "Problem description (JSON)")->required();
  trace->add_option("controller", controller_path, "Controller define-fun file")->required();
  trace->add_option("--steps", steps, "Path length")->required()->check(CLI::NonNegativeNumber);
  trace->add_option("--adversary", adversary, "worst, random, or file:PATH");
  trace->add_option("--seed", seed, "Seed for --adversary random");
  trace->add_flag("--render", render, "Draw character grids instead of the line trace");

  auto* generate = app.add_subcommand("generate", "Write a generated benchmark problem");
  generate->add_option("--width", bench.width, "Board width")->check(CLI::PositiveNumber);
  generate->add_option("--length", bench.length, "Board length")->check(CLI::PositiveNumber);
  generate->add_option("--obstacles", bench.obstacles, "Number of obstacles")->check(CLI::NonNegativeNumber);
  generate->add_option("--steps", bench.path_length, "Path length the instance is built around")->check(CLI::PositiveNumber);
  generate->add_option("--seed", bench.seed, "Generator seed");
  generate->add_option("--out", out_path, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*generate) {
      const std::string text = serialize_problem(make_benchmark(bench));
      if (out_path.empty()) out << text;
      else write_file(out_path, text);
      return kOk;
    }

    const ProblemInstance problem = parse_problem(read_file(problem_path));

    if (*compile) {
      const SygusDocument doc = emit_spec(problem, steps, EmitOptions{annotate});
      if (out_path.empty()) out << doc.text;
      else write_file(out_path, doc.text);
      return kOk;
    }

    if (*solve_cmd) {
      SolveOptions opts;
      if (max_steps > 0) opts.max_steps = max_steps;
      opts.max_depth = max_depth;
      opts.start_steps = start_steps;
      if (budget_seconds > 0) opts.budget_seconds = budget_seconds;
      const SolveReport report = solve(problem, opts);
      if (!report.result) {
        const int last = report.attempts.empty() ? start_steps - 1 : report.attempts.back().steps;
        out << "infeasible: l=" << start_steps << ".." << last << " depth<=" << max_depth
            << (report.budget_hit() ? " (budget exhausted)" : " exhausted") << "\n";
        if (stats) out << report.stats.summary();
        return report.budget_hit() ? kBudget : kNegative;
      }
      const std::string text = print_controller(report.result->controller(), problem) + "\n";
      out << text;
      if (!emit_path.empty()) write_file(emit_path, text);
      if (stats) out << "path_length=" << report.result->path_length() << "\n" << report.stats.summary();
      return kOk;
    }

    if (*validate) {
      const ControllerAst c = parse_controller(read_file(controller_path), problem);
      VerificationVerdict v;
      if (method == "enumerate") {
        const EnumerationVerdict ev = verify_by_enumeration(problem, c, steps);
        v = ev.verdict;
        if (v.valid()) out << "VALID (" << ev.schedules_checked << " schedules)\n";
      } else {
        v = verify_controller(problem, c, steps);
        if (v.valid()) out << "VALID\n";
      }
      if (v.valid()) return kOk;
      print_counterexample(out, *v.counterexample);
      return kNegative;
    }

    if (*oracle) {
      if (steps >= 0) {
        WinTable table(problem, steps);
        const bool yes = table.winnable();
        out << "winnable l=" << steps << ": " << (yes ? "yes" : "no") << "\n";
        if (yes && !strategy_path.empty()) write_file(strategy_path, StrategyTable(problem, table).to_text());
        return yes ? kOk : kNegative;
      }
      const int bound = max_steps >= 0 ? max_steps : problem.path_length_bound();
      const auto l = minimal_l(problem, bound);
      out << "winnable l<=" << bound << ": " << (l ? "yes" : "no") << "\n";
      if (l) out << "minimal l=" << *l << "\n";
      return l ? kOk : kNegative;
    }

    if (*trace) {
      const ControllerAst c = parse_controller(read_file(controller_path), problem);
      AdversarySchedule sched;
      if (adversary == "worst") {
        // A violating schedule when one exists, else the all-zero schedule.
        sched.moves.assign(static_cast<std::size_t>(steps), std::vector<int>(problem.obstacle_count(), 0));
        if (steps > 0) {
          if (auto v = verify_controller(problem, c, steps); !v.valid()) sched = v.counterexample->schedule;
        }
      } else if (adversary == "random") {
        sched = random_schedule(problem, steps, seed);
      } else if (adversary.rfind("file:", 0) == 0) {
        sched = parse_schedule(read_file(adversary.substr(5)));
      } else {
        err << "unknown adversary '" << adversary << "'\n";
        return kUsage;
      }
      const EpisodeOutcome outcome = run_episode(problem, c, sched, steps);
      out << (render ? render_trace(outcome, problem) : format_trace(outcome, problem.workspace));
      return trace_satisfies(outcome) ? kOk : kNegative;
    }
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace reactsyn
