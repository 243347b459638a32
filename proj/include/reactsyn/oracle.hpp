#pragma once

// Brute-force authority for the exact-length reachability game. Everything
// here goes through the free reference functions (system_step,
// step_no_overlap) rather than the precomputed tables the synthesizer uses.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "reactsyn/controller.hpp"
#include "reactsyn/errors.hpp"
#include "reactsyn/problem.hpp"
#include "reactsyn/semantics.hpp"
#include "reactsyn/solver.hpp"

namespace reactsyn {

struct OracleOptions {
  long long state_budget = 5'000'000;     // (state, step) entries for induction
  long long schedule_budget = 1'000'000;  // schedules for enumeration
  bool exhaustive_states = false;         // every board configuration, not only reachable ones
};

namespace detail {

inline std::vector<std::vector<int>> all_obstacle_tuples(const ProblemInstance& p) {
  std::vector<std::vector<int>> out(1);
  for (const auto& o : p.obstacles) {
    std::vector<std::vector<int>> grown;
    for (const auto& t : out) {
      for (std::size_t q = 0; q < o.primitives.size(); ++q) {
        grown.push_back(t);
        grown.back().push_back(static_cast<int>(q));
      }
    }
    out = std::move(grown);
  }
  return out;
}

inline bool step_is_safe(const ProblemInstance& p, const SystemState& s, int k, const std::vector<int>& tuple) {
  const auto& rp = p.robot.primitives[static_cast<std::size_t>(k)];
  for (std::size_t i = 0; i < p.obstacles.size(); ++i) {
    if (!step_no_overlap(s.robot, rp, s.obstacles[i], p.obstacles[i].primitives[static_cast<std::size_t>(tuple[i])],
                         p.workspace)) {
      return false;
    }
  }
  return true;
}

}  // namespace detail

// Win[j][s]: the robot can force reaching the target exactly at step l from
// state s at step j.
class WinTable {
 public:
  WinTable(const ProblemInstance& p, int steps, const OracleOptions& opts = {}) : problem_(p), steps_(steps) {
    if (steps < 0) throw Error("path length must be non-negative");
    require_valid(p);
    tuples_ = detail::all_obstacle_tuples(p);
    target_ = encode_position(p.robot.target, p.workspace);
    const int m = static_cast<int>(p.robot_move_count());

    levels_.resize(static_cast<std::size_t>(steps) + 1);
    long long entries = 0;
    if (opts.exhaustive_states) {
      long long per_level = 1;
      for (std::size_t a = 0; a <= p.obstacle_count(); ++a) {
        per_level *= p.workspace.cell_count();
        if (per_level * (steps + 1) > opts.state_budget) throw BudgetExceeded("state budget exceeded");
      }
      for (auto& level : levels_) {
        SystemState s{0, std::vector<int>(p.obstacle_count(), 0)};
        do level.add(s);
        while (next_configuration(s, p.workspace.cell_count()));
      }
    } else {
      levels_[0].add(initial_state(p));
      entries = 1;
      for (int j = 0; j < steps; ++j) {
        auto& next = levels_[static_cast<std::size_t>(j) + 1];
        for (const auto& s : levels_[static_cast<std::size_t>(j)].states) {
          for (int k = 0; k < m; ++k) {
            for (const auto& t : tuples_) {
              if (next.add(system_step(s, k, t, p)) && ++entries > opts.state_budget) {
                throw BudgetExceeded("state budget exceeded");
              }
            }
          }
        }
      }
    }

    // Backward induction.
    auto& last = levels_.back();
    last.win.resize(last.states.size());
    for (std::size_t i = 0; i < last.states.size(); ++i) last.win[i] = last.states[i].robot == target_;
    for (int j = steps - 1; j >= 0; --j) {
      auto& level = levels_[static_cast<std::size_t>(j)];
      const auto& succ = levels_[static_cast<std::size_t>(j) + 1];
      level.win.assign(level.states.size(), 0);
      level.best.assign(level.states.size(), -1);
      for (std::size_t i = 0; i < level.states.size(); ++i) {
        const SystemState& s = level.states[i];
        for (int k = 0; k < m && level.best[i] < 0; ++k) {
          bool all = true;
          for (const auto& t : tuples_) {
            if (!detail::step_is_safe(p, s, k, t) || !succ.wins(system_step(s, k, t, p))) {
              all = false;
              break;
            }
          }
          if (all) {
            level.win[i] = 1;
            level.best[i] = k;
          }
        }
      }
    }
  }

  int steps() const noexcept { return steps_; }
  bool winnable() const { return levels_[0].wins(initial_state(problem_)); }
  std::optional<bool> win(int j, const SystemState& s) const {
    const auto& level = levels_.at(static_cast<std::size_t>(j));
    auto it = level.index.find(s);
    if (it == level.index.end()) return std::nullopt;
    return level.win[static_cast<std::size_t>(it->second)] != 0;
  }
  // Least move that keeps every successor winning, for winning states with j < l.
  std::optional<int> best_move(int j, const SystemState& s) const {
    if (j >= steps_) return std::nullopt;
    const auto& level = levels_.at(static_cast<std::size_t>(j));
    auto it = level.index.find(s);
    if (it == level.index.end() || level.best[static_cast<std::size_t>(it->second)] < 0) return std::nullopt;
    return level.best[static_cast<std::size_t>(it->second)];
  }
  long long entry_count() const noexcept {
    long long c = 0;
    for (const auto& l : levels_) c += static_cast<long long>(l.states.size());
    return c;
  }
  const std::vector<SystemState>& states_at(int j) const { return levels_.at(static_cast<std::size_t>(j)).states; }

 private:
  struct Level {
    std::vector<SystemState> states;
    std::unordered_map<SystemState, int, SystemStateHash> index;
    std::vector<char> win;
    std::vector<int> best;

    bool add(const SystemState& s) {
      if (index.count(s)) return false;
      index.emplace(s, static_cast<int>(states.size()));
      states.push_back(s);
      return true;
    }
    bool wins(const SystemState& s) const {
      auto it = index.find(s);
      if (it == index.end()) throw Error("successor state missing from the win table");
      return win[static_cast<std::size_t>(it->second)] != 0;
    }
  };

  static bool next_configuration(SystemState& s, int cells) {
    for (std::size_t i = s.obstacles.size(); i-- > 0;) {
      if (++s.obstacles[i] < cells) return true;
      s.obstacles[i] = 0;
    }
    return ++s.robot < cells;
  }

  ProblemInstance problem_;
  int steps_;
  int target_ = 0;
  std::vector<std::vector<int>> tuples_;
  std::vector<Level> levels_;
};

inline bool winnable(const ProblemInstance& p, int steps, const OracleOptions& opts = {}) {
  return WinTable(p, steps, opts).winnable();
}

// Smallest l in [0, max_steps] that is winnable. Winnability is not monotone
// in l, so every length is tried in turn.
inline std::optional<int> minimal_l(const ProblemInstance& p, int max_steps, const OracleOptions& opts = {}) {
  if (max_steps < 0) throw Error("maximum path length must be non-negative");
  for (int l = 0; l <= max_steps; ++l)
    if (winnable(p, l, opts)) return l;
  return std::nullopt;
}

// Step-indexed strategy defined on the winning states.
class StrategyTable {
 public:
  StrategyTable(const ProblemInstance& p, const WinTable& table) : workspace_(p.workspace), steps_(table.steps()) {
    rows_.resize(static_cast<std::size_t>(steps_));
    for (int j = 0; j < steps_; ++j) {
      for (const auto& s : table.states_at(j)) {
        if (auto k = table.best_move(j, s)) rows_[static_cast<std::size_t>(j)].emplace(s, *k);
      }
    }
  }

  int steps() const noexcept { return steps_; }
  std::optional<int> move(int j, const SystemState& s) const {
    const auto& row = rows_.at(static_cast<std::size_t>(j));
    auto it = row.find(s);
    if (it == row.end()) return std::nullopt;
    return it->second;
  }
  std::size_t size() const noexcept {
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.size();
    return n;
  }

  // "j robot=(x,y) obstacles=[(x,y),...] -> k", sorted for stable output.
  std::string to_text() const {
    std::vector<std::string> lines;
    auto coord = [&](int s) {
      const Coord c = decode_position(s, workspace_);
      return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
    };
    for (int j = 0; j < steps_; ++j) {
      std::vector<std::pair<std::string, int>> row;
      for (const auto& [s, k] : rows_[static_cast<std::size_t>(j)]) {
        std::string line = std::to_string(j) + " robot=" + coord(s.robot) + " obstacles=[";
        for (std::size_t i = 0; i < s.obstacles.size(); ++i) line += (i ? "," : "") + coord(s.obstacles[i]);
        row.emplace_back(line + "] -> " + std::to_string(k), 0);
      }
      std::sort(row.begin(), row.end());
      for (auto& r : row) lines.push_back(std::move(r.first));
    }
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
  }

 private:
  Workspace workspace_;
  int steps_;
  std::vector<std::unordered_map<SystemState, int, SystemStateHash>> rows_;
};

inline StrategyTable extract_strategy(const ProblemInstance& p, int steps, const OracleOptions& opts = {}) {
  WinTable table(p, steps, opts);
  if (!table.winnable()) throw Error("no winning strategy exists for this path length");
  return StrategyTable(p, table);
}

// ---------------------------------------------------------------------------
// Schedule enumeration

struct EnumerationVerdict {
  VerificationVerdict verdict;
  long long schedules_checked = 0;
};

namespace detail {

// Reference episode built only from system_step and step_no_overlap.
inline std::optional<Counterexample> reference_run(const ProblemInstance& p, const ControllerAst& c,
                                                   const AdversarySchedule& sched, int steps) {
  SystemState s = initial_state(p);
  for (int j = 0; j < steps; ++j) {
    const int k = eval_controller(c, s, p.workspace);
    const auto& row = sched.moves[static_cast<std::size_t>(j)];
    const auto& rp = p.robot.primitives[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < p.obstacles.size(); ++i) {
      if (!step_no_overlap(s.robot, rp, s.obstacles[i], p.obstacles[i].primitives[static_cast<std::size_t>(row[i])],
                           p.workspace)) {
        return Counterexample{sched, j + 1, ViolationCause::Collision, static_cast<int>(i)};
      }
    }
    s = system_step(s, k, row, p);
  }
  if (s.robot != encode_position(p.robot.target, p.workspace)) {
    return Counterexample{sched, steps, ViolationCause::WrongFinalPosition, -1};
  }
  return std::nullopt;
}

}  // namespace detail

// Runs every adversary schedule in lexicographic order (step-major, last
// obstacle fastest) and reports the first failure.
inline EnumerationVerdict verify_by_enumeration(const ProblemInstance& p, const ControllerAst& c, int steps,
                                                const OracleOptions& opts = {}) {
  require_valid(p);
  if (auto errors = check_well_formed(c, GrammarShape::of(p)); !errors.empty()) {
    throw Error("controller is not well formed: " + errors.front());
  }
  long double total = 1;
  for (int j = 0; j < steps; ++j)
    for (const auto& o : p.obstacles) total *= static_cast<long double>(o.primitives.size());
  if (total > static_cast<long double>(opts.schedule_budget)) throw BudgetExceeded("schedule budget exceeded");

  const std::size_t n = p.obstacle_count();
  AdversarySchedule sched;
  sched.moves.assign(static_cast<std::size_t>(steps), std::vector<int>(n, 0));
  EnumerationVerdict out;
  while (true) {
    ++out.schedules_checked;
    if (auto cx = detail::reference_run(p, c, sched, steps)) {
      out.verdict.counterexample = std::move(cx);
      return out;
    }
    // odometer over (step, obstacle), last entry fastest
    bool advanced = false;
    for (std::size_t flat = static_cast<std::size_t>(steps) * n; flat-- > 0;) {
      const std::size_t j = flat / n, i = flat % n;
      if (++sched.moves[j][i] < static_cast<int>(p.obstacles[i].primitives.size())) {
        advanced = true;
        break;
      }
      sched.moves[j][i] = 0;
    }
    if (!advanced) return out;
  }
}

}  // namespace reactsyn
