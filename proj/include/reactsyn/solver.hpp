#pragma once

// Built-in synthesizer: CEGIS over the canonical candidate stream, with full
// verification by breadth-first search over reachable system states.

#include <chrono>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "reactsyn/controller.hpp"
#include "reactsyn/enumerate.hpp"
#include "reactsyn/errors.hpp"
#include "reactsyn/problem.hpp"
#include "reactsyn/semantics.hpp"

namespace reactsyn {

enum class ViolationCause { Collision, WrongFinalPosition };

struct Counterexample {
  AdversarySchedule schedule;
  int step = 0;       // 1-based; the path length for a wrong final position
  ViolationCause cause = ViolationCause::WrongFinalPosition;
  int obstacle = -1;  // colliding obstacle, or -1

  std::string describe() const {
    if (cause == ViolationCause::Collision) {
      return "collision at step " + std::to_string(step) + " with obstacle " + std::to_string(obstacle);
    }
    return "wrong final position after step " + std::to_string(step);
  }
};

struct VerificationVerdict {
  std::optional<Counterexample> counterexample;

  bool valid() const noexcept { return !counterexample; }
  static VerificationVerdict ok() { return {}; }
};

inline std::string format_schedule(const AdversarySchedule& s) {
  std::string out;
  for (const auto& row : s.moves) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? " " : "") + std::to_string(row[i]);
    out += '\n';
  }
  return out;
}

namespace detail {

inline std::vector<int> decode_tuple(long long index, const StepModel& m) {
  std::vector<int> t(m.obstacle_count());
  for (std::size_t i = m.obstacle_count(); i-- > 0;) {
    const int base = m.obstacle(i).moves();
    t[i] = static_cast<int>(index % base);
    index /= base;
  }
  return t;
}

}  // namespace detail

// Explores reachable states step by step, branching only on obstacle moves.
// Returns a counterexample for the earliest violating step.
template <RobotPolicy Policy>
VerificationVerdict verify_policy(const StepModel& model, const Policy& policy, int steps) {
  struct Entry {
    SystemState state;
    int parent;
    long long tuple;
  };
  std::vector<std::vector<Entry>> levels(1);
  levels[0].push_back({model.initial(), -1, 0});

  auto schedule_to = [&](int level, int index, std::vector<int> last_row) {
    AdversarySchedule s;
    s.moves.resize(static_cast<std::size_t>(steps), std::vector<int>(model.obstacle_count(), 0));
    s.moves[static_cast<std::size_t>(level)] = std::move(last_row);
    for (int j = level; j > 0; --j) {
      const Entry& e = levels[static_cast<std::size_t>(j)][static_cast<std::size_t>(index)];
      s.moves[static_cast<std::size_t>(j - 1)] = detail::decode_tuple(e.tuple, model);
      index = e.parent;
    }
    return s;
  };

  std::vector<int> tuple(model.obstacle_count());
  for (int j = 0; j < steps; ++j) {
    std::vector<Entry> next;
    std::unordered_map<SystemState, int, SystemStateHash> seen;
    const auto& level = levels[static_cast<std::size_t>(j)];
    for (std::size_t idx = 0; idx < level.size(); ++idx) {
      const SystemState& s = level[idx].state;
      const int k = policy(j, s);
      std::fill(tuple.begin(), tuple.end(), 0);
      long long code = 0;
      do {
        if (auto hit = model.first_collision(s, k, tuple)) {
          Counterexample cx{schedule_to(j, static_cast<int>(idx), tuple), j + 1, ViolationCause::Collision,
                            static_cast<int>(*hit)};
          return {std::move(cx)};
        }
        SystemState succ = model.advance(s, k, tuple);
        if (!seen.count(succ)) {
          seen.emplace(succ, static_cast<int>(next.size()));
          next.push_back({std::move(succ), static_cast<int>(idx), code});
        }
        ++code;
      } while (model.next_tuple(tuple));
    }
    levels.push_back(std::move(next));
  }
  const auto& last = levels.back();
  for (std::size_t idx = 0; idx < last.size(); ++idx) {
    if (last[idx].state.robot != model.target()) {
      AdversarySchedule s;
      s.moves.resize(static_cast<std::size_t>(steps), std::vector<int>(model.obstacle_count(), 0));
      int index = static_cast<int>(idx);
      for (int j = steps; j > 0; --j) {
        const Entry& e = levels[static_cast<std::size_t>(j)][static_cast<std::size_t>(index)];
        s.moves[static_cast<std::size_t>(j - 1)] = detail::decode_tuple(e.tuple, model);
        index = e.parent;
      }
      return {Counterexample{std::move(s), steps, ViolationCause::WrongFinalPosition, -1}};
    }
  }
  return VerificationVerdict::ok();
}

inline VerificationVerdict verify_controller(const StepModel& model, NodeSpan controller, int steps) {
  const Workspace w = model.workspace();
  return verify_policy(model, [&](int, const SystemState& s) { return eval_controller(controller, s, w); }, steps);
}

inline VerificationVerdict verify_controller(const ProblemInstance& p, const ControllerAst& c, int steps) {
  if (auto errors = check_well_formed(c, GrammarShape::of(p)); !errors.empty()) {
    throw Error("controller is not well formed: " + errors.front());
  }
  return verify_controller(StepModel(p), c.nodes(), steps);
}

// ---------------------------------------------------------------------------
// CEGIS

struct SolverStats {
  long long candidates = 0;       // candidates drawn from the stream
  long long full_verifications = 0;
  long long counterexamples = 0;
  double elapsed_seconds = 0;

  std::string summary() const {
    std::ostringstream os;
    os << "candidates=" << candidates << "\nfull_verifications=" << full_verifications
       << "\ncounterexamples=" << counterexamples << "\nelapsed_seconds=" << elapsed_seconds << '\n';
    return os.str();
  }
  void absorb(const SolverStats& o) {
    candidates += o.candidates;
    full_verifications += o.full_verifications;
    counterexamples += o.counterexamples;
    elapsed_seconds += o.elapsed_seconds;
  }
};

enum class SearchStatus { Found, ExhaustedByEnumeration, ExhaustedByBudget };

struct CegisOutcome {
  SearchStatus status = SearchStatus::ExhaustedByEnumeration;
  std::optional<ControllerAst> controller;
  SolverStats stats;
};

struct CegisOptions {
  std::optional<double> budget_seconds;  // wall clock per call
};

namespace detail {

// Replays one stored adversary schedule; true when the candidate survives it.
inline bool survives(const StepModel& model, NodeSpan candidate, const AdversarySchedule& sched, int steps) {
  SystemState s = model.initial();
  for (int j = 0; j < steps; ++j) {
    const int k = eval_controller(candidate, s, model.workspace());
    const auto& row = sched.moves[static_cast<std::size_t>(j)];
    if (model.first_collision(s, k, row)) return false;
    s = model.advance(s, k, row);
  }
  return s.robot == model.target();
}

}  // namespace detail

// First fully valid candidate in canonical order among depth <= max_depth trees.
inline CegisOutcome cegis_solve(const ProblemInstance& p, int steps, int max_depth, const CegisOptions& opts = {}) {
  if (steps < 1) throw Error("path length must be at least 1");
  require_valid(p);
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  const StepModel model(p);
  std::vector<AdversarySchedule> pool;
  CegisOutcome out;

  CandidateEnumerator stream(GrammarShape::of(p));
  stream.for_each(max_depth, [&](NodeSpan candidate) {
    ++out.stats.candidates;
    if (opts.budget_seconds && (out.stats.candidates & 1023) == 0) {
      const std::chrono::duration<double> dt = Clock::now() - t0;
      if (dt.count() > *opts.budget_seconds) {
        out.status = SearchStatus::ExhaustedByBudget;
        return false;
      }
    }
    // Newest counterexamples tend to be the most discriminating.
    for (auto it = pool.rbegin(); it != pool.rend(); ++it) {
      if (!detail::survives(model, candidate, *it, steps)) return true;
    }
    ++out.stats.full_verifications;
    VerificationVerdict v = verify_controller(model, candidate, steps);
    if (v.valid()) {
      out.status = SearchStatus::Found;
      out.controller = ControllerAst(candidate);
      return false;
    }
    ++out.stats.counterexamples;
    pool.push_back(std::move(v.counterexample->schedule));
    return true;
  });
  out.stats.elapsed_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return out;
}

// ---------------------------------------------------------------------------
// Iterative deepening on the path length

class SynthesisResult {
 public:
  // Re-verifies the controller; throws if it does not hold at path_length.
  SynthesisResult(const ProblemInstance& p, ControllerAst controller, int path_length, SolverStats stats)
      : controller_(std::move(controller)), path_length_(path_length), stats_(stats) {
    if (!verify_controller(p, controller_, path_length_).valid()) {
      throw Error("synthesized controller fails verification");
    }
  }

  const ControllerAst& controller() const noexcept { return controller_; }
  int path_length() const noexcept { return path_length_; }
  const SolverStats& stats() const noexcept { return stats_; }

 private:
  ControllerAst controller_;
  int path_length_;
  SolverStats stats_;
};

struct SolveOptions {
  std::optional<int> max_steps;  // defaults to the instance's path-length bound
  int max_depth = 4;
  int start_steps = 1;
  std::optional<double> budget_seconds;  // per path length
};

struct LengthAttempt {
  int steps = 0;
  SearchStatus status = SearchStatus::ExhaustedByEnumeration;
};

struct SolveReport {
  std::optional<SynthesisResult> result;
  std::vector<LengthAttempt> attempts;
  SolverStats stats;

  bool budget_hit() const noexcept {
    for (const auto& a : attempts)
      if (a.status == SearchStatus::ExhaustedByBudget) return true;
    return false;
  }
};

inline SolveReport solve(const ProblemInstance& p, const SolveOptions& opts = {}) {
  require_valid(p);
  const int max_steps = opts.max_steps.value_or(p.path_length_bound());
  if (max_steps < 1) throw Error("maximum path length must be at least 1");
  if (opts.start_steps < 1) throw Error("path-length search starts at 1 or later");
  SolveReport report;
  for (int l = opts.start_steps; l <= max_steps; ++l) {
    CegisOutcome o = cegis_solve(p, l, opts.max_depth, CegisOptions{opts.budget_seconds});
    report.stats.absorb(o.stats);
    report.attempts.push_back({l, o.status});
    if (o.status == SearchStatus::Found) {
      report.result.emplace(p, std::move(*o.controller), l, report.stats);
      break;
    }
  }
  return report;
}

}  // namespace reactsyn
