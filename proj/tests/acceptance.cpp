// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "reactsyn/benchmark.hpp"
#include "reactsyn/controller.hpp"
#include "reactsyn/enumerate.hpp"
#include "reactsyn/oracle.hpp"
#include "reactsyn/sexpr.hpp"
#include "reactsyn/solver.hpp"
#include "reactsyn/sygus.hpp"

using namespace reactsyn;

namespace {

// Pinned tolerances.
constexpr double kLimitCompileSeconds = 1.0;
constexpr double kLimitReferenceSeconds = 1.0;
constexpr double kLimitSolveSeconds = 60.0;
constexpr double kLimitSoundnessSeconds = 300.0;
constexpr double kLimitScalabilitySeconds = 600.0;
constexpr int kDifferentialProbes = 1000;
constexpr int kSoundnessInstances = 200;
constexpr long long kControllerSchedules = 4096;

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(REACTSYN_TEST_DATA) + "/" + name, std::ios::binary);
  if (!in) throw Error("missing test data " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Verdict {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit_seconds, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v{false, ""};
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (dt > limit_seconds) {
    v.pass = false;
    v.detail += " (over the " + std::to_string(limit_seconds) + " s limit)";
  }
  char timing[32];
  std::snprintf(timing, sizeof timing, "%.3fs", dt);
  std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " [" << v.detail << "; "
            << timing << "]" << std::endl;
  if (!v.pass) ++failures;
}

int pick(std::mt19937& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

MotionPrimitive unit(int dx, int dy) { return MotionPrimitive{{dx, dy}, {}}; }

// Random instance within the given caps; primitives are distinct and fit
// the board.
ProblemInstance random_instance(std::mt19937& rng, int max_side, int max_obstacles, int max_prims, bool via) {
  for (;;) {
    ProblemInstance p;
    p.workspace = {pick(rng, 1, max_side), pick(rng, 1, max_side)};
    const int rx = p.workspace.width > 1 ? 1 : 0, ry = p.workspace.length > 1 ? 1 : 0;
    auto cell = [&] { return Coord{pick(rng, 0, p.workspace.width - 1), pick(rng, 0, p.workspace.length - 1)}; };
    auto prims = [&] {
      std::vector<MotionPrimitive> out;
      const int want = pick(rng, 1, max_prims);
      for (int tries = 0; static_cast<int>(out.size()) < want && tries < 50; ++tries) {
        MotionPrimitive m = unit(pick(rng, -rx, rx), pick(rng, -ry, ry));
        if (via && !m.final_offset.is_zero() && pick(rng, 0, 2) == 0) {
          const Displacement d{pick(rng, -rx, rx), pick(rng, -ry, ry)};
          if (!d.is_zero() && !(d == m.final_offset)) m.intermediate.push_back(d);
        }
        if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(std::move(m));
      }
      return out;
    };
    p.robot = {cell(), cell(), prims()};
    const int n = pick(rng, 0, max_obstacles);
    for (int i = 0; i < n; ++i) p.obstacles.push_back({cell(), prims()});
    if (validate_problem(p).empty()) return p;
  }
}

std::vector<ControllerAst> sample_stream(const GrammarShape& g, int depth, std::size_t count, unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<ControllerAst> out;
  CandidateEnumerator(g).for_each(depth, [&](NodeSpan t) {
    if (out.size() < 5 || rng() % 97 == 0) out.emplace_back(t);
    return out.size() < count;
  });
  return out;
}

}  // namespace

int main() {
  const ProblemInstance sample_updown = parse_problem(slurp("sample_updown.json"));
  const std::string reference = slurp("sample_controller.sl");

  criterion(1, "compile sample_updown --steps 6 is token-identical to the reference document", kLimitCompileSeconds, [&] {
    const auto got = token_stream(emit_spec(sample_updown, 6).text);
    const auto want = token_stream(slurp("sample_updown_l6.sl"));
    std::size_t i = 0;
    while (i < got.size() && i < want.size() && got[i] == want[i]) ++i;
    const bool same = got == want;
    return Verdict{same, std::to_string(got.size()) + " tokens" +
                             (same ? "" : ", first difference at token " + std::to_string(i))};
  });

  criterion(2, "reference controller parses and is valid at l=6 under both verifiers", kLimitReferenceSeconds, [&] {
    const ControllerAst c = parse_controller(reference, sample_updown);
    const bool bfs = verify_controller(sample_updown, c, 6).valid();
    const EnumerationVerdict e = verify_by_enumeration(sample_updown, c, 6);
    return Verdict{bfs && e.verdict.valid() && e.schedules_checked == kControllerSchedules,
                   std::string("bfs=") + (bfs ? "valid" : "counterexample") +
                       " enumeration=" + (e.verdict.valid() ? "valid" : "counterexample") + " over " +
                       std::to_string(e.schedules_checked) + " schedules"};
  });

  criterion(3, "solve sample_updown (max l 10, depth 4) gives l=6, accepted by both verifiers, minimal_l=6",
            kLimitSolveSeconds, [&] {
              SolveOptions opts;
              opts.max_steps = 10;
              opts.max_depth = 4;
              const SolveReport r = solve(sample_updown, opts);
              if (!r.result) return Verdict{false, "no controller found"};
              const auto& c = r.result->controller();
              const int l = r.result->path_length();
              const bool bfs = verify_controller(sample_updown, c, l).valid();
              const bool en = verify_by_enumeration(sample_updown, c, l).verdict.valid();
              const auto ml = minimal_l(sample_updown, 10);
              return Verdict{l == 6 && bfs && en && ml == 6 && ast_depth(c) <= 4,
                             "l=" + std::to_string(l) + " minimal_l=" + (ml ? std::to_string(*ml) : "none") +
                                 " controller " + print_body(c.nodes()) + " candidates=" +
                                 std::to_string(r.stats.candidates)};
            });

  criterion(4, "native vs emitted semantics agree on 1000 probes per function", kLimitSoundnessSeconds, [&] {
    std::mt19937 rng(2024);
    int moves = 0, overlaps = 0, controllers = 0, mismatches = 0;
    while (moves < kDifferentialProbes || overlaps < kDifferentialProbes) {
      const ProblemInstance p = random_instance(rng, 6, 3, 4, true);
      const SygusDocument doc = emit_spec(p, 1);
      for (int k = 0; k < 20; ++k) {
        const int s = pick(rng, 0, p.workspace.cell_count() - 1);
        const int m = pick(rng, 0, static_cast<int>(p.robot.primitives.size()) - 1);
        if (moves < kDifferentialProbes) {
          ++moves;
          const long long e = std::get<long long>(eval_defined_function(doc, "interpret-move", {s, m}));
          if (e != apply_move(s, p.robot.primitives[static_cast<std::size_t>(m)], p.workspace)) ++mismatches;
        }
        if (overlaps < kDifferentialProbes) {
          ++overlaps;
          std::vector<long long> args{s, m};
          bool native = true;
          for (const auto& o : p.obstacles) {
            const int at = pick(rng, 0, p.workspace.cell_count() - 1);
            const int q = pick(rng, 0, static_cast<int>(o.primitives.size()) - 1);
            args.insert(args.end(), {at, q});
            native = native && step_no_overlap(s, p.robot.primitives[static_cast<std::size_t>(m)], at,
                                               o.primitives[static_cast<std::size_t>(q)], p.workspace);
          }
          if (std::get<bool>(eval_defined_function(doc, "no-overlaps-one-step", args)) != native) ++mismatches;
        }
      }
    }
    const SygusDocument doc = emit_spec(sample_updown, 1);
    const auto sample = sample_stream(GrammarShape::of(sample_updown), 5, 100, 5);
    for (const auto& c : sample) {
      FunctionTable table = doc.functions;
      table.define(print_controller(c, sample_updown));
      for (int k = 0; k < kDifferentialProbes / 100; ++k, ++controllers) {
        const SystemState s{pick(rng, 0, 34), {pick(rng, 0, 34), pick(rng, 0, 34)}};
        const Value v = table.call("move", {Value{static_cast<long long>(s.robot)},
                                            Value{static_cast<long long>(s.obstacles[0])},
                                            Value{static_cast<long long>(s.obstacles[1])}});
        if (std::get<long long>(v) != eval_controller(c, s, sample_updown.workspace)) ++mismatches;
      }
    }
    return Verdict{mismatches == 0 && controllers == kDifferentialProbes,
                   "probes interpret-move=" + std::to_string(moves) + " no-overlaps-one-step=" +
                       std::to_string(overlaps) + " controller=" + std::to_string(controllers) +
                       " mismatches=" + std::to_string(mismatches)};
  });

  criterion(5, "soundness sweep over 200 random small instances", kLimitSoundnessSeconds, [&] {
    std::mt19937 rng(7);
    int found = 0, unsolved_winnable = 0, unsound = 0, enum_reject = 0, disagreements = 0, pairs = 0;
    for (int trial = 0; trial < kSoundnessInstances; ++trial) {
      const ProblemInstance p = random_instance(rng, 4, 1, 3, true);
      const int l = pick(rng, 1, 4);
      const CegisOutcome o = cegis_solve(p, l, 4);
      if (o.controller) {
        ++found;
        if (!winnable(p, l)) ++unsound;
        if (!verify_by_enumeration(p, *o.controller, l).verdict.valid()) ++enum_reject;
      } else if (winnable(p, l)) {
        ++unsolved_winnable;  // allowed: the depth cap can exclude every winning controller
      }
      for (const auto& c : sample_stream(GrammarShape::of(p), 4, 20, static_cast<unsigned>(trial))) {
        ++pairs;
        if (verify_controller(p, c, l).valid() != verify_by_enumeration(p, c, l).verdict.valid()) ++disagreements;
      }
    }
    return Verdict{unsound == 0 && enum_reject == 0 && disagreements == 0 && found > 0,
                   "solved=" + std::to_string(found) + "/" + std::to_string(kSoundnessInstances) +
                       " winnable-but-unsolved=" + std::to_string(unsolved_winnable) + " not-winnable=" + std::to_string(unsound) + " enumeration-rejects=" +
                       std::to_string(enum_reject) + " verifier-disagreements=" + std::to_string(disagreements) +
                       "/" + std::to_string(pairs)};
  });

  criterion(6, "depth<=3 stream is exactly the m move leaves; reference controller has depth 4", kLimitReferenceSeconds, [&] {
    const auto g = GrammarShape::of(sample_updown);
    const auto trees = CandidateEnumerator(g).collect(3);
    bool leaves = trees.size() == static_cast<std::size_t>(g.moves);
    for (std::size_t k = 0; leaves && k < trees.size(); ++k) leaves = trees[k] == move_leaf(static_cast<int>(k));
    const int depth = ast_depth(parse_controller(reference, sample_updown));
    return Verdict{leaves && depth == 4,
                   std::to_string(trees.size()) + " programs at depth<=3, reference depth " + std::to_string(depth)};
  });

  criterion(7, "encode/decode bijection for every width, length in [1,10]", kLimitCompileSeconds, [&] {
    long long cells = 0, bad = 0;
    for (int w = 1; w <= 10; ++w) {
      for (int h = 1; h <= 10; ++h) {
        const Workspace ws{w, h};
        std::vector<char> hit(static_cast<std::size_t>(w * h), 0);
        for (int y = 0; y < h; ++y) {
          for (int x = 0; x < w; ++x) {
            ++cells;
            const int s = encode_position({x, y}, ws);
            if (s < 0 || s >= w * h || hit[static_cast<std::size_t>(s)] || !(decode_position(s, ws) == Coord{x, y})) {
              ++bad;
            } else {
              hit[static_cast<std::size_t>(s)] = 1;
            }
          }
        }
      }
    }
    return Verdict{bad == 0, std::to_string(cells) + " cells, " + std::to_string(bad) + " failures"};
  });

  criterion(8, "20x20, 5 obstacles, l=5, depth 4 benchmark solves", kLimitScalabilitySeconds, [&] {
    BenchmarkConfig cfg;  // 20x20, 5 obstacles, path length 5
    const ProblemInstance p = make_benchmark(cfg);
    SolveOptions opts;
    opts.max_depth = 4;
    opts.budget_seconds = kLimitScalabilitySeconds;
    const SolveReport r = solve(p, opts);
    if (!r.result) return Verdict{false, "no controller found"};
    return Verdict{r.result->path_length() == cfg.path_length,
                   "l=" + std::to_string(r.result->path_length()) + " controller " +
                       print_body(r.result->controller().nodes()) + " candidates=" +
                       std::to_string(r.stats.candidates)};
  });

  std::cout << (failures == 0 ? "ALL CRITERIA PASS" : std::to_string(failures) + " CRITERIA FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
