#pragma once

// Reference execution semantics for one step of the system. These functions
// are observationally identical to the helpers written into the emitted
// specification: moves clamp at the board edge, while collision sweeps use
// raw scalar offsets with no clamping.

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "reactsyn/controller.hpp"
#include "reactsyn/errors.hpp"
#include "reactsyn/problem.hpp"
#include "reactsyn/state.hpp"

namespace reactsyn {

// Raw scalar offset of a displacement: dy * width + dx.
inline int scalar_offset(Displacement d, const Workspace& w) noexcept { return d.dy * w.width + d.dx; }

inline int apply_move(int pos, const MotionPrimitive& prim, const Workspace& w) {
  const Coord c = decode_position(pos, w);
  const Coord next{c.x + prim.final_offset.dx, c.y + prim.final_offset.dy};
  if (!w.contains(next)) return pos;
  return pos + scalar_offset(prim.final_offset, w);
}

// Cells touched during one step: current, final, then intermediates, as raw
// scalars. Repeated scalars are listed once.
inline std::vector<int> swept_scalars(int pos, const MotionPrimitive& prim, const Workspace& w) {
  std::vector<int> out;
  auto push = [&](int s) {
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  };
  push(pos);
  push(pos + scalar_offset(prim.final_offset, w));
  for (const auto& d : prim.intermediate) push(pos + scalar_offset(d, w));
  return out;
}

inline bool step_no_overlap(int robot_pos, const MotionPrimitive& robot_prim, int obstacle_pos,
                            const MotionPrimitive& obstacle_prim, const Workspace& w) {
  const auto a = swept_scalars(robot_pos, robot_prim, w);
  const auto b = swept_scalars(obstacle_pos, obstacle_prim, w);
  for (int x : a)
    for (int y : b)
      if (x == y) return false;
  return true;
}

inline SystemState initial_state(const ProblemInstance& p) {
  SystemState s;
  s.robot = encode_position(p.robot.initial, p.workspace);
  for (const auto& o : p.obstacles) s.obstacles.push_back(encode_position(o.initial, p.workspace));
  return s;
}

inline SystemState system_step(const SystemState& s, int robot_move, const std::vector<int>& obstacle_moves,
                               const ProblemInstance& p) {
  if (robot_move < 0 || static_cast<std::size_t>(robot_move) >= p.robot.primitives.size()) {
    throw Error("robot move index " + std::to_string(robot_move) + " out of range");
  }
  if (obstacle_moves.size() != p.obstacles.size() || s.obstacles.size() != p.obstacles.size()) {
    throw Error("obstacle move count does not match the instance");
  }
  SystemState next;
  next.robot = apply_move(s.robot, p.robot.primitives[static_cast<std::size_t>(robot_move)], p.workspace);
  for (std::size_t i = 0; i < p.obstacles.size(); ++i) {
    const auto& prims = p.obstacles[i].primitives;
    if (obstacle_moves[i] < 0 || static_cast<std::size_t>(obstacle_moves[i]) >= prims.size()) {
      throw Error("obstacle " + std::to_string(i) + " move index " + std::to_string(obstacle_moves[i]) +
                  " out of range");
    }
    next.obstacles.push_back(apply_move(s.obstacles[i], prims[static_cast<std::size_t>(obstacle_moves[i])], p.workspace));
  }
  return next;
}

// ---------------------------------------------------------------------------
// Precomputed transition and sweep tables for the synthesizer's inner loops.

class AgentModel {
 public:
  AgentModel(const std::vector<MotionPrimitive>& prims, const Workspace& w)
      : moves_(static_cast<int>(prims.size())) {
    const int cells = w.cell_count();
    next_.resize(static_cast<std::size_t>(cells) * prims.size());
    for (int pos = 0; pos < cells; ++pos)
      for (std::size_t k = 0; k < prims.size(); ++k)
        next_[static_cast<std::size_t>(pos) * prims.size() + k] = apply_move(pos, prims[k], w);
    for (const auto& prim : prims) sweeps_.push_back(swept_scalars(0, prim, w));
  }

  int moves() const noexcept { return moves_; }
  int next(int pos, int k) const noexcept {
    return next_[static_cast<std::size_t>(pos) * static_cast<std::size_t>(moves_) + static_cast<std::size_t>(k)];
  }
  // Sweep offsets relative to the current position.
  const std::vector<int>& sweep(int k) const noexcept { return sweeps_[static_cast<std::size_t>(k)]; }

 private:
  int moves_;
  std::vector<int> next_;
  std::vector<std::vector<int>> sweeps_;
};

class StepModel {
 public:
  explicit StepModel(const ProblemInstance& p)
      : workspace_(p.workspace),
        robot_(p.robot.primitives, p.workspace),
        target_(encode_position(p.robot.target, p.workspace)),
        initial_(initial_state(p)) {
    for (const auto& o : p.obstacles) obstacles_.emplace_back(o.primitives, p.workspace);
  }

  const Workspace& workspace() const noexcept { return workspace_; }
  const AgentModel& robot() const noexcept { return robot_; }
  const AgentModel& obstacle(std::size_t i) const noexcept { return obstacles_[i]; }
  std::size_t obstacle_count() const noexcept { return obstacles_.size(); }
  int target() const noexcept { return target_; }
  const SystemState& initial() const noexcept { return initial_; }

  bool no_overlap(int robot_pos, int robot_move, std::size_t i, int obstacle_pos, int obstacle_move) const noexcept {
    for (int a : robot_.sweep(robot_move))
      for (int b : obstacles_[i].sweep(obstacle_move))
        if (robot_pos + a == obstacle_pos + b) return false;
    return true;
  }

  // Index of the first obstacle that collides with the robot during this step.
  std::optional<std::size_t> first_collision(const SystemState& s, int robot_move,
                                             const std::vector<int>& obstacle_moves) const noexcept {
    for (std::size_t i = 0; i < obstacles_.size(); ++i) {
      if (!no_overlap(s.robot, robot_move, i, s.obstacles[i], obstacle_moves[i])) return i;
    }
    return std::nullopt;
  }

  SystemState advance(const SystemState& s, int robot_move, const std::vector<int>& obstacle_moves) const {
    SystemState next;
    next.robot = robot_.next(s.robot, robot_move);
    next.obstacles.resize(obstacles_.size());
    for (std::size_t i = 0; i < obstacles_.size(); ++i)
      next.obstacles[i] = obstacles_[i].next(s.obstacles[i], obstacle_moves[i]);
    return next;
  }

  // Number of joint obstacle move tuples per step.
  long long tuples_per_step() const noexcept {
    long long t = 1;
    for (const auto& o : obstacles_) t *= o.moves();
    return t;
  }

  // Advances the tuple odometer (last obstacle fastest); false after the last tuple.
  bool next_tuple(std::vector<int>& tuple) const noexcept {
    for (std::size_t i = obstacles_.size(); i-- > 0;) {
      if (++tuple[i] < obstacles_[i].moves()) return true;
      tuple[i] = 0;
    }
    return false;
  }

 private:
  Workspace workspace_;
  AgentModel robot_;
  std::vector<AgentModel> obstacles_;
  int target_;
  SystemState initial_;
};

// ---------------------------------------------------------------------------
// Episodes

// moves[j][i] is obstacle i's primitive index at step j+1.
struct AdversarySchedule {
  std::vector<std::vector<int>> moves;

  std::size_t steps() const noexcept { return moves.size(); }
  friend bool operator==(const AdversarySchedule&, const AdversarySchedule&) = default;
};

inline void check_schedule(const ProblemInstance& p, const AdversarySchedule& sched, int steps) {
  if (sched.steps() != static_cast<std::size_t>(steps)) {
    throw Error("schedule has " + std::to_string(sched.steps()) + " rows, expected " + std::to_string(steps));
  }
  for (std::size_t j = 0; j < sched.moves.size(); ++j) {
    const auto& row = sched.moves[j];
    if (row.size() != p.obstacles.size()) {
      throw Error("schedule row " + std::to_string(j) + " has " + std::to_string(row.size()) +
                  " entries, expected " + std::to_string(p.obstacles.size()));
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] < 0 || static_cast<std::size_t>(row[i]) >= p.obstacles[i].primitives.size()) {
        throw Error("schedule row " + std::to_string(j) + ": obstacle " + std::to_string(i) + " move " +
                    std::to_string(row[i]) + " out of range");
      }
    }
  }
}

struct Collision {
  int step = 0;  // 1-based step whose motion overlaps
  int obstacle = 0;

  friend bool operator==(const Collision&, const Collision&) = default;
};

struct EpisodeOutcome {
  std::vector<int> robot_trace;                  // r_0 .. r_l
  std::vector<std::vector<int>> obstacle_traces;  // per obstacle, o_0 .. o_l
  std::vector<int> robot_moves;                  // move chosen at each of the l steps
  std::vector<std::vector<int>> obstacle_moves;  // schedule rows actually replayed
  std::optional<Collision> first_collision;
  bool reached_target = false;

  int steps() const noexcept { return static_cast<int>(robot_moves.size()); }
  SystemState state_at(int j) const {
    SystemState s{robot_trace[static_cast<std::size_t>(j)], {}};
    for (const auto& t : obstacle_traces) s.obstacles.push_back(t[static_cast<std::size_t>(j)]);
    return s;
  }
};

// A robot policy maps (0-based step, state) to a move index.
template <class F>
concept RobotPolicy = std::invocable<const F&, int, const SystemState&> &&
                      std::convertible_to<std::invoke_result_t<const F&, int, const SystemState&>, int>;

template <RobotPolicy Policy>
EpisodeOutcome run_episode(const StepModel& model, const Policy& policy, const AdversarySchedule& sched, int steps) {
  EpisodeOutcome out;
  SystemState s = model.initial();
  out.robot_trace.push_back(s.robot);
  out.obstacle_traces.resize(model.obstacle_count());
  for (std::size_t i = 0; i < s.obstacles.size(); ++i) out.obstacle_traces[i].push_back(s.obstacles[i]);

  for (int j = 0; j < steps; ++j) {
    const int k = policy(j, s);
    if (k < 0 || k >= model.robot().moves()) throw Error("policy returned move " + std::to_string(k) + " out of range");
    const auto& row = sched.moves[static_cast<std::size_t>(j)];
    if (!out.first_collision) {
      if (auto hit = model.first_collision(s, k, row)) {
        out.first_collision = Collision{j + 1, static_cast<int>(*hit)};
      }
    }
    s = model.advance(s, k, row);
    out.robot_moves.push_back(k);
    out.obstacle_moves.push_back(row);
    out.robot_trace.push_back(s.robot);
    for (std::size_t i = 0; i < s.obstacles.size(); ++i) out.obstacle_traces[i].push_back(s.obstacles[i]);
  }
  out.reached_target = s.robot == model.target();
  return out;
}

inline EpisodeOutcome run_episode(const ProblemInstance& p, const ControllerAst& c, const AdversarySchedule& sched,
                                  int steps) {
  check_schedule(p, sched, steps);
  const StepModel model(p);
  const Workspace w = p.workspace;
  return run_episode(model, [&](int, const SystemState& s) { return eval_controller(c, s, w); }, sched, steps);
}

inline bool trace_satisfies(const EpisodeOutcome& o) noexcept { return o.reached_target && !o.first_collision; }

inline std::string result_line(const EpisodeOutcome& o) {
  if (o.first_collision) {
    return "RESULT: collision@" + std::to_string(o.first_collision->step) +
           ",obstacle=" + std::to_string(o.first_collision->obstacle);
  }
  return o.reached_target ? "RESULT: target" : "RESULT: missed";
}

// One line per instant j = 0..l with the move chosen there, then the RESULT line.
inline std::string format_trace(const EpisodeOutcome& o, const Workspace& w) {
  std::ostringstream os;
  auto coord = [&](int s) {
    // Positions are always on the board; raw sweep cells never appear here.
    const Coord c = decode_position(s, w);
    return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
  };
  for (int j = 0; j <= o.steps(); ++j) {
    os << j << ": robot=" << coord(o.robot_trace[static_cast<std::size_t>(j)]) << " obstacles=[";
    for (std::size_t i = 0; i < o.obstacle_traces.size(); ++i) {
      if (i) os << ',';
      os << coord(o.obstacle_traces[i][static_cast<std::size_t>(j)]);
    }
    os << "] move=";
    if (j < o.steps()) os << o.robot_moves[static_cast<std::size_t>(j)];
    else os << '-';
    os << '\n';
  }
  os << result_line(o) << '\n';
  return os.str();
}

}  // namespace reactsyn
