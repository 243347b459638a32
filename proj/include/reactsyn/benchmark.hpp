#pragma once

// Benchmark generators along the problem-size axes: workspace dimensions,
// obstacle count and path length. (Program depth is a solver setting.)

#include <algorithm>
#include <random>
#include <vector>

#include "reactsyn/errors.hpp"
#include "reactsyn/problem.hpp"

namespace reactsyn {

inline MotionPrimitive unit_move(int dx, int dy) { return MotionPrimitive{{dx, dy}, {}}; }

// stay, up, right, down, left
inline std::vector<MotionPrimitive> four_way_with_stay() {
  return {unit_move(0, 0), unit_move(0, 1), unit_move(1, 0), unit_move(0, -1), unit_move(-1, 0)};
}

struct BenchmarkConfig {
  int width = 20;
  int length = 20;
  int obstacles = 5;
  int path_length = 5;
  unsigned seed = 0;
};

// The robot must travel right then up to a target exactly `path_length`
// unit moves away, so the shortest plan has that length and needs one
// condition on the robot's column. Obstacles oscillate vertically in
// columns the robot never visits.
inline ProblemInstance make_benchmark(const BenchmarkConfig& cfg) {
  if (cfg.path_length < 2) throw Error("benchmark path length must be at least 2");
  const int right = (cfg.path_length + 1) / 2;
  const int up = cfg.path_length - right;
  if (cfg.width < right + 2 || cfg.length < up + 1) {
    throw Error("workspace too small for a path of length " + std::to_string(cfg.path_length));
  }
  std::mt19937 rng(cfg.seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  ProblemInstance p;
  p.workspace = {cfg.width, cfg.length};
  p.robot.initial = {pick(0, cfg.width - 1 - right), pick(0, cfg.length - 1 - up)};
  p.robot.target = {p.robot.initial.x + right, p.robot.initial.y + up};
  p.robot.primitives = four_way_with_stay();

  std::vector<int> free_columns;
  for (int x = 0; x < cfg.width; ++x)
    if (x < p.robot.initial.x || x > p.robot.target.x) free_columns.push_back(x);
  for (int i = 0; i < cfg.obstacles; ++i) {
    ObstacleSpec o;
    o.initial = {free_columns[static_cast<std::size_t>(pick(0, static_cast<int>(free_columns.size()) - 1))],
                 pick(0, cfg.length - 1)};
    o.primitives = {unit_move(0, 1), unit_move(0, -1)};
    p.obstacles.push_back(std::move(o));
  }
  p.max_path_length = cfg.path_length;
  require_valid(p);
  return p;
}

}  // namespace reactsyn
