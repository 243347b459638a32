#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "reactsyn/benchmark.hpp"
#include "reactsyn/controller.hpp"
#include "reactsyn/problem.hpp"

namespace testing_support {

inline std::string data_path(const std::string& name) { return std::string(REACTSYN_TEST_DATA) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline reactsyn::ProblemInstance load(const std::string& name) { return reactsyn::parse_problem(slurp(data_path(name))); }

inline const reactsyn::ProblemInstance& sample_updown() {
  static const auto p = load("sample_updown.json");
  return p;
}

inline const reactsyn::ProblemInstance& sample() {
  static const auto p = load("sample.json");
  return p;
}

inline std::string reference_controller_text() { return slurp(data_path("sample_controller.sl")); }

// (ite (<= (get-x p-r) 3) 2 1)
inline reactsyn::ControllerAst reference_controller() {
  using namespace reactsyn;
  return ite(le(get_x(Param::robot()), constant(3)), move_leaf(2), move_leaf(1));
}

inline reactsyn::MotionPrimitive prim(int dx, int dy, std::vector<reactsyn::Displacement> via = {}) {
  return reactsyn::MotionPrimitive{{dx, dy}, std::move(via)};
}

// Small random instance: every agent gets distinct primitives within
// [-1,1]^2, optionally with one intermediate cell.
inline reactsyn::ProblemInstance random_instance(std::mt19937& rng, int max_side, int max_obstacles, int max_prims,
                                                  bool intermediates = false) {
  using namespace reactsyn;
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  for (;;) {
    ProblemInstance p;
    p.workspace = {pick(1, max_side), pick(1, max_side)};
    auto cell = [&] { return Coord{pick(0, p.workspace.width - 1), pick(0, p.workspace.length - 1)}; };
    auto prims = [&] {
      std::vector<MotionPrimitive> out;
      const int count = pick(1, max_prims);
      for (int tries = 0; static_cast<int>(out.size()) < count && tries < 50; ++tries) {
        const int rx = p.workspace.width > 1 ? 1 : 0, ry = p.workspace.length > 1 ? 1 : 0;
        MotionPrimitive m = prim(pick(-rx, rx), pick(-ry, ry));
        if (intermediates && (m.final_offset.dx != 0 || m.final_offset.dy != 0) && pick(0, 2) == 0) {
          Displacement via{pick(-rx, rx), pick(-ry, ry)};
          if ((via.dx != 0 || via.dy != 0) && !(via == m.final_offset)) m.intermediate.push_back(via);
        }
        bool dup = false;
        for (const auto& q : out) dup = dup || q == m;
        if (!dup) out.push_back(std::move(m));
      }
      return out;
    };
    p.robot.initial = cell();
    p.robot.target = cell();
    p.robot.primitives = prims();
    const int n = pick(0, max_obstacles);
    for (int i = 0; i < n; ++i) p.obstacles.push_back(ObstacleSpec{cell(), prims()});
    if (validate_problem(p).empty()) return p;
  }
}

}  // namespace testing_support
