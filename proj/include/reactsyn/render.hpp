#pragma once

#include <string>
#include <vector>

#include "reactsyn/problem.hpp"
#include "reactsyn/semantics.hpp"

namespace reactsyn {

// Character grids, one per instant, top row is y = length-1.
//   R robot, 0-9 obstacles (index mod 10), T target, X collision cell, . empty
inline std::string render_trace(const EpisodeOutcome& o, const ProblemInstance& p) {
  const Workspace& w = p.workspace;
  const int target = encode_position(p.robot.target, w);
  std::string out;
  for (int j = 0; j <= o.steps(); ++j) {
    std::vector<char> grid(static_cast<std::size_t>(w.cell_count()), '.');
    auto put = [&](int s, char c) {
      if (w.contains_scalar(s)) grid[static_cast<std::size_t>(s)] = c;
    };
    put(target, 'T');
    for (std::size_t i = o.obstacle_traces.size(); i-- > 0;) {
      put(o.obstacle_traces[i][static_cast<std::size_t>(j)], static_cast<char>('0' + i % 10));
    }
    put(o.robot_trace[static_cast<std::size_t>(j)], 'R');
    if (o.first_collision && o.first_collision->step == j) {
      const auto i = static_cast<std::size_t>(o.first_collision->obstacle);
      const auto before = static_cast<std::size_t>(j - 1);
      const auto& rp = p.robot.primitives[static_cast<std::size_t>(o.robot_moves[before])];
      const auto& op = p.obstacles[i].primitives[static_cast<std::size_t>(o.obstacle_moves[before][i])];
      const auto a = swept_scalars(o.robot_trace[before], rp, w);
      const auto b = swept_scalars(o.obstacle_traces[i][before], op, w);
      for (int x : a)
        for (int y : b)
          if (x == y) put(x, 'X');
    }
    out += "step " + std::to_string(j) + ":\n";
    for (int y = w.length - 1; y >= 0; --y) {
      out.append(grid.begin() + y * w.width, grid.begin() + (y + 1) * w.width);
      out += '\n';
    }
  }
  return out + result_line(o) + "\n";
}

}  // namespace reactsyn
