#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace reactsyn {

// Scalar positions of every agent at one instant; arguments of the synthesized function.
struct SystemState {
  int robot = 0;
  std::vector<int> obstacles;

  friend bool operator==(const SystemState&, const SystemState&) = default;
};

struct SystemStateHash {
  std::size_t operator()(const SystemState& s) const noexcept {
    std::size_t h = std::hash<int>{}(s.robot);
    for (int o : s.obstacles) h = h * 1000003u ^ std::hash<int>{}(o);
    return h;
  }
};

}  // namespace reactsyn
