#pragma once

// Problem model: workspace, agents, motion primitives, the scalar position
// encoding, and the JSON problem-description format.

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "reactsyn/errors.hpp"

namespace reactsyn {

struct Coord {
  int x = 0;
  int y = 0;

  friend bool operator==(const Coord&, const Coord&) = default;
};

struct Displacement {
  int dx = 0;
  int dy = 0;

  bool is_zero() const noexcept { return dx == 0 && dy == 0; }
  friend bool operator==(const Displacement&, const Displacement&) = default;
};

// Relative final displacement plus the relative cells swept on the way.
struct MotionPrimitive {
  Displacement final_offset;
  std::vector<Displacement> intermediate;

  friend bool operator==(const MotionPrimitive&, const MotionPrimitive&) = default;
};

struct Workspace {
  int width = 1;
  int length = 1;

  int cell_count() const noexcept { return width * length; }
  // Longest dimension; grammar constants range over -1 .. max_dimension()-1.
  int max_dimension() const noexcept { return std::max(width, length); }
  bool contains(Coord c) const noexcept {
    return c.x >= 0 && c.x < width && c.y >= 0 && c.y < length;
  }
  bool contains_scalar(long long s) const noexcept { return s >= 0 && s < cell_count(); }

  friend bool operator==(const Workspace&, const Workspace&) = default;
};

struct RobotSpec {
  Coord initial;
  Coord target;
  std::vector<MotionPrimitive> primitives;  // order fixes move indices 0..m-1

  friend bool operator==(const RobotSpec&, const RobotSpec&) = default;
};

struct ObstacleSpec {
  Coord initial;
  std::vector<MotionPrimitive> primitives;

  friend bool operator==(const ObstacleSpec&, const ObstacleSpec&) = default;
};

struct ProblemInstance {
  Workspace workspace;
  RobotSpec robot;
  std::vector<ObstacleSpec> obstacles;
  std::optional<int> max_path_length;

  std::size_t obstacle_count() const noexcept { return obstacles.size(); }
  std::size_t robot_move_count() const noexcept { return robot.primitives.size(); }
  // Upper bound for the path-length search when the document does not give one.
  int path_length_bound() const noexcept {
    return max_path_length.value_or(workspace.width + workspace.length);
  }

  friend bool operator==(const ProblemInstance&, const ProblemInstance&) = default;
};

// ---------------------------------------------------------------------------
// Scalar position encoding: s = y * width + x.

inline int encode_position(Coord c, const Workspace& w) {
  if (!w.contains(c)) {
    throw Error("coordinate (" + std::to_string(c.x) + "," + std::to_string(c.y) +
                ") is outside the " + std::to_string(w.width) + "x" +
                std::to_string(w.length) + " workspace");
  }
  return c.y * w.width + c.x;
}

inline Coord decode_position(long long s, const Workspace& w) {
  if (!w.contains_scalar(s)) {
    throw Error("scalar position " + std::to_string(s) + " is outside [0, " +
                std::to_string(w.cell_count()) + ")");
  }
  const int y = static_cast<int>(s / w.width);
  return Coord{static_cast<int>(s) - y * w.width, y};
}

// ---------------------------------------------------------------------------
// Validation

namespace detail {

inline std::string coord_text(Coord c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

inline void check_primitives(const std::vector<MotionPrimitive>& prims, const Workspace& w,
                             const std::string& owner, std::vector<std::string>& out) {
  if (prims.empty()) {
    out.push_back(owner + " has no primitives");
    return;
  }
  auto spans_board = [&](Displacement d) {
    return std::abs(d.dx) >= w.width || std::abs(d.dy) >= w.length;
  };
  for (std::size_t k = 0; k < prims.size(); ++k) {
    const auto& p = prims[k];
    const std::string name = owner + " primitive " + std::to_string(k);
    if (spans_board(p.final_offset)) out.push_back(name + " displacement exceeds workspace");
    for (std::size_t i = 0; i < p.intermediate.size(); ++i) {
      const auto& d = p.intermediate[i];
      if (spans_board(d)) out.push_back(name + " intermediate cell exceeds workspace");
      if (d.is_zero()) out.push_back(name + " lists the origin as an intermediate cell");
      if (d == p.final_offset) out.push_back(name + " lists its final cell as intermediate");
      for (std::size_t j = 0; j < i; ++j) {
        if (p.intermediate[j] == d) {
          out.push_back(name + " has duplicate intermediate cells");
          break;
        }
      }
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (prims[j] == p) {
        out.push_back(name + " duplicates primitive " + std::to_string(j));
        break;
      }
    }
  }
}

}  // namespace detail

// Empty result means the instance is valid.
inline std::vector<std::string> validate_problem(const ProblemInstance& p) {
  std::vector<std::string> out;
  const Workspace& w = p.workspace;
  if (w.width < 1) out.push_back("workspace width must be positive");
  if (w.length < 1) out.push_back("workspace length must be positive");
  if (!out.empty()) return out;  // nothing else is meaningful without a board

  if (!w.contains(p.robot.initial)) out.push_back("robot initial out of bounds");
  if (!w.contains(p.robot.target)) out.push_back("target out of bounds");
  detail::check_primitives(p.robot.primitives, w, "robot", out);

  for (std::size_t i = 0; i < p.obstacles.size(); ++i) {
    const auto& o = p.obstacles[i];
    const std::string owner = "obstacle " + std::to_string(i);
    if (!w.contains(o.initial)) out.push_back(owner + " initial out of bounds");
    if (o.initial == p.robot.initial) out.push_back("initial collision: " + owner + " starts on the robot");
    detail::check_primitives(o.primitives, w, owner, out);
  }
  if (p.max_path_length && *p.max_path_length < 1) {
    out.push_back("max_path_length must be positive");
  }
  return out;
}

inline void require_valid(const ProblemInstance& p) {
  auto v = validate_problem(p);
  if (!v.empty()) throw ValidationError(std::move(v));
}

// ---------------------------------------------------------------------------
// JSON problem documents

namespace detail {

using Json = nlohmann::ordered_json;

inline const Json& field(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + "." + key, "missing field");
  return *it;
}

inline int as_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<int>();
}

inline std::pair<int, int> as_pair(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw SchemaError(path, "expected a two-element array");
  return {as_int(j[0], path + "[0]"), as_int(j[1], path + "[1]")};
}

inline Coord as_coord(const Json& j, const std::string& path) {
  auto [x, y] = as_pair(j, path);
  return Coord{x, y};
}

inline Displacement as_displacement(const Json& j, const std::string& path) {
  auto [dx, dy] = as_pair(j, path);
  return Displacement{dx, dy};
}

inline std::vector<MotionPrimitive> as_primitives(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  std::vector<MotionPrimitive> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string at = path + "[" + std::to_string(k) + "]";
    MotionPrimitive prim;
    prim.final_offset = as_displacement(field(j[k], "final", at), at + ".final");
    if (auto it = j[k].find("intermediate"); it != j[k].end()) {
      if (!it->is_array()) throw SchemaError(at + ".intermediate", "expected an array");
      for (std::size_t i = 0; i < it->size(); ++i) {
        prim.intermediate.push_back(
            as_displacement((*it)[i], at + ".intermediate[" + std::to_string(i) + "]"));
      }
    }
    out.push_back(std::move(prim));
  }
  return out;
}

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline Json pair_json(int a, int b) { return Json::array({a, b}); }

inline Json primitives_json(const std::vector<MotionPrimitive>& prims) {
  Json arr = Json::array();
  for (const auto& p : prims) {
    Json o;
    o["final"] = pair_json(p.final_offset.dx, p.final_offset.dy);
    if (!p.intermediate.empty()) {
      Json inter = Json::array();
      for (const auto& d : p.intermediate) inter.push_back(pair_json(d.dx, d.dy));
      o["intermediate"] = std::move(inter);
    }
    arr.push_back(std::move(o));
  }
  return arr;
}

}  // namespace detail

// Parses and validates a problem document. Throws ParseError, SchemaError or
// ValidationError.
inline ProblemInstance parse_problem(std::string_view text) {
  using detail::Json;
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    auto [line, col] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("malformed problem document", line, col);
  }
  if (!doc.is_object()) throw SchemaError("$", "expected an object");

  ProblemInstance p;
  const Json& ws = detail::field(doc, "workspace", "$");
  p.workspace.width = detail::as_int(detail::field(ws, "width", "workspace"), "workspace.width");
  p.workspace.length = detail::as_int(detail::field(ws, "length", "workspace"), "workspace.length");

  const Json& robot = detail::field(doc, "robot", "$");
  p.robot.initial = detail::as_coord(detail::field(robot, "initial", "robot"), "robot.initial");
  p.robot.target = detail::as_coord(detail::field(robot, "target", "robot"), "robot.target");
  p.robot.primitives =
      detail::as_primitives(detail::field(robot, "primitives", "robot"), "robot.primitives");

  if (auto it = doc.find("obstacles"); it != doc.end()) {
    if (!it->is_array()) throw SchemaError("obstacles", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string at = "obstacles[" + std::to_string(i) + "]";
      ObstacleSpec o;
      o.initial = detail::as_coord(detail::field((*it)[i], "initial", at), at + ".initial");
      o.primitives =
          detail::as_primitives(detail::field((*it)[i], "primitives", at), at + ".primitives");
      p.obstacles.push_back(std::move(o));
    }
  }
  if (auto it = doc.find("max_path_length"); it != doc.end() && !it->is_null()) {
    p.max_path_length = detail::as_int(*it, "max_path_length");
  }

  require_valid(p);
  return p;
}

inline std::string serialize_problem(const ProblemInstance& p) {
  using detail::Json;
  Json doc;
  doc["workspace"] = {{"width", p.workspace.width}, {"length", p.workspace.length}};
  Json robot;
  robot["initial"] = detail::pair_json(p.robot.initial.x, p.robot.initial.y);
  robot["target"] = detail::pair_json(p.robot.target.x, p.robot.target.y);
  robot["primitives"] = detail::primitives_json(p.robot.primitives);
  doc["robot"] = std::move(robot);
  Json obstacles = Json::array();
  for (const auto& o : p.obstacles) {
    Json jo;
    jo["initial"] = detail::pair_json(o.initial.x, o.initial.y);
    jo["primitives"] = detail::primitives_json(o.primitives);
    obstacles.push_back(std::move(jo));
  }
  doc["obstacles"] = std::move(obstacles);
  if (p.max_path_length) doc["max_path_length"] = *p.max_path_length;
  return doc.dump(2) + "\n";
}

// Human-readable name for a primitive, used in annotations.
inline std::string primitive_name(const MotionPrimitive& p) {
  const auto& d = p.final_offset;
  std::string base;
  if (d == Displacement{0, 0}) base = "no move";
  else if (d == Displacement{0, 1}) base = "up";
  else if (d == Displacement{1, 0}) base = "right";
  else if (d == Displacement{0, -1}) base = "down";
  else if (d == Displacement{-1, 0}) base = "left";
  else base = "move (" + std::to_string(d.dx) + "," + std::to_string(d.dy) + ")";
  if (!p.intermediate.empty()) base += " via " + std::to_string(p.intermediate.size()) + " cells";
  return base;
}

}  // namespace reactsyn
