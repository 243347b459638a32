#pragma once

// Controller programs over the move-selection grammar:
//
//   Start     := MoveId | (ite StartBool Start Start)
//   StartBool := (and B B) | (or B B) | (not B) | (<= I I) | (= I I)
//   CondInt   := (get-x P) | (get-y P) | (+ I I) | (- I I) | -1 | 0 .. d-1
//
// Trees are stored as a flat preorder node vector. Parameters are explicit
// leaf nodes below get-x/get-y, which is what the depth measure counts.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "reactsyn/errors.hpp"
#include "reactsyn/problem.hpp"
#include "reactsyn/sexpr.hpp"
#include "reactsyn/state.hpp"

namespace reactsyn {

enum class NodeKind : std::uint8_t {
  Move,   // value = move index
  Ite,
  And,
  Or,
  Not,
  Le,
  Eq,
  GetX,
  GetY,
  Add,
  Sub,
  Const,  // value = literal
  Param,  // value = 0 for the robot, i + 1 for obstacle i
};

struct Node {
  NodeKind kind;
  int value = 0;

  friend bool operator==(const Node&, const Node&) = default;
};

constexpr int arity(NodeKind k) noexcept {
  switch (k) {
    case NodeKind::Ite: return 3;
    case NodeKind::And:
    case NodeKind::Or:
    case NodeKind::Le:
    case NodeKind::Eq:
    case NodeKind::Add:
    case NodeKind::Sub: return 2;
    case NodeKind::Not:
    case NodeKind::GetX:
    case NodeKind::GetY: return 1;
    default: return 0;
  }
}

// Dimensions a controller is checked against: n obstacles, m robot moves,
// constants -1 .. d-1.
struct GrammarShape {
  int obstacles = 0;
  int moves = 1;
  int max_dimension = 1;

  static GrammarShape of(const ProblemInstance& p) {
    return {static_cast<int>(p.obstacle_count()), static_cast<int>(p.robot_move_count()),
            p.workspace.max_dimension()};
  }
};

using NodeSpan = std::span<const Node>;

// Typed fragments used to assemble trees by hand.
struct IntTerm {
  std::vector<Node> nodes;
};
struct BoolTerm {
  std::vector<Node> nodes;
};

struct Param {
  int slot = 0;
  static Param robot() { return {0}; }
  static Param obstacle(int i) { return {i + 1}; }
};

class ControllerAst {
 public:
  ControllerAst() : nodes_{{NodeKind::Move, 0}} {}
  explicit ControllerAst(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}
  explicit ControllerAst(NodeSpan nodes) : nodes_(nodes.begin(), nodes.end()) {}

  NodeSpan nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  friend bool operator==(const ControllerAst&, const ControllerAst&) = default;

 private:
  std::vector<Node> nodes_;
};

// ---------------------------------------------------------------------------
// Builders

inline ControllerAst move_leaf(int index) { return ControllerAst(std::vector<Node>{{NodeKind::Move, index}}); }

namespace detail {
template <class... Parts>
std::vector<Node> concat(Node head, const Parts&... parts) {
  std::vector<Node> out{head};
  (out.insert(out.end(), parts.begin(), parts.end()), ...);
  return out;
}
}  // namespace detail

inline ControllerAst ite(const BoolTerm& c, const ControllerAst& t, const ControllerAst& e) {
  return ControllerAst(detail::concat({NodeKind::Ite}, c.nodes, t.nodes(), e.nodes()));
}
inline BoolTerm land(const BoolTerm& a, const BoolTerm& b) { return {detail::concat({NodeKind::And}, a.nodes, b.nodes)}; }
inline BoolTerm lor(const BoolTerm& a, const BoolTerm& b) { return {detail::concat({NodeKind::Or}, a.nodes, b.nodes)}; }
inline BoolTerm lnot(const BoolTerm& a) { return {detail::concat({NodeKind::Not}, a.nodes)}; }
inline BoolTerm le(const IntTerm& a, const IntTerm& b) { return {detail::concat({NodeKind::Le}, a.nodes, b.nodes)}; }
inline BoolTerm eq(const IntTerm& a, const IntTerm& b) { return {detail::concat({NodeKind::Eq}, a.nodes, b.nodes)}; }
inline IntTerm get_x(Param p) { return {{{NodeKind::GetX}, {NodeKind::Param, p.slot}}}; }
inline IntTerm get_y(Param p) { return {{{NodeKind::GetY}, {NodeKind::Param, p.slot}}}; }
inline IntTerm add(const IntTerm& a, const IntTerm& b) { return {detail::concat({NodeKind::Add}, a.nodes, b.nodes)}; }
inline IntTerm sub(const IntTerm& a, const IntTerm& b) { return {detail::concat({NodeKind::Sub}, a.nodes, b.nodes)}; }
inline IntTerm constant(int c) { return {{{NodeKind::Const, c}}}; }

// ---------------------------------------------------------------------------
// Structure

// One past the last node of the subtree rooted at pos.
inline std::size_t subtree_end(NodeSpan nodes, std::size_t pos) {
  std::size_t pending = 1;
  while (pending > 0) {
    if (pos >= nodes.size()) throw Error("truncated controller tree");
    pending += arity(nodes[pos].kind) - 1;
    ++pos;
  }
  return pos;
}

namespace detail {
inline int depth_at(NodeSpan nodes, std::size_t& pos) {
  const Node n = nodes[pos++];
  int best = 0;
  for (int i = 0; i < arity(n.kind); ++i) best = std::max(best, depth_at(nodes, pos));
  return best + 1;
}
}  // namespace detail

// Leaves (moves, constants, parameters) have depth 1; every application adds one.
inline int ast_depth(NodeSpan nodes) {
  std::size_t pos = 0;
  return detail::depth_at(nodes, pos);
}
inline int ast_depth(const ControllerAst& c) { return ast_depth(c.nodes()); }

namespace detail {

enum class Sort { Start, Bool, Int, Param };

inline void check_at(NodeSpan nodes, std::size_t& pos, Sort expected, const GrammarShape& g,
                     std::vector<std::string>& errors) {
  if (pos >= nodes.size()) {
    errors.push_back("truncated tree");
    return;
  }
  const Node n = nodes[pos++];
  auto children = [&](std::initializer_list<Sort> sorts) {
    for (Sort s : sorts) check_at(nodes, pos, s, g, errors);
  };
  switch (expected) {
    case Sort::Start:
      if (n.kind == NodeKind::Move) {
        if (n.value < 0 || n.value >= g.moves) errors.push_back("move index " + std::to_string(n.value) + " out of range");
      } else if (n.kind == NodeKind::Ite) {
        children({Sort::Bool, Sort::Start, Sort::Start});
      } else {
        errors.push_back("expected a move or ite");
      }
      return;
    case Sort::Bool:
      switch (n.kind) {
        case NodeKind::And:
        case NodeKind::Or: children({Sort::Bool, Sort::Bool}); return;
        case NodeKind::Not: children({Sort::Bool}); return;
        case NodeKind::Le:
        case NodeKind::Eq: children({Sort::Int, Sort::Int}); return;
        default: errors.push_back("expected a boolean condition"); return;
      }
    case Sort::Int:
      switch (n.kind) {
        case NodeKind::GetX:
        case NodeKind::GetY: children({Sort::Param}); return;
        case NodeKind::Add:
        case NodeKind::Sub: children({Sort::Int, Sort::Int}); return;
        case NodeKind::Const:
          if (n.value < -1 || n.value >= g.max_dimension)
            errors.push_back("constant " + std::to_string(n.value) + " outside -1.." + std::to_string(g.max_dimension - 1));
          return;
        default: errors.push_back("expected an integer term"); return;
      }
    case Sort::Param:
      if (n.kind != NodeKind::Param) errors.push_back("expected a parameter");
      else if (n.value < 0 || n.value > g.obstacles) errors.push_back("parameter slot " + std::to_string(n.value) + " out of range");
      return;
  }
}

}  // namespace detail

// Empty result means the tree uses exactly the grammar's productions within shape g.
inline std::vector<std::string> check_well_formed(NodeSpan nodes, const GrammarShape& g) {
  std::vector<std::string> errors;
  std::size_t pos = 0;
  detail::check_at(nodes, pos, detail::Sort::Start, g, errors);
  if (errors.empty() && pos != nodes.size()) errors.push_back("trailing nodes after tree");
  return errors;
}
inline std::vector<std::string> check_well_formed(const ControllerAst& c, const GrammarShape& g) {
  return check_well_formed(c.nodes(), g);
}

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

struct ControllerEval {
  NodeSpan nodes;
  const SystemState& state;
  int width;
  std::size_t pos = 0;

  int scalar(int slot) const {
    return slot == 0 ? state.robot : state.obstacles[static_cast<std::size_t>(slot - 1)];
  }

  long long int_term() {
    const Node n = nodes[pos++];
    switch (n.kind) {
      case NodeKind::Const: return n.value;
      case NodeKind::GetX: {
        const int s = scalar(nodes[pos++].value);
        return s - (s / width) * width;
      }
      case NodeKind::GetY: return scalar(nodes[pos++].value) / width;
      case NodeKind::Add: {
        const long long a = int_term();
        return a + int_term();
      }
      case NodeKind::Sub: {
        const long long a = int_term();
        return a - int_term();
      }
      default: throw Error("malformed integer term");
    }
  }

  bool bool_term() {
    const Node n = nodes[pos++];
    switch (n.kind) {
      case NodeKind::And: {
        const bool a = bool_term();
        return bool_term() && a;
      }
      case NodeKind::Or: {
        const bool a = bool_term();
        return bool_term() || a;
      }
      case NodeKind::Not: return !bool_term();
      case NodeKind::Le: {
        const long long a = int_term();
        return a <= int_term();
      }
      case NodeKind::Eq: {
        const long long a = int_term();
        return a == int_term();
      }
      default: throw Error("malformed boolean term");
    }
  }

  int start() {
    const Node n = nodes[pos++];
    if (n.kind == NodeKind::Move) return n.value;
    if (n.kind != NodeKind::Ite) throw Error("malformed controller");
    if (bool_term()) {
      const int r = start();
      pos = subtree_end(nodes, pos);
      return r;
    }
    pos = subtree_end(nodes, pos);
    return start();
  }
};

}  // namespace detail

// Move index chosen in state s. Total on well-formed trees.
inline int eval_controller(NodeSpan nodes, const SystemState& s, const Workspace& w) {
  detail::ControllerEval ev{nodes, s, w.width};
  return ev.start();
}
inline int eval_controller(const ControllerAst& c, const SystemState& s, const Workspace& w) {
  return eval_controller(c.nodes(), s, w);
}

// ---------------------------------------------------------------------------
// Printing

inline std::string param_name(int slot) {
  return slot == 0 ? std::string("p-r") : "p-o" + std::to_string(slot - 1);
}

namespace detail {

inline void print_at(NodeSpan nodes, std::size_t& pos, std::string& out) {
  const Node n = nodes[pos++];
  auto app = [&](const char* op) {
    out += '(';
    out += op;
    for (int i = 0; i < arity(n.kind); ++i) {
      out += ' ';
      print_at(nodes, pos, out);
    }
    out += ')';
  };
  switch (n.kind) {
    case NodeKind::Move:
    case NodeKind::Const: out += std::to_string(n.value); return;
    case NodeKind::Param: out += param_name(n.value); return;
    case NodeKind::Ite: app("ite"); return;
    case NodeKind::And: app("and"); return;
    case NodeKind::Or: app("or"); return;
    case NodeKind::Not: app("not"); return;
    case NodeKind::Le: app("<="); return;
    case NodeKind::Eq: app("="); return;
    case NodeKind::GetX: app("get-x"); return;
    case NodeKind::GetY: app("get-y"); return;
    case NodeKind::Add: app("+"); return;
    case NodeKind::Sub: app("-"); return;
  }
}

}  // namespace detail

inline std::string print_body(NodeSpan nodes) {
  std::string out;
  std::size_t pos = 0;
  detail::print_at(nodes, pos, out);
  return out;
}

// "(define-fun move ((p-r Int) (p-o0 Int) ...) Int <body>)"
inline std::string print_controller(const ControllerAst& c, std::size_t obstacle_count) {
  std::string out = "(define-fun move ((p-r Int)";
  for (std::size_t i = 0; i < obstacle_count; ++i) out += " (p-o" + std::to_string(i) + " Int)";
  out += ") Int\n    " + print_body(c.nodes()) + ")";
  return out;
}
inline std::string print_controller(const ControllerAst& c, const ProblemInstance& p) {
  return print_controller(c, p.obstacle_count());
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

struct ControllerReader {
  const std::vector<std::string>& params;
  std::vector<Node> out;

  [[noreturn]] void fail(const Sexpr& e, const std::string& msg) const {
    throw ParseError(msg, e.line, e.column);
  }

  void expect_arity(const Sexpr& e, std::size_t args) const {
    if (e.size() != args + 1) {
      fail(e, "operator '" + std::string(e.head()) + "' expects " + std::to_string(args) +
                  " arguments, got " + std::to_string(e.size() - 1));
    }
  }

  void start(const Sexpr& e) {
    if (e.is_atom()) {
      auto v = e.as_integer();
      if (!v) fail(e, "expected a move index, got '" + e.atom + "'");
      out.push_back({NodeKind::Move, static_cast<int>(*v)});
      return;
    }
    if (e.head() != "ite") fail(e, "expected 'ite' or a move index, got '" + e.to_string() + "'");
    expect_arity(e, 3);
    out.push_back({NodeKind::Ite});
    boolean(e[1]);
    start(e[2]);
    start(e[3]);
  }

  void boolean(const Sexpr& e) {
    const std::string_view h = e.head();
    NodeKind k;
    if (h == "and") k = NodeKind::And;
    else if (h == "or") k = NodeKind::Or;
    else if (h == "not") k = NodeKind::Not;
    else if (h == "<=") k = NodeKind::Le;
    else if (h == "=") k = NodeKind::Eq;
    else fail(e, "unknown boolean operator in '" + e.to_string() + "'");
    expect_arity(e, static_cast<std::size_t>(arity(k)));
    out.push_back({k});
    if (k == NodeKind::Le || k == NodeKind::Eq) {
      integer(e[1]);
      integer(e[2]);
    } else {
      for (std::size_t i = 1; i < e.size(); ++i) boolean(e[i]);
    }
  }

  void integer(const Sexpr& e) {
    if (e.is_atom()) {
      auto v = e.as_integer();
      if (!v) fail(e, "unexpected symbol '" + e.atom + "' in integer position");
      out.push_back({NodeKind::Const, static_cast<int>(*v)});
      return;
    }
    const std::string_view h = e.head();
    if (h == "get-x" || h == "get-y") {
      expect_arity(e, 1);
      out.push_back({h == "get-x" ? NodeKind::GetX : NodeKind::GetY});
      const Sexpr& p = e[1];
      auto it = p.is_atom() ? std::find(params.begin(), params.end(), p.atom) : params.end();
      if (it == params.end()) fail(p, "undeclared parameter '" + p.to_string() + "'");
      out.push_back({NodeKind::Param, static_cast<int>(it - params.begin())});
      return;
    }
    if (h == "-" && e.size() == 2) {
      // Unary minus on a literal, as printed by some solvers for -1.
      auto v = e[1].as_integer();
      if (!v) fail(e, "unary minus is only accepted on a literal");
      out.push_back({NodeKind::Const, static_cast<int>(-*v)});
      return;
    }
    if (h == "+" || h == "-") {
      expect_arity(e, 2);
      out.push_back({h == "+" ? NodeKind::Add : NodeKind::Sub});
      integer(e[1]);
      integer(e[2]);
      return;
    }
    fail(e, "unknown integer operator in '" + e.to_string() + "'");
  }
};

}  // namespace detail

// Parses "(define-fun NAME ((a Int) ...) Int BODY)". The first parameter is
// the robot, the i-th following one obstacle i-1, whatever they are called.
inline ControllerAst parse_controller(std::string_view text, const GrammarShape& g) {
  const Sexpr def = parse_sexpr(text);
  if (def.head() != "define-fun" || def.size() != 5) {
    throw ParseError("expected (define-fun name (params) Int body)", def.line, def.column);
  }
  const Sexpr& plist = def[2];
  if (!plist.is_list) throw ParseError("parameter list must be a list", plist.line, plist.column);
  std::vector<std::string> params;
  for (const auto& p : plist.items) {
    if (!p.is_list || p.size() != 2 || !p[0].is_atom() || !p[1].is_atom("Int")) {
      throw ParseError("parameters must be (name Int)", p.line, p.column);
    }
    params.push_back(p[0].atom);
  }
  if (params.size() != static_cast<std::size_t>(g.obstacles) + 1) {
    throw ParseError("controller takes " + std::to_string(params.size()) + " parameters, expected " +
                         std::to_string(g.obstacles + 1),
                     plist.line, plist.column);
  }
  if (!def[3].is_atom("Int")) throw ParseError("controller must return Int", def[3].line, def[3].column);

  detail::ControllerReader reader{params, {}};
  reader.start(def[4]);
  ControllerAst c(std::move(reader.out));
  if (auto errors = check_well_formed(c, g); !errors.empty()) {
    throw ParseError("controller outside the grammar: " + errors.front(), def[4].line, def[4].column);
  }
  return c;
}
inline ControllerAst parse_controller(std::string_view text, const ProblemInstance& p) {
  return parse_controller(text, GrammarShape::of(p));
}

}  // namespace reactsyn
