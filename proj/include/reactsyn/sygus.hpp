#pragma once

// SyGuS-IF (v1) specification emitter and a small evaluator over the
// functions defined in an emitted document.

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "reactsyn/controller.hpp"
#include "reactsyn/errors.hpp"
#include "reactsyn/problem.hpp"
#include "reactsyn/semantics.hpp"
#include "reactsyn/sexpr.hpp"

namespace reactsyn {

// ---------------------------------------------------------------------------
// Term evaluation

using Value = std::variant<long long, bool>;

inline std::string value_text(const Value& v) {
  if (const bool* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  return std::to_string(std::get<long long>(v));
}

struct FunctionDef {
  std::string name;
  std::vector<std::string> params;
  std::vector<std::string> param_sorts;
  std::string sort;
  Sexpr body;
};

class FunctionTable {
 public:
  using Env = std::vector<std::pair<std::string, Value>>;

  // Adds a (define-fun name ((p S) ...) S body) form, replacing any previous one.
  void define(const Sexpr& def) {
    if (def.head() != "define-fun" || def.size() != 5 || !def[1].is_atom() || !def[2].is_list || !def[3].is_atom()) {
      throw ParseError("malformed define-fun", def.line, def.column);
    }
    FunctionDef f;
    f.name = def[1].atom;
    for (const auto& p : def[2].items) {
      if (!p.is_list || p.size() != 2 || !p[0].is_atom() || !p[1].is_atom()) {
        throw ParseError("malformed parameter in " + f.name, p.line, p.column);
      }
      f.params.push_back(p[0].atom);
      f.param_sorts.push_back(p[1].atom);
    }
    f.sort = def[3].atom;
    f.body = def[4];
    defs_[f.name] = std::move(f);
  }
  void define(std::string_view text) { define(parse_sexpr(text)); }

  bool contains(const std::string& name) const { return defs_.count(name) != 0; }
  const FunctionDef& at(const std::string& name) const {
    auto it = defs_.find(name);
    if (it == defs_.end()) throw EvalError("unknown function '" + name + "'");
    return it->second;
  }
  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& [k, _] : defs_) out.push_back(k);
    return out;
  }

  Value call(const std::string& name, const std::vector<Value>& args) const {
    const FunctionDef& f = at(name);
    if (args.size() != f.params.size()) {
      throw EvalError("function '" + name + "' expects " + std::to_string(f.params.size()) + " arguments, got " +
                      std::to_string(args.size()));
    }
    Env env;
    env.reserve(args.size());
    for (std::size_t i = 0; i < args.size(); ++i) env.emplace_back(f.params[i], args[i]);
    return eval(f.body, env);
  }

  Value eval(const Sexpr& e, Env& env) const {
    if (e.is_atom()) {
      if (auto v = e.as_integer()) return *v;
      if (e.atom == "true") return true;
      if (e.atom == "false") return false;
      for (auto it = env.rbegin(); it != env.rend(); ++it)
        if (it->first == e.atom) return it->second;
      throw EvalError("unbound symbol '" + e.atom + "'");
    }
    if (e.items.empty() || !e.items.front().is_atom()) throw EvalError("cannot evaluate '" + e.to_string() + "'");
    const std::string& op = e.items.front().atom;
    const std::size_t argc = e.size() - 1;

    auto int_arg = [&](std::size_t i) {
      Value v = eval(e[i], env);
      if (auto* x = std::get_if<long long>(&v)) return *x;
      throw EvalError("expected an integer in '" + e.to_string() + "'");
    };
    auto bool_arg = [&](std::size_t i) {
      Value v = eval(e[i], env);
      if (auto* x = std::get_if<bool>(&v)) return *x;
      throw EvalError("expected a boolean in '" + e.to_string() + "'");
    };
    auto need = [&](std::size_t n) {
      if (argc != n) throw EvalError("'" + op + "' expects " + std::to_string(n) + " arguments");
    };

    if (op == "ite") {
      need(3);
      return bool_arg(1) ? eval(e[2], env) : eval(e[3], env);
    }
    if (op == "and" || op == "or") {
      const bool is_and = op == "and";
      bool acc = is_and;
      for (std::size_t i = 1; i <= argc; ++i) acc = is_and ? (bool_arg(i) && acc) : (bool_arg(i) || acc);
      return acc;
    }
    if (op == "not") {
      need(1);
      return !bool_arg(1);
    }
    if (op == "=>") {
      need(2);
      const bool a = bool_arg(1);
      return !a || bool_arg(2);
    }
    if (op == "=") {
      need(2);
      Value a = eval(e[1], env), b = eval(e[2], env);
      if (a.index() != b.index()) throw EvalError("sort mismatch in '" + e.to_string() + "'");
      return a == b;
    }
    if (op == "<" || op == "<=" || op == ">" || op == ">=") {
      need(2);
      const long long a = int_arg(1), b = int_arg(2);
      if (op == "<") return a < b;
      if (op == "<=") return a <= b;
      if (op == ">") return a > b;
      return a >= b;
    }
    if (op == "+") {
      long long acc = 0;
      for (std::size_t i = 1; i <= argc; ++i) acc += int_arg(i);
      return acc;
    }
    if (op == "-") {
      if (argc == 0) throw EvalError("'-' needs arguments");
      long long acc = int_arg(1);
      if (argc == 1) return -acc;
      for (std::size_t i = 2; i <= argc; ++i) acc -= int_arg(i);
      return acc;
    }
    if (op == "*") {
      std::size_t symbolic = 0;
      long long acc = 1;
      for (std::size_t i = 1; i <= argc; ++i) {
        if (!e[i].as_integer()) ++symbolic;
        acc *= int_arg(i);
      }
      if (symbolic > 1) throw EvalError("non-linear multiplication in '" + e.to_string() + "'");
      return acc;
    }
    if (op == "let") {
      need(2);
      const std::size_t mark = env.size();
      std::vector<std::pair<std::string, Value>> bound;
      for (const auto& b : e[1].items) {
        // v1 typed binding (name Sort value) or v2 (name value)
        if (!b.is_list || (b.size() != 2 && b.size() != 3) || !b[0].is_atom()) {
          throw EvalError("malformed let binding in '" + e.to_string() + "'");
        }
        bound.emplace_back(b[0].atom, eval(b[b.size() - 1], env));
      }
      for (auto& kv : bound) env.push_back(std::move(kv));
      Value v = eval(e[2], env);
      env.resize(mark);
      return v;
    }
    std::vector<Value> args;
    args.reserve(argc);
    for (std::size_t i = 1; i <= argc; ++i) args.push_back(eval(e[i], env));
    return call(op, args);
  }

 private:
  std::map<std::string, FunctionDef> defs_;
};

// ---------------------------------------------------------------------------
// Documents

struct SygusDocument {
  std::string text;
  FunctionTable functions;
  std::vector<std::string> declared_vars;
  std::optional<Sexpr> synth_fun;
  std::vector<Sexpr> constraints;

  // Parses any document in the emitted dialect and checks that every
  // referenced function is defined.
  static SygusDocument parse(std::string text) {
    SygusDocument doc;
    const auto forms = parse_sexprs(text);
    if (forms.empty() || forms.front().head() != "set-logic") throw ParseError("document must start with set-logic");
    if (forms.back().head() != "check-synth") throw ParseError("document must end with check-synth");
    for (const auto& f : forms) {
      const std::string_view h = f.head();
      if (h == "define-fun") doc.functions.define(f);
      else if (h == "declare-var") {
        if (f.size() != 3 || !f[1].is_atom()) throw ParseError("malformed declare-var", f.line, f.column);
        doc.declared_vars.push_back(f[1].atom);
      } else if (h == "synth-fun") doc.synth_fun = f;
      else if (h == "constraint") {
        if (f.size() != 2) throw ParseError("malformed constraint", f.line, f.column);
        doc.constraints.push_back(f[1]);
      } else if (h != "set-logic" && h != "check-synth") {
        throw ParseError("unsupported command '" + std::string(h) + "'", f.line, f.column);
      }
    }
    doc.text = std::move(text);
    doc.check_references();
    return doc;
  }

  std::string synth_name() const { return synth_fun && synth_fun->size() > 1 ? (*synth_fun)[1].atom : std::string(); }

  void check_references() const {
    static const std::set<std::string> builtins = {"ite", "and", "or", "not", "=>", "=", "<", "<=",
                                                   ">", ">=", "+", "-", "*", "let"};
    const std::string synth = synth_name();
    std::vector<const Sexpr*> stack;
    for (const auto& n : functions.names()) stack.push_back(&functions.at(n).body);
    for (const auto& c : constraints) stack.push_back(&c);
    while (!stack.empty()) {
      const Sexpr* e = stack.back();
      stack.pop_back();
      if (!e->is_list || e->items.empty()) continue;
      const Sexpr& head = e->items.front();
      if (head.is_atom() && !builtins.count(head.atom) && head.atom != synth && !functions.contains(head.atom)) {
        throw ParseError("reference to undefined function '" + head.atom + "'", head.line, head.column);
      }
      const std::size_t first = head.is_atom("let") ? 1 : 0;
      if (head.is_atom("let") && e->size() == 3) {
        for (const auto& b : (*e)[1].items)
          if (b.is_list && !b.items.empty()) stack.push_back(&b.items.back());
        stack.push_back(&(*e)[2]);
        continue;
      }
      for (std::size_t i = first; i < e->items.size(); ++i) stack.push_back(&e->items[i]);
    }
  }
};

inline Value eval_defined_function(const SygusDocument& doc, const std::string& name, const std::vector<long long>& args) {
  std::vector<Value> vals(args.begin(), args.end());
  return doc.functions.call(name, vals);
}

// Evaluates the conjunction of all constraints with the synthesized function
// bound to `definition` (a define-fun) and declared variables bound by name.
inline bool eval_constraints(const SygusDocument& doc, std::string_view definition,
                             const std::map<std::string, long long>& vars) {
  FunctionTable table = doc.functions;
  table.define(definition);
  FunctionTable::Env env;
  for (const auto& v : doc.declared_vars) {
    auto it = vars.find(v);
    if (it == vars.end()) throw EvalError("no value for declared variable '" + v + "'");
    env.emplace_back(v, it->second);
  }
  for (const auto& c : doc.constraints) {
    Value r = table.eval(c, env);
    if (!std::get<bool>(r)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Emission

struct EmitOptions {
  bool annotate = false;  // grammar comments in the style of the worked example
};

// Parameter naming and accessor order of the synth-fun header. `Document` names
// the robot currPoint and lists get-y first; `Controller` matches printed
// controllers (p-r, p-oN, get-x first).
enum class GrammarStyle { Document, Controller };

namespace detail {

inline std::string num(long long v) { return std::to_string(v); }

// Right-nested binary conjunction; a single operand is returned as is.
inline std::string right_nested(const char* op, const std::vector<std::string>& parts) {
  if (parts.empty()) return "true";
  std::string out = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) out = "(" + std::string(op) + " " + parts[i] + " " + out + ")";
  return out;
}

inline std::string bound_check(const char* accessor, int delta, int limit) {
  const std::string shifted = "(+ (" + std::string(accessor) + " currPoint) " + num(delta) + ")";
  return "(or (< " + shifted + " 0) (>= " + shifted + " " + num(limit) + "))";
}

inline std::string move_branch(const MotionPrimitive& prim, const Workspace& w) {
  const Displacement d = prim.final_offset;
  if (d.is_zero()) return "currPoint";
  std::string guard;
  if (d.dx != 0 && d.dy != 0) {
    guard = "(or " + bound_check("get-x", d.dx, w.width) + " " + bound_check("get-y", d.dy, w.length) + ")";
  } else if (d.dy != 0) {
    guard = bound_check("get-y", d.dy, w.length);
  } else {
    guard = bound_check("get-x", d.dx, w.width);
  }
  return "(ite " + guard + "     currPoint (+ currPoint  " + num(scalar_offset(d, w)) + "))";
}

inline std::string interpret_move(const std::string& name, const std::vector<MotionPrimitive>& prims,
                                  const Workspace& w) {
  std::string out = "(define-fun " + name + " (( currPoint Int ) ( move Int)) Int\n";
  for (std::size_t k = 0; k < prims.size(); ++k) {
    out += "(ite (= move " + num(static_cast<long long>(k)) + ")  " + move_branch(prims[k], w) + " \n";
  }
  out += "currPoint" + std::string(prims.size() + 1, ')') + "\n";
  return out;
}

// Point count of a sweep in the emitted helpers: current and final cells
// are always listed, even when equal.
inline int sweep_arity(const MotionPrimitive& p) { return 2 + static_cast<int>(p.intermediate.size()); }

inline std::string combination_name(int a, int b) {
  return "no-overlap-one-move-combination-" + num(a) + "-" + num(b);
}

inline std::string combination_helper(int a, int b) {
  std::string out = "(define-fun " + combination_name(a, b) + " (";
  for (int i = 0; i < a + b; ++i) out += std::string(i ? " " : "") + "(p" + num(i) + " Int)";
  out += ") Bool\n\t";
  std::vector<std::string> pairs;
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) pairs.push_back("(not (= p" + num(i) + " p" + num(a + j) + "))");
  return out + right_nested("and", pairs) + ")\n";
}

inline std::string sweep_points(const std::string& var, const MotionPrimitive& p, const Workspace& w) {
  auto point = [&](Displacement d) {
    return "(+ (+ " + var + " " + num(d.dx) + ") " + num(d.dy * w.width) + ")";
  };
  std::string out = var + " " + point(p.final_offset);
  for (const auto& d : p.intermediate) out += " " + point(d);
  return out;
}

inline std::string no_overlaps(std::size_t index, const ProblemInstance& p) {
  const auto& robot = p.robot.primitives;
  const auto& obs = p.obstacles[index].primitives;
  const Workspace& w = p.workspace;
  std::string out = "(define-fun no-overlaps-" + num(static_cast<long long>(index)) +
                    " (( currPoint Int ) ( move Int) (obstacleCurrPoint Int) (obstacleMove Int)) Bool\n\t(= 1\n";
  for (std::size_t k = 0; k < robot.size(); ++k) {
    out += "\t(ite (= move " + num(static_cast<long long>(k)) + ") \n";
    for (std::size_t q = 0; q < obs.size(); ++q) {
      out += "\t\t(ite (= obstacleMove " + num(static_cast<long long>(q)) + ") (ite (" +
             combination_name(sweep_arity(robot[k]), sweep_arity(obs[q])) + " " + sweep_points("currPoint", robot[k], w) +
             " " + sweep_points("obstacleCurrPoint", obs[q], w) + ") 1 0)";
      out += q + 1 < obs.size() ? "\n" : " 0" + std::string(obs.size(), ')');
    }
    out += k + 1 < robot.size() ? "\n" : " 0" + std::string(robot.size(), ')');
  }
  return out + "))\n";
}

}  // namespace detail

// Every helper definition: row/column decoders, clamped move interpreters,
// sweep disequality helpers and the per-step collision predicate.
inline std::string emit_helpers(const ProblemInstance& p) {
  using detail::num;
  const Workspace& w = p.workspace;
  std::string out;

  // get-y as a nested row decoder
  std::string gety = num(w.length - 1);
  for (int y = w.length - 2; y >= 0; --y) {
    gety = "(ite (< currPoint " + num(static_cast<long long>(y + 1) * w.width) + ") " + num(y) + " " + gety + ")";
  }
  out += "(define-fun get-y ((currPoint Int)) Int \n" + gety + ")\n\n";
  out += "(define-fun get-x ((currPoint Int)) Int\n\t(- currPoint (* (get-y currPoint) " + num(w.width) + ")))\n\n";

  out += detail::interpret_move("interpret-move", p.robot.primitives, w) + "\n";
  for (std::size_t i = 0; i < p.obstacles.size(); ++i) {
    out += detail::interpret_move("interpret-move-obstacle-" + num(static_cast<long long>(i)), p.obstacles[i].primitives, w) + "\n";
  }

  std::set<std::pair<int, int>> arities;
  for (const auto& r : p.robot.primitives)
    for (const auto& o : p.obstacles)
      for (const auto& q : o.primitives) arities.emplace(detail::sweep_arity(r), detail::sweep_arity(q));
  for (auto [a, b] : arities) out += detail::combination_helper(a, b) + "\n";

  for (std::size_t i = 0; i < p.obstacles.size(); ++i) out += detail::no_overlaps(i, p) + "\n";

  out += "(define-fun no-overlaps-one-step ((currPoint Int) (move Int)";
  std::vector<std::string> calls;
  for (std::size_t i = 0; i < p.obstacles.size(); ++i) {
    const std::string o = "o" + num(static_cast<long long>(i));
    out += " (" + o + "pos Int) (" + o + "move Int)";
    calls.push_back("(no-overlaps-" + num(static_cast<long long>(i)) + " currPoint move " + o + "pos " + o + "move)");
  }
  out += ") Bool\n\t" + detail::right_nested("and", calls) + ")\n";
  return out;
}

// The synth-fun block: move ids, condition integers and boolean conditions.
inline std::string emit_grammar(const ProblemInstance& p, GrammarStyle style = GrammarStyle::Document,
                                const EmitOptions& opts = {}) {
  using detail::num;
  const bool ctl = style == GrammarStyle::Controller;
  const std::size_t n = p.obstacle_count();
  auto param = [&](std::size_t slot) {
    if (ctl) return slot == 0 ? std::string("p-r") : "p-o" + num(static_cast<long long>(slot - 1));
    return slot == 0 ? std::string("currPoint") : "o" + num(static_cast<long long>(slot - 1));
  };
  auto note = [&](const std::string& s) { return opts.annotate ? " ;" + s : std::string(); };

  std::string out = "(synth-fun move (";
  for (std::size_t s = 0; s <= n; ++s) out += std::string(s ? " " : "") + "(" + param(s) + " Int)";
  out += ") Int\n\t((Start Int (\n\t\tMoveId\n\t\t(ite StartBool Start Start)))\n\t(MoveId Int (\n";
  for (std::size_t k = 0; k < p.robot.primitives.size(); ++k) {
    out += "\t\t" + num(static_cast<long long>(k)) + note("corresponds to " + primitive_name(p.robot.primitives[k])) + "\n";
  }
  out += "\t))\n\t(CondInt Int (\n";
  for (std::size_t s = 0; s <= n; ++s) {
    const std::string who = s == 0 ? "robot" : "obstacle " + num(static_cast<long long>(s - 1));
    const std::string gx = "\t\t(get-x " + param(s) + ")" + note("x coord of " + who) + "\n";
    const std::string gy = "\t\t(get-y " + param(s) + ")" + note("y coord of " + who) + "\n";
    out += ctl ? gx + gy : gy + gx;
  }
  out += "\t\t(+ CondInt CondInt)\n\t\t(- CondInt CondInt)\n";
  const int d = p.workspace.max_dimension();
  for (int c = -1; c < d; ++c) {
    out += "\t\t" + num(c);
    if (c == 0) out += note("0-" + num(d - 1) + " are possible coordinates in space");
    out += "\n";
  }
  out += "\t))\n\t(StartBool Bool ((and StartBool StartBool)\n\t\t(or  StartBool StartBool)\n\t\t(not StartBool)\n"
         "\t\t(<=  CondInt CondInt)\n\t\t(=   CondInt CondInt)))))\n";
  return out;
}

inline std::string move_var(std::size_t obstacle, int step) {
  return "o" + std::to_string(obstacle) + "-mov" + std::to_string(step);
}

inline std::string emit_declarations(const ProblemInstance& p, int steps) {
  std::string out;
  for (std::size_t i = 0; i < p.obstacle_count(); ++i)
    for (int j = 0; j < steps; ++j) out += "(declare-var " + move_var(i, j) + " Int)\n";
  return out;
}

// The single constraint: adversary legality implies reaching the target
// without collision, unrolled over `steps` applications of move.
inline std::string emit_constraint(const ProblemInstance& p, int steps) {
  using detail::num;
  const Workspace& w = p.workspace;
  const std::size_t n = p.obstacle_count();
  const int start = encode_position(p.robot.initial, w);
  const int target = encode_position(p.robot.target, w);
  std::vector<int> obstacle_start;
  for (const auto& o : p.obstacles) obstacle_start.push_back(encode_position(o.initial, w));
  auto obs_pos = [&](std::size_t i, int j) { return "o" + num(static_cast<long long>(i)) + "-pos" + num(j); };

  if (steps == 0) {
    return "(constraint\n\t(let ((pos0 Int " + num(start) + ")) (= pos0 " + num(target) + ")))\n";
  }

  // Robot let-chain and the final condition.
  std::string chain = "(let ((pos0 Int " + num(start) + "))";
  std::size_t opened = 1;
  for (int j = 0; j < steps; ++j) {
    std::string args = "pos" + num(j);
    for (std::size_t i = 0; i < n; ++i) args += " " + (j == 0 ? num(obstacle_start[i]) : obs_pos(i, j));
    chain += " (let ((mov" + num(j) + " Int (move " + args + ")))";
    chain += " (let ((pos" + num(j + 1) + " Int (interpret-move pos" + num(j) + " mov" + num(j) + ")))";
    opened += 2;
  }
  const std::string reach = "(= pos" + num(steps) + " " + num(target) + ")";
  std::string body;
  if (n == 0) {
    body = chain + "\n\n\t" + reach + std::string(opened, ')');
    return "(constraint\n\t" + body + ")\n";
  }

  std::vector<std::string> step_checks;
  for (int j = 0; j < steps; ++j) {
    std::string call = "(no-overlaps-one-step pos" + num(j) + " mov" + num(j);
    for (std::size_t i = 0; i < n; ++i) {
      call += " " + (j == 0 ? num(obstacle_start[i]) : obs_pos(i, j)) + " " + move_var(i, j);
    }
    step_checks.push_back(call + ")");
  }
  body = chain + "\n\n\t(and\n\t\t" + reach + "\n\t\t" + detail::right_nested("and", step_checks) + ")" +
         std::string(opened, ')');

  // Obstacle let-chain: positions 0 .. steps-1.
  std::string obstacles = "(let (";
  for (std::size_t i = 0; i < n; ++i) obstacles += " (" + obs_pos(i, 0) + " Int " + num(obstacle_start[i]) + ")";
  obstacles += ")";
  std::size_t obstacle_lets = 1;
  for (int j = 1; j < steps; ++j) {
    obstacles += " (let (";
    for (std::size_t i = 0; i < n; ++i) {
      obstacles += " (" + obs_pos(i, j) + " Int (interpret-move-obstacle-" + num(static_cast<long long>(i)) + " " +
                   obs_pos(i, j - 1) + " " + move_var(i, j - 1) + "))";
    }
    obstacles += ")";
    ++obstacle_lets;
  }

  std::vector<std::string> allowed;
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < steps; ++j) {
      std::vector<std::string> options;
      for (std::size_t q = 0; q < p.obstacles[i].primitives.size(); ++q)
        options.push_back("(= " + move_var(i, j) + " " + num(static_cast<long long>(q)) + ")");
      allowed.push_back(detail::right_nested("or", options));
    }
  }

  return " (constraint\n\t(or\n\t\t(not " + detail::right_nested("and", allowed) + ")\n\n\t " + obstacles + "\n " + body +
         std::string(obstacle_lets, ')') + "))\n";
}

// Complete specification for a path of exactly `steps` moves.
inline SygusDocument emit_spec(const ProblemInstance& p, int steps, const EmitOptions& opts = {}) {
  require_valid(p);
  if (steps < 0) throw Error("path length must be non-negative");
  std::string text = "(set-logic LIA)\n\n\n";
  text += emit_helpers(p) + "\n\n";
  text += emit_declarations(p, steps) + "\n";
  text += emit_grammar(p, GrammarStyle::Document, opts) + " \n";
  text += emit_constraint(p, steps) + "\n";
  text += "(check-synth)\n";
  return SygusDocument::parse(std::move(text));
}

}  // namespace reactsyn
