#pragma once

// Canonical enumeration of controller programs: ascending depth, then
// ascending node count, then lexicographic by production order
//
//   Start:     MoveId 0..m-1, ite
//   StartBool: and, or, not, <=, =
//   CondInt:   get-x p-r, get-y p-r, get-x p-o0, get-y p-o0, ..., +, -, -1, 0..d-1
//
// Atomic comparisons must mention at least one parameter. A comparison of two
// parameter-free terms is a constant and only rebrands a branch, so trees of
// depth 2 or 3 never arise and the smallest conditional program has depth 4.

#include <algorithm>
#include <climits>
#include <cstddef>
#include <functional>
#include <type_traits>
#include <utility>
#include <vector>

#include "reactsyn/controller.hpp"
#include "reactsyn/errors.hpp"

namespace reactsyn {

// Production-index sequence of a tree in preorder; parameter leaves are
// folded into their get-x/get-y production.
inline std::vector<int> canonical_key(NodeSpan nodes, const GrammarShape& g) {
  std::vector<int> key;
  const int slots = g.obstacles + 1;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node n = nodes[i];
    switch (n.kind) {
      case NodeKind::Move: key.push_back(n.value); break;
      case NodeKind::Ite: key.push_back(g.moves); break;
      case NodeKind::And: key.push_back(0); break;
      case NodeKind::Or: key.push_back(1); break;
      case NodeKind::Not: key.push_back(2); break;
      case NodeKind::Le: key.push_back(3); break;
      case NodeKind::Eq: key.push_back(4); break;
      case NodeKind::GetX: key.push_back(2 * nodes[i + 1].value); break;
      case NodeKind::GetY: key.push_back(2 * nodes[i + 1].value + 1); break;
      case NodeKind::Add: key.push_back(2 * slots); break;
      case NodeKind::Sub: key.push_back(2 * slots + 1); break;
      case NodeKind::Const: key.push_back(2 * slots + 2 + n.value + 1); break;
      case NodeKind::Param: break;
    }
  }
  return key;
}

// True when every atomic comparison mentions a parameter.
inline bool comparisons_mention_parameters(NodeSpan nodes) {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].kind != NodeKind::Le && nodes[i].kind != NodeKind::Eq) continue;
    const std::size_t end = subtree_end(nodes, i);
    const bool has_param = std::any_of(nodes.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                       nodes.begin() + static_cast<std::ptrdiff_t>(end),
                                       [](const Node& n) { return n.kind == NodeKind::Param; });
    if (!has_param) return false;
  }
  return true;
}

class CandidateEnumerator {
 public:
  explicit CandidateEnumerator(GrammarShape g) : g_(g) {}

  // Visits every tree of depth <= max_depth once, in canonical order. The
  // visitor receives a view that is only valid during the call and returns
  // false to stop. Returns false iff stopped early.
  template <class Visitor>
  bool for_each(int max_depth, Visitor&& visit) {
    build_tables(max_depth);
    buf_.clear();
    for (int depth = 1; depth <= max_depth; ++depth) {
      const Range r = start_[static_cast<std::size_t>(depth)];
      if (!r.valid()) continue;
      for (int size = r.lo; size <= r.hi; ++size) {
        const bool more = gen_start(size, size, depth, [&](int) {
          const NodeSpan tree(buf_);
          if (ast_depth(tree) != depth) return true;
          if (depth == 2 || depth == 3) throw Error("enumerator produced a program of depth 2 or 3");
          return static_cast<bool>(visit(tree));
        });
        if (!more) return false;
      }
    }
    return true;
  }

  std::vector<ControllerAst> collect(int max_depth, std::size_t limit = SIZE_MAX) {
    std::vector<ControllerAst> out;
    for_each(max_depth, [&](NodeSpan t) {
      out.emplace_back(t);
      return out.size() < limit;
    });
    return out;
  }

 private:
  struct Range {
    int lo = INT_MAX;
    int hi = -1;
    bool valid() const noexcept { return lo <= hi; }
    Range merge(Range o) const noexcept { return {std::min(lo, o.lo), std::max(hi, o.hi)}; }
  };

  // Non-owning callable reference; continuations live on the caller's stack.
  template <class Sig>
  class Cont;
  template <class R, class... A>
  class Cont<R(A...)> {
   public:
    template <class F, class = std::enable_if_t<!std::is_same_v<std::decay_t<F>, Cont>>>
    Cont(F&& f) : obj_(const_cast<void*>(static_cast<const void*>(&f))),  // NOLINT
                  call_([](void* o, A... a) -> R { return (*static_cast<std::remove_reference_t<F>*>(o))(a...); }) {}
    R operator()(A... a) const { return call_(obj_, a...); }

   private:
    void* obj_;
    R (*call_)(void*, A...);
  };

  using SizeCont = Cont<bool(int)>;
  using IntCont = Cont<bool(int, bool)>;

  void build_tables(int max_depth) {
    const auto n = static_cast<std::size_t>(max_depth) + 1;
    start_.assign(n, {});
    bool_.assign(n, {});
    int_.assign(n, {});
    int_need_.assign(n, {});
    for (std::size_t d = 1; d < n; ++d) {
      // CondInt
      Range any{1, 1}, need{};
      if (d >= 2) {
        any = any.merge({2, 2});
        need = need.merge({2, 2});
        const Range a = int_[d - 1], b = int_need_[d - 1];
        if (a.valid()) any = any.merge({1 + 2 * a.lo, 1 + 2 * a.hi});
        if (a.valid() && b.valid()) need = need.merge({1 + a.lo + b.lo, 1 + a.hi + b.hi});
      }
      int_[d] = any;
      int_need_[d] = need;
      // StartBool
      Range bl{};
      if (d >= 2) {
        const Range a = int_[d - 1], b = int_need_[d - 1];
        if (a.valid() && b.valid()) bl = bl.merge({1 + a.lo + b.lo, 1 + a.hi + b.hi});
        const Range c = bool_[d - 1];
        if (c.valid()) bl = bl.merge({1 + c.lo, 1 + c.hi}).merge({1 + 2 * c.lo, 1 + 2 * c.hi});
      }
      bool_[d] = bl;
      // Start
      Range st{1, 1};
      if (d >= 2 && bool_[d - 1].valid()) {
        const Range c = bool_[d - 1], s = start_[d - 1];
        st = st.merge({1 + c.lo + 2 * s.lo, 1 + c.hi + 2 * s.hi});
      }
      start_[d] = st;
    }
  }

  Range int_range(int d, bool need) const {
    return need ? int_need_[static_cast<std::size_t>(d)] : int_[static_cast<std::size_t>(d)];
  }

  // Enumerates a child whose size must fall in [lo, hi], clipped to what
  // depth d can produce.
  static bool clip(int& lo, int& hi, Range r) {
    lo = std::max(lo, r.lo);
    hi = std::min(hi, r.hi);
    return lo <= hi;
  }

  template <class F>
  bool with_node(Node n, F&& body) {
    buf_.push_back(n);
    const bool more = body();
    buf_.pop_back();
    return more;
  }

  bool gen_start(int lo, int hi, int d, SizeCont k) {
    if (d < 1) return true;
    if (lo <= 1 && 1 <= hi) {
      for (int m = 0; m < g_.moves; ++m) {
        if (!with_node({NodeKind::Move, m}, [&] { return k(1); })) return false;
      }
    }
    if (d < 2) return true;
    const Range cr = bool_[static_cast<std::size_t>(d - 1)], sr = start_[static_cast<std::size_t>(d - 1)];
    if (!cr.valid() || !sr.valid()) return true;
    int clo = lo - 1 - 2 * sr.hi, chi = hi - 1 - 2 * sr.lo;
    if (!clip(clo, chi, cr)) return true;
    return with_node({NodeKind::Ite}, [&] {
      return gen_bool(clo, chi, d - 1, [&](int cs) {
        int tlo = lo - 1 - cs - sr.hi, thi = hi - 1 - cs - sr.lo;
        if (!clip(tlo, thi, sr)) return true;
        return gen_start(tlo, thi, d - 1, [&](int ts) {
          int elo = lo - 1 - cs - ts, ehi = hi - 1 - cs - ts;
          if (!clip(elo, ehi, sr)) return true;
          return gen_start(elo, ehi, d - 1, [&](int es) { return k(1 + cs + ts + es); });
        });
      });
    });
  }

  bool gen_bool(int lo, int hi, int d, SizeCont k) {
    if (d < 2) return true;
    const Range br = bool_[static_cast<std::size_t>(d - 1)];
    // and, or
    for (NodeKind op : {NodeKind::And, NodeKind::Or}) {
      if (!br.valid()) break;
      int alo = lo - 1 - br.hi, ahi = hi - 1 - br.lo;
      if (!clip(alo, ahi, br)) continue;
      const bool more = with_node({op}, [&] {
        return gen_bool(alo, ahi, d - 1, [&](int as) {
          int blo = lo - 1 - as, bhi = hi - 1 - as;
          if (!clip(blo, bhi, br)) return true;
          return gen_bool(blo, bhi, d - 1, [&](int bs) { return k(1 + as + bs); });
        });
      });
      if (!more) return false;
    }
    // not
    if (br.valid()) {
      int alo = lo - 1, ahi = hi - 1;
      if (clip(alo, ahi, br)) {
        const bool more = with_node({NodeKind::Not}, [&] {
          return gen_bool(alo, ahi, d - 1, [&](int as) { return k(1 + as); });
        });
        if (!more) return false;
      }
    }
    // <=, =
    const Range any = int_range(d - 1, false), need = int_range(d - 1, true);
    if (!any.valid() || !need.valid()) return true;
    const Range loose = any.merge(need);
    for (NodeKind op : {NodeKind::Le, NodeKind::Eq}) {
      int alo = lo - 1 - loose.hi, ahi = hi - 1 - loose.lo;
      if (!clip(alo, ahi, any)) continue;
      const bool more = with_node({op}, [&] {
        return gen_int(alo, ahi, d - 1, false, [&](int as, bool a_param) {
          int blo = lo - 1 - as, bhi = hi - 1 - as;
          if (!clip(blo, bhi, int_range(d - 1, !a_param))) return true;
          return gen_int(blo, bhi, d - 1, !a_param, [&](int bs, bool) { return k(1 + as + bs); });
        });
      });
      if (!more) return false;
    }
    return true;
  }

  bool gen_int(int lo, int hi, int d, bool need, IntCont k) {
    if (d < 1) return true;
    if (d >= 2 && lo <= 2 && 2 <= hi) {
      for (int slot = 0; slot <= g_.obstacles; ++slot) {
        for (NodeKind acc : {NodeKind::GetX, NodeKind::GetY}) {
          buf_.push_back({acc});
          buf_.push_back({NodeKind::Param, slot});
          const bool more = k(2, true);
          buf_.pop_back();
          buf_.pop_back();
          if (!more) return false;
        }
      }
    }
    if (d >= 2) {
      const Range any = int_range(d - 1, false), nr = int_range(d - 1, true);
      const Range loose = need ? any.merge(nr) : any;
      for (NodeKind op : {NodeKind::Add, NodeKind::Sub}) {
        if (!any.valid()) break;
        int alo = lo - 1 - loose.hi, ahi = hi - 1 - loose.lo;
        if (!clip(alo, ahi, any)) continue;
        const bool more = with_node({op}, [&] {
          return gen_int(alo, ahi, d - 1, false, [&](int as, bool a_param) {
            const bool b_need = need && !a_param;
            int blo = lo - 1 - as, bhi = hi - 1 - as;
            if (!clip(blo, bhi, int_range(d - 1, b_need))) return true;
            return gen_int(blo, bhi, d - 1, b_need,
                           [&](int bs, bool b_param) { return k(1 + as + bs, a_param || b_param); });
          });
        });
        if (!more) return false;
      }
    }
    if (!need && lo <= 1 && 1 <= hi) {
      for (int c = -1; c < g_.max_dimension; ++c) {
        if (!with_node({NodeKind::Const, c}, [&] { return k(1, false); })) return false;
      }
    }
    return true;
  }

  GrammarShape g_;
  std::vector<Node> buf_;
  std::vector<Range> start_, bool_, int_, int_need_;
};

// Every tree of depth <= max_depth, in canonical order.
inline std::vector<ControllerAst> enumerate_candidates(const GrammarShape& g, int max_depth) {
  if (max_depth < 1) throw Error("maximum depth must be at least 1");
  return CandidateEnumerator(g).collect(max_depth);
}

}  // namespace reactsyn
