#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "reactsyn/enumerate.hpp"
#include "support.hpp"

using namespace reactsyn;
using testing_support::reference_controller;
using testing_support::sample_updown;

namespace {

using Tree = std::vector<Node>;

// Independent generator: all trees of each sort with depth <= d, built by
// plain recursion with no ordering of its own.
struct BruteForce {
  GrammarShape g;

  std::vector<Tree> ints(int d) const {
    std::vector<Tree> out;
    if (d < 1) return out;
    for (int c = -1; c < g.max_dimension; ++c) out.push_back({{NodeKind::Const, c}});
    if (d >= 2) {
      for (int slot = 0; slot <= g.obstacles; ++slot) {
        out.push_back({{NodeKind::GetX}, {NodeKind::Param, slot}});
        out.push_back({{NodeKind::GetY}, {NodeKind::Param, slot}});
      }
      const auto sub = ints(d - 1);
      for (NodeKind op : {NodeKind::Add, NodeKind::Sub})
        for (const auto& a : sub)
          for (const auto& b : sub) out.push_back(join(op, {&a, &b}));
    }
    return out;
  }

  std::vector<Tree> bools(int d) const {
    std::vector<Tree> out;
    if (d < 2) return out;
    const auto args = ints(d - 1);
    for (NodeKind op : {NodeKind::Le, NodeKind::Eq})
      for (const auto& a : args)
        for (const auto& b : args) out.push_back(join(op, {&a, &b}));
    const auto sub = bools(d - 1);
    for (const auto& a : sub) out.push_back(join(NodeKind::Not, {&a}));
    for (NodeKind op : {NodeKind::And, NodeKind::Or})
      for (const auto& a : sub)
        for (const auto& b : sub) out.push_back(join(op, {&a, &b}));
    return out;
  }

  std::vector<Tree> starts(int d) const {
    std::vector<Tree> out;
    if (d < 1) return out;
    for (int k = 0; k < g.moves; ++k) out.push_back({{NodeKind::Move, k}});
    const auto conds = bools(d - 1);
    const auto arms = starts(d - 1);
    for (const auto& c : conds)
      for (const auto& t : arms)
        for (const auto& e : arms) out.push_back(join(NodeKind::Ite, {&c, &t, &e}));
    return out;
  }

  static Tree join(NodeKind op, std::initializer_list<const Tree*> parts) {
    Tree t{{op}};
    for (const Tree* p : parts) t.insert(t.end(), p->begin(), p->end());
    return t;
  }
};

std::vector<Tree> stream(const GrammarShape& g, int depth) {
  std::vector<Tree> out;
  CandidateEnumerator(g).for_each(depth, [&](NodeSpan t) {
    out.emplace_back(t.begin(), t.end());
    return true;
  });
  return out;
}

void expect_canonical(const GrammarShape& g, int depth) {
  auto expected = BruteForce{g}.starts(depth);
  std::erase_if(expected, [](const Tree& t) { return !comparisons_mention_parameters(t); });
  auto rank = [&](const Tree& t) { return std::tuple(ast_depth(t), t.size(), canonical_key(t, g)); };
  std::sort(expected.begin(), expected.end(), [&](const Tree& a, const Tree& b) { return rank(a) < rank(b); });
  const auto got = stream(g, depth);
  ASSERT_EQ(got.size(), expected.size());
  for (std::size_t i = 0; i < got.size(); ++i) ASSERT_EQ(got[i], expected[i]) << "position " << i;
}

}  // namespace

TEST(Enumerator, DepthOneIsTheMoveLeaves) {
  const auto got = stream(GrammarShape::of(sample_updown()), 1);
  ASSERT_EQ(got.size(), 5u);
  for (int k = 0; k < 5; ++k) EXPECT_EQ(got[static_cast<std::size_t>(k)], (Tree{{NodeKind::Move, k}}));
}

TEST(Enumerator, NoProgramsAtDepthTwoOrThree) {
  const auto g = GrammarShape::of(sample_updown());
  EXPECT_EQ(stream(g, 3), stream(g, 1));
  EXPECT_EQ(stream(g, 2), stream(g, 1));
}

TEST(Enumerator, DepthFourContainsReferenceController) {
  const auto g = GrammarShape::of(sample_updown());
  const auto all = stream(g, 4);
  EXPECT_EQ(all.size(), 83405u);
  const ControllerAst c = reference_controller();
  const Tree l3(c.nodes().begin(), c.nodes().end());
  EXPECT_NE(std::find(all.begin(), all.end(), l3), all.end());
}

TEST(Enumerator, StreamIsClosedAndDuplicateFree) {
  const auto g = GrammarShape::of(sample_updown());
  std::set<std::vector<int>> seen;
  for (const auto& t : stream(g, 4)) {
    ASSERT_TRUE(check_well_formed(t, g).empty());
    ASSERT_LE(ast_depth(t), 4);
    ASSERT_TRUE(comparisons_mention_parameters(t));
    ASSERT_TRUE(seen.insert(canonical_key(t, g)).second);
  }
}

TEST(Enumerator, CanonicalOrderMatchesBruteForceSort) {
  expect_canonical({0, 2, 1}, 4);
  expect_canonical({1, 2, 1}, 4);
}

TEST(Enumerator, EarlyStopIsHonoured) {
  CandidateEnumerator e(GrammarShape::of(sample_updown()));
  int n = 0;
  EXPECT_FALSE(e.for_each(4, [&](NodeSpan) { return ++n < 10; }));
  EXPECT_EQ(n, 10);
  EXPECT_EQ(e.collect(4, 7).size(), 7u);
}
