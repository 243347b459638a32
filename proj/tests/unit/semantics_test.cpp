#include <gtest/gtest.h>

#include <random>

#include "reactsyn/render.hpp"
#include "reactsyn/semantics.hpp"
#include "support.hpp"

using namespace reactsyn;
using testing_support::reference_controller;
using testing_support::sample_updown;
using testing_support::prim;

namespace {

const Workspace kW57{5, 7};

AdversarySchedule constant_schedule(int steps, std::vector<int> row) {
  return AdversarySchedule{std::vector<std::vector<int>>(static_cast<std::size_t>(steps), row)};
}

}  // namespace

TEST(StepSemantics, ApplyMoveExamples) {
  EXPECT_EQ(apply_move(6, prim(0, 1), kW57), 11);
  EXPECT_EQ(apply_move(4, prim(1, 0), kW57), 4);
  for (int s = 0; s < kW57.cell_count(); ++s) EXPECT_EQ(apply_move(s, prim(0, 0), kW57), s);
  // Left edge must not wrap onto the previous row.
  EXPECT_EQ(apply_move(5, prim(-1, 0), kW57), 5);
  EXPECT_EQ(apply_move(33, prim(0, 1), kW57), 33);
}

TEST(StepSemantics, ApplyMoveStaysOnBoard) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const Workspace w{std::uniform_int_distribution<int>(1, 9)(rng), std::uniform_int_distribution<int>(1, 9)(rng)};
    const int s = std::uniform_int_distribution<int>(0, w.cell_count() - 1)(rng);
    const MotionPrimitive m = prim(std::uniform_int_distribution<int>(-3, 3)(rng),
                                   std::uniform_int_distribution<int>(-3, 3)(rng));
    const int t = apply_move(s, m, w);
    ASSERT_TRUE(w.contains_scalar(t));
    const Coord a = decode_position(s, w);
    const Coord b{a.x + m.final_offset.dx, a.y + m.final_offset.dy};
    ASSERT_EQ(t, w.contains(b) ? encode_position(b, w) : s);
  }
}

TEST(StepSemantics, SweptScalars) {
  EXPECT_EQ(swept_scalars(6, prim(1, 0), kW57), (std::vector<int>{6, 7}));
  EXPECT_EQ(swept_scalars(6, prim(1, 1, {{0, 1}}), kW57), (std::vector<int>{6, 12, 11}));
  EXPECT_EQ(swept_scalars(17, prim(0, 0), kW57), (std::vector<int>{17}));
}

TEST(StepSemantics, NoOverlapExamples) {
  EXPECT_TRUE(step_no_overlap(6, prim(0, 0), 27, prim(0, 1), kW57));
  EXPECT_FALSE(step_no_overlap(6, prim(1, 0), 12, prim(0, -1), kW57));
  EXPECT_FALSE(step_no_overlap(9, prim(0, 0), 9, prim(0, 0), kW57));
}

TEST(StepSemantics, NoOverlapIsSymmetric) {
  std::mt19937 rng(5);
  const std::vector<MotionPrimitive> prims{prim(0, 0), prim(0, 1), prim(1, 0), prim(0, -1), prim(-1, 0),
                                           prim(1, 1, {{0, 1}}), prim(-1, -1, {{-1, 0}})};
  auto any = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  for (int trial = 0; trial < 2000; ++trial) {
    const int a = any(kW57.cell_count()), b = any(kW57.cell_count());
    const auto& pa = prims[static_cast<std::size_t>(any(7))];
    const auto& pb = prims[static_cast<std::size_t>(any(7))];
    ASSERT_EQ(step_no_overlap(a, pa, b, pb, kW57), step_no_overlap(b, pb, a, pa, kW57));
  }
}

TEST(StepSemantics, SystemStepExamples) {
  const auto& p = sample_updown();
  EXPECT_EQ(system_step({6, {27, 28}}, 2, {1, 1}, p), (SystemState{7, {22, 23}}));
  EXPECT_EQ(system_step({6, {32, 28}}, 0, {0, 1}, p), (SystemState{6, {32, 23}}));
  EXPECT_THROW(system_step({6, {27, 28}}, 5, {0, 0}, p), Error);
  EXPECT_THROW(system_step({6, {27, 28}}, 0, {0, 2}, p), Error);
  EXPECT_THROW(system_step({6, {27, 28}}, 0, {0}, p), Error);
}

TEST(StepSemantics, StepModelMatchesFreeFunctions) {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = testing_support::random_instance(rng, 5, 2, 3, true);
    const StepModel model(p);
    SystemState s = initial_state(p);
    for (int j = 0; j < 20; ++j) {
      const int k = std::uniform_int_distribution<int>(0, static_cast<int>(p.robot.primitives.size()) - 1)(rng);
      std::vector<int> row;
      for (const auto& o : p.obstacles)
        row.push_back(std::uniform_int_distribution<int>(0, static_cast<int>(o.primitives.size()) - 1)(rng));
      for (std::size_t i = 0; i < row.size(); ++i) {
        ASSERT_EQ(model.no_overlap(s.robot, k, i, s.obstacles[i], row[i]),
                  step_no_overlap(s.robot, p.robot.primitives[static_cast<std::size_t>(k)], s.obstacles[i],
                                  p.obstacles[i].primitives[static_cast<std::size_t>(row[i])], p.workspace));
      }
      const SystemState next = system_step(s, k, row, p);
      ASSERT_EQ(model.advance(s, k, row), next);
      s = next;
    }
  }
}

TEST(StepSemantics, ReferenceEpisodeReachesTarget) {
  const auto o = run_episode(sample_updown(), reference_controller(), constant_schedule(6, {1, 1}), 6);
  EXPECT_EQ(o.robot_trace.back(), 24);
  EXPECT_FALSE(o.first_collision);
  EXPECT_TRUE(o.reached_target);
  EXPECT_TRUE(trace_satisfies(o));
  EXPECT_EQ(result_line(o), "RESULT: target");
}

TEST(StepSemantics, AlwaysUpClampsAtTopRow) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    AdversarySchedule s;
    for (int j = 0; j < 6; ++j) s.moves.push_back({static_cast<int>(rng() % 2), static_cast<int>(rng() % 2)});
    const auto o = run_episode(sample_updown(), move_leaf(1), s, 6);
    EXPECT_EQ(o.robot_trace.back(), 31);
    EXPECT_FALSE(o.reached_target);
    EXPECT_FALSE(trace_satisfies(o));
  }
}

TEST(StepSemantics, ZeroLengthEpisode) {
  const auto o = run_episode(sample_updown(), move_leaf(0), AdversarySchedule{}, 0);
  EXPECT_EQ(o.robot_trace, std::vector<int>{6});
  EXPECT_FALSE(o.reached_target);
  EXPECT_EQ(format_trace(o, sample_updown().workspace), "0: robot=(1,1) obstacles=[(2,5),(3,5)] move=-\nRESULT: missed\n");
}

TEST(StepSemantics, CollisionIsRecordedAndSimulationContinues) {
  // Robot climbs column 2 while obstacle 0 comes down it.
  auto p = sample_updown();
  p.robot.initial = {2, 1};
  const auto o = run_episode(p, move_leaf(1), constant_schedule(4, {1, 1}), 4);
  ASSERT_TRUE(o.first_collision);
  // Robot sweeps {12,17} at step 2 while obstacle 0 sweeps {22,17}.
  EXPECT_EQ(*o.first_collision, (Collision{2, 0}));
  EXPECT_EQ(o.steps(), 4);
  EXPECT_FALSE(trace_satisfies(o));
  EXPECT_EQ(result_line(o), "RESULT: collision@2,obstacle=0");
}

TEST(StepSemantics, RunEpisodeIsDeterministic) {
  std::mt19937 rng(8);
  AdversarySchedule s;
  for (int j = 0; j < 6; ++j) s.moves.push_back({static_cast<int>(rng() % 2), static_cast<int>(rng() % 2)});
  const auto a = run_episode(sample_updown(), reference_controller(), s, 6);
  const auto b = run_episode(sample_updown(), reference_controller(), s, 6);
  EXPECT_EQ(a.robot_trace, b.robot_trace);
  EXPECT_EQ(a.obstacle_traces, b.obstacle_traces);
  EXPECT_EQ(a.first_collision, b.first_collision);
}

TEST(StepSemantics, ScheduleShapeIsChecked) {
  EXPECT_THROW(run_episode(sample_updown(), move_leaf(0), constant_schedule(5, {0, 0}), 6), Error);
  EXPECT_THROW(run_episode(sample_updown(), move_leaf(0), constant_schedule(6, {0, 2}), 6), Error);
}

TEST(Render, InitialGrid) {
  const auto o = run_episode(sample_updown(), reference_controller(), constant_schedule(1, {1, 1}), 1);
  const std::string text = render_trace(o, sample_updown());
  const std::string step0 = "step 0:\n.....\n..01.\n....T\n.....\n.....\n.R...\n.....\n";
  EXPECT_EQ(text.substr(0, step0.size()), step0);
  EXPECT_EQ(text.substr(text.size() - 15), "RESULT: missed\n");
}

TEST(Render, CollisionCellMarked) {
  auto p = sample_updown();
  p.robot.initial = {2, 1};
  const auto o = run_episode(p, move_leaf(1), constant_schedule(2, {1, 1}), 2);
  const std::string text = render_trace(o, p);
  const auto at = text.find("step 2:\n");
  ASSERT_NE(at, std::string::npos);
  // Row y=3 holds the shared cell (2,3) next to obstacle 1.
  EXPECT_EQ(text.substr(at + 8 + 3 * 6, 6), "..X1.\n");
}

TEST(Render, NoObstacles) {
  ProblemInstance p;
  p.workspace = {3, 2};
  p.robot = {{0, 0}, {2, 1}, {prim(1, 0)}};
  const auto o = run_episode(p, move_leaf(0), constant_schedule(1, {}), 1);
  EXPECT_EQ(render_trace(o, p), "step 0:\n..T\nR..\nstep 1:\n..T\n.R.\nRESULT: missed\n");
}
