#include "actor_risk/sampling_planner.h"

#include <cmath>

#include <gtest/gtest.h>

#include "test_util.h"

namespace actor_risk {
namespace {

using testing::Straight;

constexpr int kK = 50;
constexpr double kDt = 0.1;

RoadMap ThreeLanes() { return RoadMap{3, 3.5, 1000.0, 13.9}; }

PlannerConfig Config(uint64_t seed = 1) {
  PlannerConfig c;
  c.seed = seed;
  c.target_speed = 10.0;
  return c;
}

ActorState Ego(const RoadMap& map) { return ActorState{0.0, map.LaneCenter(1), 0.0, 10.0}; }

TEST(SamplingPlannerTest, EmptyRoadPlanIsNearlyStraight) {
  const RoadMap map = ThreeLanes();
  const SamplingResult r = PlanSampling(map, Ego(map), 0, kK, kDt, {}, {}, 1.2, Config());
  ASSERT_EQ(r.status, PlanStatus::kReachedGoal);
  const double straight = 10.0 * kK * kDt;
  EXPECT_LE(r.plan.cost, straight * 1.05);
  EXPECT_GE(r.plan.cost, straight - 2.0);  // goal tolerance
  EXPECT_EQ(r.plan.trajectory.start_tick, 0);
  EXPECT_EQ(r.plan.trajectory.end_tick(), kK);
  EXPECT_EQ(r.plan.trajectory.states.front().x, 0.0);
}

TEST(SamplingPlannerTest, StoppedLeadForcesLaneChange) {
  const RoadMap map = ThreeLanes();
  World w;
  w[ActorId("lead")] = Straight("lead", 30.0, map.LaneCenter(1), 0.0, 0, kK);
  const RadiusMap radii{{ActorId("lead"), 1.2}};
  const SamplingResult r = PlanSampling(map, Ego(map), 0, kK, kDt, w, radii, 1.2, Config());
  ASSERT_EQ(r.status, PlanStatus::kReachedGoal);
  EXPECT_NE(map.LaneOf(r.plan.trajectory.states.back().y), 1);
  EXPECT_FALSE(CollisionCheck(r.plan.trajectory, w, radii, 1.2, 0.5));
  EXPECT_GT(r.rejected_edges, 0);
}

TEST(SamplingPlannerTest, SameSeedSamePlan) {
  const RoadMap map = ThreeLanes();
  World w;
  w[ActorId("lead")] = Straight("lead", 30.0, map.LaneCenter(1), 2.0, 0, kK);
  const RadiusMap radii{{ActorId("lead"), 1.2}};
  const SamplingResult a = PlanSampling(map, Ego(map), 0, kK, kDt, w, radii, 1.2, Config(5));
  const SamplingResult b = PlanSampling(map, Ego(map), 0, kK, kDt, w, radii, 1.2, Config(5));
  EXPECT_EQ(a.plan.trajectory, b.plan.trajectory);
  EXPECT_EQ(a.plan.cost, b.plan.cost);
  EXPECT_EQ(a.tree_size, b.tree_size);
}

TEST(SamplingPlannerTest, IrrelevantActorLeavesPlanUnchanged) {
  const RoadMap map = ThreeLanes();
  World w;
  w[ActorId("far")] = Straight("far", -300.0, map.LaneCenter(0), 5.0, 0, kK);
  const RadiusMap radii{{ActorId("far"), 1.2}};
  const SamplingResult with = PlanSampling(map, Ego(map), 0, kK, kDt, w, radii, 1.2, Config(3));
  const SamplingResult without = PlanSampling(map, Ego(map), 0, kK, kDt, {}, {}, 1.2, Config(3));
  EXPECT_EQ(with.plan.trajectory, without.plan.trajectory);
  EXPECT_EQ(with.rejected_edges, 0);
}

TEST(SamplingPlannerTest, FullBlockageGivesPartialPlan) {
  const RoadMap map = ThreeLanes();
  World w;
  RadiusMap radii;
  for (int lane = 0; lane < 3; ++lane) {
    const std::string id = "wall" + std::to_string(lane);
    w[ActorId(id)] = Straight(id, 25.0, map.LaneCenter(lane), 0.0, 0, kK);
    radii[ActorId(id)] = 1.2;
  }
  const SamplingResult r = PlanSampling(map, Ego(map), 0, kK, kDt, w, radii, 1.2, Config());
  EXPECT_TRUE(r.partial());
  EXPECT_FALSE(CollisionCheck(r.plan.trajectory, w, radii, 1.2, 0.5));
  EXPECT_LT(r.plan.trajectory.states.back().x, 25.0);
}

TEST(SamplingPlannerTest, PathHoldsFinalPositionAfterArrival) {
  const RoadMap map = ThreeLanes();
  PlannerConfig c = Config();
  c.goal_advance = 20.0;
  const SamplingResult r = PlanSampling(map, Ego(map), 0, kK, kDt, {}, {}, 1.2, c);
  ASSERT_EQ(r.status, PlanStatus::kReachedGoal);
  const ActorState& last = r.plan.trajectory.states.back();
  EXPECT_EQ(last.x, r.plan.trajectory.states[kK - 5].x);
  EXPECT_EQ(last.speed, 0.0);
}

TEST(SamplingPlannerTest, InvalidConfigRejected) {
  PlannerConfig c = Config();
  c.iteration_budget = 0;
  EXPECT_THROW(ValidatePlannerConfig(c), Error);
  c = Config();
  c.steer_step = -1.0;
  EXPECT_THROW(ValidatePlannerConfig(c), Error);
}

}  // namespace
}  // namespace actor_risk
