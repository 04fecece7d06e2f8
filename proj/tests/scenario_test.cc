#include "actor_risk/scenario.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "actor_risk/case_study.h"
#include "actor_risk/phase_script.h"
#include "test_util.h"

namespace actor_risk {
namespace {

using testing::AddActor;
using testing::EmptyScenario;
using testing::Straight;

Scenario TwoActorScenario() {
  Scenario s = EmptyScenario(100);
  AddActor(s, Straight("a", 10.0, s.map.LaneCenter(0), 8.0, 0, 100));
  AddActor(s, Straight("b", 40.0, s.map.LaneCenter(2), 9.0, 0, 100));
  return s;
}

TEST(ScenarioTest, NormalizeHeading) {
  EXPECT_DOUBLE_EQ(NormalizeHeading(0.0), 0.0);
  EXPECT_DOUBLE_EQ(NormalizeHeading(M_PI), M_PI);
  EXPECT_DOUBLE_EQ(NormalizeHeading(-M_PI), M_PI);
  EXPECT_NEAR(NormalizeHeading(3.0 * M_PI / 2.0), -M_PI / 2.0, 1e-12);
}

TEST(ScenarioTest, LaneGeometry) {
  RoadMap m;
  EXPECT_DOUBLE_EQ(m.LaneCenter(0), 1.75);
  EXPECT_EQ(m.LaneOf(1.75), 0);
  EXPECT_EQ(m.LaneOf(5.0), 1);
  EXPECT_EQ(m.LaneOf(-1.0), 0);
  EXPECT_EQ(m.LaneOf(99.0), 2);
}

TEST(ScenarioTest, SliceFullWindowIsIdentity) {
  const Scenario s = TwoActorScenario();
  EXPECT_EQ(SliceWorld(s, 0, s.horizon_ticks), s.npc_trajectories);
}

TEST(ScenarioTest, ZeroHorizonSliceHoldsCurrentState) {
  const Scenario s = TwoActorScenario();
  const World w = SliceWorld(s, 37, 0);
  for (const auto& [id, t] : w) {
    ASSERT_EQ(t.states.size(), 1u);
    EXPECT_EQ(t.start_tick, 37);
    EXPECT_EQ(t.states[0], s.npc_trajectories.at(id).at(37));
  }
}

TEST(ScenarioTest, SliceSplicesAcrossRandomWindows) {
  const Scenario s = TwoActorScenario();
  std::mt19937 rng(3);
  for (int rep = 0; rep < 200; ++rep) {
    const int t = std::uniform_int_distribution<int>(0, 60)(rng);
    const int k = std::uniform_int_distribution<int>(0, 20)(rng);
    const int m = std::uniform_int_distribution<int>(0, 100 - t - k)(rng);
    const World a = SliceWorld(s, t, k);
    const World b = SliceWorld(s, t + k, m);
    const World whole = SliceWorld(s, t, k + m);
    for (const auto& [id, w] : whole) {
      std::vector<ActorState> joined = a.at(id).states;
      joined.insert(joined.end(), b.at(id).states.begin() + 1, b.at(id).states.end());
      EXPECT_EQ(joined, w.states);
    }
  }
}

TEST(ScenarioTest, SliceOutsideCoverageFails) {
  const Scenario s = TwoActorScenario();
  EXPECT_THROW(SliceWorld(s, 90, 20), Error);
  EXPECT_THROW(SliceWorld(s, -1, 2), Error);
}

TEST(ScenarioTest, ValidateRejectsShortTrajectory) {
  Scenario s = TwoActorScenario();
  s.npc_trajectories.at(ActorId("a")).states.pop_back();
  try {
    ValidateScenario(s);
    FAIL() << "expected a validation error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kValidation);
    EXPECT_NE(std::string(e.what()).find("a"), std::string::npos);
  }
}

TEST(ScenarioTest, ValidateRejectsReservedEgoId) {
  Scenario s = TwoActorScenario();
  AddActor(s, Straight("ego", 0.0, 1.75, 5.0, 0, 100));
  EXPECT_THROW(ValidateScenario(s), Error);
}

TEST(ScenarioTest, KinematicConsistency) {
  Trajectory t = Straight("a", 0.0, 1.75, 10.0, 0, 20);
  EXPECT_NO_THROW(CheckKinematicConsistency(t));
  t.states[5].x += 1.0;  // implies 20 m/s then 0 m/s
  EXPECT_THROW(CheckKinematicConsistency(t), Error);
}

TEST(ScenarioTest, PhaseAtUsesHalfOpenSpans) {
  Scenario s = TwoActorScenario();
  s.phases = {{"p1", 0, 50}, {"p2", 50, 100}};
  EXPECT_EQ(s.PhaseAt(0), "p1");
  EXPECT_EQ(s.PhaseAt(49), "p1");
  EXPECT_EQ(s.PhaseAt(50), "p2");
  EXPECT_EQ(s.PhaseAt(100), "p2");
}

ScriptOutput BrakeScript(double speed, double decel) {
  PhaseScript script;
  script.phases.push_back(Phase{"brake", {TriggerKind::kElapsed, 20}, {{ActorId("a"), {}, {}, decel}}});
  ScriptDynamics dyn;
  return RunPhaseScript(script, RoadMap{}, {ScriptedActor{ActorId("a"), {0.0, 1.75, 0.0, speed}, 1.2}},
                        dyn);
}

TEST(PhaseScriptTest, BrakingStopsAtClosedFormTick) {
  const ScriptOutput out = BrakeScript(2.78, 6.0);
  const Trajectory& t = out.trajectories.at(ActorId("a"));
  const int stop = static_cast<int>(std::ceil(2.78 / (6.0 * 0.1)));
  ASSERT_EQ(stop, 5);
  EXPECT_GT(t.states[stop - 1].speed, 0.0);
  EXPECT_EQ(t.states[stop].speed, 0.0);
  for (std::size_t j = stop; j < t.states.size(); ++j) {
    EXPECT_EQ(t.states[j].x, t.states[stop].x);
  }
  EXPECT_NO_THROW(CheckKinematicConsistency(t));
}

TEST(PhaseScriptTest, TriggersChainAtTheSameTick) {
  PhaseScript script;
  script.phases.push_back(Phase{"a", {TriggerKind::kElapsed, 0}, {}});
  script.phases.push_back(Phase{"b", {TriggerKind::kElapsed, 7}, {}});
  const ScriptOutput out =
      RunPhaseScript(script, RoadMap{}, {ScriptedActor{ActorId("x"), {0, 1.75, 0, 1.0}, 1.2}}, {});
  ASSERT_EQ(out.phases.size(), 2u);
  EXPECT_EQ(out.phases[0], (PhaseSpan{"a", 0, 0}));
  EXPECT_EQ(out.phases[1], (PhaseSpan{"b", 0, 7}));
  EXPECT_EQ(out.horizon_ticks, 7);
}

TEST(CaseStudyTest, DefaultsHaveSixActorsAndFivePhases) {
  const CaseStudy cs = GenerateCaseStudy(CaseStudyParams::Defaults());
  EXPECT_EQ(cs.scenario.npc_trajectories.size(), 6u);
  ASSERT_EQ(cs.scenario.phases.size(), 5u);
  EXPECT_EQ(cs.scenario.phases[0].name, kPhaseInit);
  EXPECT_EQ(cs.scenario.phases[4].name, kPhaseBrake);
  EXPECT_NO_THROW(ValidateScenario(cs.scenario));
  EXPECT_EQ(cs.scenario.phases[0].end_tick, 375);
  for (std::size_t i = 1; i < cs.scenario.phases.size(); ++i) {
    EXPECT_EQ(cs.scenario.phases[i].start_tick, cs.scenario.phases[i - 1].end_tick);
  }
}

TEST(CaseStudyTest, ReferenceTimingBoundaries) {
  const CaseStudy cs = GenerateCaseStudy(CaseStudyParams::ReferenceTiming());
  const std::vector<int> ends{375, 795, 1035, 1215, 1905};
  ASSERT_EQ(cs.scenario.phases.size(), ends.size());
  for (std::size_t i = 0; i < ends.size(); ++i) {
    EXPECT_EQ(cs.scenario.phases[i].end_tick, ends[i]) << cs.scenario.phases[i].name;
  }
}

TEST(CaseStudyTest, SteadyPhaseSpeedsStayAtTarget) {
  const CaseStudyParams p = CaseStudyParams::Defaults();
  const CaseStudy cs = GenerateCaseStudy(p);
  const PhaseSpan& steady = cs.scenario.phases[1];
  for (const CaseStudyActor& a : p.actors) {
    const Trajectory& t = cs.scenario.npc_trajectories.at(a.id);
    for (int tick = steady.start_tick; tick < steady.end_tick; ++tick) {
      EXPECT_NEAR(t.at(tick).speed, a.target_speed, p.speed_tolerance) << a.id;
    }
    EXPECT_NEAR(t.at(steady.end_tick - 1).speed, a.target_speed, 1e-9) << a.id;
  }
}

TEST(CaseStudyTest, ZeroBrakeContinuesAtConstantSpeed) {
  CaseStudyParams p = CaseStudyParams::Defaults();
  p.brake_deceleration = 0.0;
  const CaseStudy cs = GenerateCaseStudy(p);
  const PhaseSpan& brake = cs.scenario.phases.back();
  const Trajectory& t = cs.scenario.npc_trajectories.at(p.lane_change_actor);
  const ActorState& s0 = t.at(brake.start_tick);
  for (int tick = brake.start_tick; tick <= brake.end_tick; ++tick) {
    EXPECT_EQ(t.at(tick).speed, s0.speed);
    EXPECT_NEAR(t.at(tick).x, s0.x + s0.speed * (tick - brake.start_tick) * p.dt, 1e-9);
  }
}

TEST(CaseStudyTest, WithoutBrakePhaseListsFourPhases) {
  CaseStudyParams p = CaseStudyParams::Defaults();
  p.include_brake_phase = false;
  EXPECT_EQ(GenerateCaseStudy(p).scenario.phases.size(), 4u);
}

TEST(CaseStudyTest, GenerationIsDeterministic) {
  EXPECT_EQ(GenerateCaseStudy(CaseStudyParams::Defaults()).scenario,
            GenerateCaseStudy(CaseStudyParams::Defaults()).scenario);
}

TEST(CaseStudyTest, InfeasibleParamsNameTheActor) {
  CaseStudyParams p = CaseStudyParams::Defaults();
  p.actors[1].lane = 7;
  try {
    GenerateCaseStudy(p);
    FAIL() << "expected a validation error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kValidation);
    EXPECT_NE(std::string(e.what()).find(p.actors[1].id.str()), std::string::npos);
  }
  p = CaseStudyParams::Defaults();
  p.lane_change_actor = ActorId("999");
  EXPECT_THROW(GenerateCaseStudy(p), Error);
}

}  // namespace
}  // namespace actor_risk
