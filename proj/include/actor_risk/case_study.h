#ifndef ACTOR_RISK_CASE_STUDY_H_
#define ACTOR_RISK_CASE_STUDY_H_

#include <vector>

#include "actor_risk/common.h"
#include "actor_risk/phase_script.h"
#include "actor_risk/scenario.h"

namespace actor_risk {

// Phase names of the five-step highway case study.
inline constexpr const char* kPhaseInit = "init";
inline constexpr const char* kPhaseSteady = "steady";
inline constexpr const char* kPhaseLaneChange = "lane_change";
inline constexpr const char* kPhaseSteady2 = "steady2";
inline constexpr const char* kPhaseBrake = "brake";

struct CaseStudyActor {
  ActorId id;
  int lane = 0;
  // Initial longitudinal position relative to the ego.
  double offset_x = 0.0;
  double target_speed = 8.0;
  double radius = 1.2;
};

struct CaseStudyParams {
  RoadMap map{3, 3.5, 2500.0, 13.9};
  double dt = 0.1;

  int ego_lane = 2;
  double ego_x = 60.0;
  double ego_radius = 1.2;
  // Cruise speed the ego's planner aims for; not part of the scenario file.
  double ego_desired_speed = 11.0;
  // Sampling-planner iteration budget for runs of this scenario.
  int planner_iterations = 4000;

  std::vector<CaseStudyActor> actors;

  // s1: everyone starts at rest and accelerates until within
  // `speed_tolerance` of the target speed.
  double init_accel = 0.2125;
  double speed_tolerance = 0.05;
  // s2
  double steady_duration = 42.0;
  // s3: closes when the lateral ramp completes.
  ActorId lane_change_actor{"208"};
  int lane_change_target_lane = 1;
  double lane_change_duration = 3.0;
  // s4
  double steady2_duration = 39.0;
  // s5: the lane-change actor brakes to a standstill.
  bool include_brake_phase = true;
  double brake_deceleration = 6.0;
  double brake_phase_duration = 7.0;

  // The two adjacent-lane actors the ego may slot behind, most important
  // first. Used by analyses, not by generation.
  std::vector<ActorId> follow_candidates{ActorId("209"), ActorId("210")};

  // Seven-actor topology: ego in the left lane behind follow candidate 209,
  // 210 beside it heading a queue (211, 213) in the middle lane, and the
  // lane-change actor 208 ahead in the right lane, later cutting in front of
  // 210.
  static CaseStudyParams Defaults();
  // Defaults with durations stretched so the phase boundaries land on ticks
  // 375 / 795 / 1035 / 1215 / 1905.
  static CaseStudyParams ReferenceTiming();
};

// Scripted case-study scenario plus the script that produced it.
struct CaseStudy {
  Scenario scenario;
  PhaseScript script;
  CaseStudyParams params;
};

// Throws kValidation naming the offending actor for infeasible params.
CaseStudy GenerateCaseStudy(const CaseStudyParams& params);

}  // namespace actor_risk

#endif  // ACTOR_RISK_CASE_STUDY_H_
