#include "actor_risk/case_study.h"

#include <cmath>
#include <set>
#include <sstream>

namespace actor_risk {
namespace {

int Ticks(double seconds, double dt) { return static_cast<int>(std::lround(seconds / dt)); }

void ValidateParams(const CaseStudyParams& p) {
  ValidateRoadMap(p.map);
  if (!(p.dt > 0.0)) Fail(ErrorCode::kValidation, "case study dt must be > 0");
  if (p.ego_lane < 0 || p.ego_lane >= p.map.lane_count) {
    Fail(ErrorCode::kValidation, "ego lane " + std::to_string(p.ego_lane) + " does not exist");
  }
  if (!(p.init_accel > 0.0)) Fail(ErrorCode::kValidation, "init_accel must be > 0");
  if (p.brake_deceleration < 0.0) {
    Fail(ErrorCode::kValidation, "actor " + p.lane_change_actor.str() +
                                     ": brake deceleration must be >= 0");
  }
  std::set<ActorId> ids;
  bool lane_change_actor_found = false;
  for (const CaseStudyActor& a : p.actors) {
    if (a.id == EgoId()) Fail(ErrorCode::kValidation, "actor id 'ego' is reserved");
    if (!ids.insert(a.id).second) {
      Fail(ErrorCode::kValidation, "duplicate actor id " + a.id.str());
    }
    if (a.lane < 0 || a.lane >= p.map.lane_count) {
      Fail(ErrorCode::kValidation,
           "actor " + a.id.str() + ": lane " + std::to_string(a.lane) + " does not exist");
    }
    if (a.target_speed > p.map.speed_limit || a.target_speed < 0.0) {
      std::ostringstream msg;
      msg << "actor " << a.id << ": target speed " << a.target_speed
          << " m/s outside [0, speed_limit=" << p.map.speed_limit << "]";
      Fail(ErrorCode::kValidation, msg.str());
    }
    if (!(a.radius > 0.0)) Fail(ErrorCode::kValidation, "actor " + a.id.str() + ": radius must be > 0");
    if (a.id == p.lane_change_actor) lane_change_actor_found = true;
  }
  if (!lane_change_actor_found) {
    Fail(ErrorCode::kValidation, "lane-change actor " + p.lane_change_actor.str() + " is not in the actor list");
  }
  if (p.lane_change_target_lane < 0 || p.lane_change_target_lane >= p.map.lane_count) {
    Fail(ErrorCode::kValidation, "actor " + p.lane_change_actor.str() + ": lane change into lane " +
                                     std::to_string(p.lane_change_target_lane) +
                                     " which does not exist");
  }
}

}  // namespace

CaseStudyParams CaseStudyParams::Defaults() {
  CaseStudyParams p;
  p.actors = {
      {ActorId("208"), 0, 40.0, 8.0, 1.2},  {ActorId("209"), 2, 10.0, 8.0, 1.2},
      {ActorId("210"), 1, 2.0, 8.0, 1.2},   {ActorId("211"), 1, -8.0, 8.0, 1.2},
      {ActorId("212"), 0, 80.0, 8.0, 1.2},  {ActorId("213"), 1, -18.0, 8.0, 1.2},
  };
  return p;
}

CaseStudyParams CaseStudyParams::ReferenceTiming() {
  CaseStudyParams p = Defaults();
  p.lane_change_duration = 24.0;
  p.steady2_duration = 18.0;
  p.brake_phase_duration = 69.0;
  return p;
}

CaseStudy GenerateCaseStudy(const CaseStudyParams& params) {
  ValidateParams(params);

  PhaseScript script;
  {
    Phase init{kPhaseInit, {TriggerKind::kAllAtTargetSpeed, 0, params.speed_tolerance}, {}};
    for (const CaseStudyActor& a : params.actors) {
      init.commands.push_back(ActorCommand{a.id, a.target_speed, std::nullopt, std::nullopt});
    }
    script.phases.push_back(init);
    script.phases.push_back(
        Phase{kPhaseSteady, {TriggerKind::kElapsed, Ticks(params.steady_duration, params.dt)}, {}});
    script.phases.push_back(
        Phase{kPhaseLaneChange,
              {TriggerKind::kManeuversComplete, 0},
              {ActorCommand{params.lane_change_actor, std::nullopt,
                            params.lane_change_target_lane, std::nullopt}}});
    script.phases.push_back(
        Phase{kPhaseSteady2, {TriggerKind::kElapsed, Ticks(params.steady2_duration, params.dt)}, {}});
    if (params.include_brake_phase) {
      script.phases.push_back(
          Phase{kPhaseBrake,
                {TriggerKind::kElapsed, Ticks(params.brake_phase_duration, params.dt)},
                {ActorCommand{params.lane_change_actor, std::nullopt, std::nullopt,
                              params.brake_deceleration}}});
    }
  }

  std::vector<ScriptedActor> actors;
  for (const CaseStudyActor& a : params.actors) {
    ActorState s;
    s.x = params.ego_x + a.offset_x;
    s.y = params.map.LaneCenter(a.lane);
    actors.push_back(ScriptedActor{a.id, s, a.radius});
  }
  ScriptDynamics dynamics;
  dynamics.dt = params.dt;
  dynamics.accel = params.init_accel;
  dynamics.lane_change_duration = params.lane_change_duration;
  ScriptOutput run = RunPhaseScript(script, params.map, actors, dynamics);

  CaseStudy out;
  out.params = params;
  out.script = std::move(script);
  Scenario& s = out.scenario;
  s.map = params.map;
  s.dt = params.dt;
  s.horizon_ticks = run.horizon_ticks;
  s.ego_initial.x = params.ego_x;
  s.ego_initial.y = params.map.LaneCenter(params.ego_lane);
  s.ego_radius = params.ego_radius;
  s.npc_trajectories = std::move(run.trajectories);
  for (const CaseStudyActor& a : params.actors) s.actor_radius[a.id] = a.radius;
  s.phases = std::move(run.phases);
  return out;
}

}  // namespace actor_risk
