#include "actor_risk/scenario.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace actor_risk {

double NormalizeHeading(double heading) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double wrapped = std::remainder(heading, kTwoPi);
  if (wrapped <= -std::numbers::pi) wrapped += kTwoPi;
  return wrapped;
}

const ActorState& Trajectory::at(int tick) const {
  if (!covers(tick)) {
    std::ostringstream msg;
    msg << "trajectory of actor " << actor_id << " does not cover tick " << tick
        << " (window [" << start_tick << ", " << end_tick() << "])";
    Fail(ErrorCode::kInvalidArgument, msg.str());
  }
  return states[tick - start_tick];
}

void CheckKinematicConsistency(const Trajectory& trajectory,
                               double relative_tolerance,
                               double absolute_slack) {
  if (trajectory.states.empty()) {
    Fail(ErrorCode::kValidation,
         "trajectory of actor " + trajectory.actor_id.str() + " is empty");
  }
  if (!(trajectory.dt > 0.0)) {
    Fail(ErrorCode::kValidation,
         "trajectory of actor " + trajectory.actor_id.str() +
             " has non-positive dt");
  }
  for (std::size_t i = 0; i < trajectory.states.size(); ++i) {
    const ActorState& s = trajectory.states[i];
    if (!(s.speed >= 0.0) || !std::isfinite(s.x) || !std::isfinite(s.y)) {
      std::ostringstream msg;
      msg << "actor " << trajectory.actor_id << " state " << i
          << " has negative speed or non-finite position";
      Fail(ErrorCode::kValidation, msg.str());
    }
    if (i == 0) continue;
    const ActorState& p = trajectory.states[i - 1];
    const double implied = std::hypot(s.x - p.x, s.y - p.y) / trajectory.dt;
    const double midpoint = 0.5 * (s.speed + p.speed);
    if (std::abs(implied - midpoint) >
        relative_tolerance * midpoint + absolute_slack) {
      std::ostringstream msg;
      msg << "actor " << trajectory.actor_id << " tick "
          << trajectory.start_tick + static_cast<int>(i)
          << ": implied speed " << implied << " m/s inconsistent with stored "
          << midpoint << " m/s";
      Fail(ErrorCode::kValidation, msg.str());
    }
  }
}

int RoadMap::LaneOf(double y) const {
  const int lane = static_cast<int>(std::floor(y / lane_width));
  return std::clamp(lane, 0, lane_count - 1);
}

void ValidateRoadMap(const RoadMap& map) {
  if (map.lane_count < 1) Fail(ErrorCode::kValidation, "map.lane_count must be >= 1");
  if (!(map.lane_width > 0.0)) Fail(ErrorCode::kValidation, "map.lane_width must be > 0");
  if (!(map.road_length > 0.0)) Fail(ErrorCode::kValidation, "map.road_length must be > 0");
  if (!(map.speed_limit > 0.0)) Fail(ErrorCode::kValidation, "map.speed_limit must be > 0");
}

double Scenario::RadiusOf(const ActorId& id) const {
  if (id == EgoId()) return ego_radius;
  auto it = actor_radius.find(id);
  if (it == actor_radius.end()) {
    Fail(ErrorCode::kInvalidArgument, "no radius recorded for actor " + id.str());
  }
  return it->second;
}

std::string Scenario::PhaseAt(int tick) const {
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const PhaseSpan& p = phases[i];
    const bool last = i + 1 == phases.size();
    if (tick >= p.start_tick && (tick < p.end_tick || (last && tick == p.end_tick))) {
      return p.name;
    }
  }
  return "";
}

void ValidateScenario(const Scenario& scenario) {
  ValidateRoadMap(scenario.map);
  if (!(scenario.dt > 0.0)) Fail(ErrorCode::kValidation, "dt must be > 0");
  if (scenario.horizon_ticks < 0) Fail(ErrorCode::kValidation, "horizon_ticks must be >= 0");
  if (!(scenario.ego_initial.speed >= 0.0)) {
    Fail(ErrorCode::kValidation, "ego.state speed must be >= 0");
  }
  if (!scenario.map.LateralInBounds(scenario.ego_initial.y, 0.0)) {
    Fail(ErrorCode::kValidation, "ego.state lies outside the road");
  }
  for (const auto& [id, trajectory] : scenario.npc_trajectories) {
    if (id == EgoId()) {
      Fail(ErrorCode::kValidation, "actor id '" + id.str() + "' is reserved for the ego");
    }
    if (trajectory.actor_id != id) {
      Fail(ErrorCode::kValidation, "actor " + id.str() + " keyed under a different id");
    }
    if (trajectory.start_tick != 0 || trajectory.end_tick() != scenario.horizon_ticks) {
      std::ostringstream msg;
      msg << "actor " << id << " covers ticks [" << trajectory.start_tick << ", "
          << trajectory.end_tick() << "] but the scenario horizon is [0, "
          << scenario.horizon_ticks << "]";
      Fail(ErrorCode::kValidation, msg.str());
    }
    if (trajectory.dt != scenario.dt) {
      Fail(ErrorCode::kValidation, "actor " + id.str() + " has a dt different from the scenario");
    }
    if (!scenario.actor_radius.contains(id)) {
      Fail(ErrorCode::kValidation, "actor " + id.str() + " has no radius");
    }
    CheckKinematicConsistency(trajectory);
  }
  for (const auto& [id, radius] : scenario.actor_radius) {
    if (!scenario.npc_trajectories.contains(id)) {
      Fail(ErrorCode::kValidation, "radius given for unknown actor " + id.str());
    }
    if (!(radius > 0.0)) Fail(ErrorCode::kValidation, "actor " + id.str() + " radius must be > 0");
  }
  int previous_end = 0;
  for (const PhaseSpan& phase : scenario.phases) {
    if (phase.start_tick < previous_end || phase.end_tick < phase.start_tick) {
      Fail(ErrorCode::kValidation, "phase '" + phase.name + "' is out of order");
    }
    previous_end = phase.end_tick;
  }
}

Trajectory SliceTrajectory(const Trajectory& trajectory, int t, int k) {
  if (k < 0 || !trajectory.covers(t) || !trajectory.covers(t + k)) {
    std::ostringstream msg;
    msg << "window [" << t << ", " << t + k << "] outside trajectory of actor "
        << trajectory.actor_id;
    Fail(ErrorCode::kInvalidArgument, msg.str());
  }
  Trajectory out;
  out.actor_id = trajectory.actor_id;
  out.start_tick = t;
  out.dt = trajectory.dt;
  const auto first = trajectory.states.begin() + (t - trajectory.start_tick);
  out.states.assign(first, first + k + 1);
  return out;
}

World SliceWorld(const Scenario& scenario, int t, int k) {
  if (t < 0 || k < 0 || t + k > scenario.horizon_ticks) {
    std::ostringstream msg;
    msg << "window [" << t << ", " << t + k << "] outside scenario horizon [0, "
        << scenario.horizon_ticks << "]";
    Fail(ErrorCode::kInvalidArgument, msg.str());
  }
  World out;
  for (const auto& [id, trajectory] : scenario.npc_trajectories) {
    out.emplace(id, SliceTrajectory(trajectory, t, k));
  }
  return out;
}

}  // namespace actor_risk
