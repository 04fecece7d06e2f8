#ifndef ACTOR_RISK_SCENARIO_H_
#define ACTOR_RISK_SCENARIO_H_

#include <map>
#include <string>
#include <vector>

#include "actor_risk/common.h"

namespace actor_risk {

// Kinematic state of one actor. x runs along the road axis, y is lateral with
// 0 at the right road edge, heading 0 points along +x.
struct ActorState {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  double speed = 0.0;

  bool operator==(const ActorState&) const = default;
};

// Wraps an angle into (-pi, pi].
double NormalizeHeading(double heading);

// Timestamped trace of one actor with uniform tick length.
struct Trajectory {
  ActorId actor_id;
  int start_tick = 0;
  double dt = 0.1;
  std::vector<ActorState> states;

  int end_tick() const { return start_tick + static_cast<int>(states.size()) - 1; }
  bool covers(int tick) const { return tick >= start_tick && tick <= end_tick(); }
  // Requires covers(tick).
  const ActorState& at(int tick) const;

  bool operator==(const Trajectory&) const = default;
};

// Throws kValidation when the trajectory is empty or when the speed implied by
// consecutive positions deviates from the stored speed midpoint by more than
// `relative_tolerance` (plus `absolute_slack` m/s for near-stationary actors).
void CheckKinematicConsistency(const Trajectory& trajectory,
                               double relative_tolerance = 0.2,
                               double absolute_slack = 0.05);

// Straight one-way road segment with `lane_count` parallel lanes. Lane 0 is
// the rightmost lane; lane l spans y in [l*w, (l+1)*w).
struct RoadMap {
  int lane_count = 3;
  double lane_width = 3.5;
  double road_length = 1000.0;
  double speed_limit = 13.9;

  double width() const { return lane_count * lane_width; }
  double LaneCenter(int lane) const { return (lane + 0.5) * lane_width; }
  // Lane containing y, clamped to the valid range.
  int LaneOf(double y) const;
  bool LateralInBounds(double y, double radius) const {
    return y - radius >= 0.0 && y + radius <= width();
  }

  bool operator==(const RoadMap&) const = default;
};

void ValidateRoadMap(const RoadMap& map);

// Half-open tick range [start_tick, end_tick) with the last phase of a
// scenario closed at the horizon.
struct PhaseSpan {
  std::string name;
  int start_tick = 0;
  int end_tick = 0;

  bool operator==(const PhaseSpan&) const = default;
};

using World = std::map<ActorId, Trajectory>;

struct Scenario {
  int version = 1;
  RoadMap map;
  double dt = 0.1;
  int horizon_ticks = 0;
  ActorState ego_initial;
  double ego_radius = 1.2;
  World npc_trajectories;
  std::map<ActorId, double> actor_radius;
  std::vector<PhaseSpan> phases;

  double RadiusOf(const ActorId& id) const;
  // Name of the phase active at `tick`, or "" when no metadata covers it.
  std::string PhaseAt(int tick) const;

  bool operator==(const Scenario&) const = default;
};

// Throws kValidation describing the first violated scenario invariant.
void ValidateScenario(const Scenario& scenario);

// Every npc trajectory restricted to ticks [t, t+k]. Throws kInvalidArgument
// for windows outside [0, horizon_ticks].
World SliceWorld(const Scenario& scenario, int t, int k);

// Restricts a single trajectory to [t, t+k].
Trajectory SliceTrajectory(const Trajectory& trajectory, int t, int k);

}  // namespace actor_risk

#endif  // ACTOR_RISK_SCENARIO_H_
