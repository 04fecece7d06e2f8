#ifndef ACTOR_RISK_TESTS_TEST_UTIL_H_
#define ACTOR_RISK_TESTS_TEST_UTIL_H_

#include <cmath>
#include <string>

#include "actor_risk/scenario.h"

namespace actor_risk::testing {

// Constant-velocity trajectory along +x over ticks [start, start + n].
inline Trajectory Straight(const std::string& id, double x0, double y, double speed, int start,
                           int n, double dt = 0.1) {
  Trajectory t;
  t.actor_id = ActorId(id);
  t.start_tick = start;
  t.dt = dt;
  for (int j = 0; j <= n; ++j) {
    t.states.push_back(ActorState{x0 + speed * j * dt, y, 0.0, speed});
  }
  return t;
}

// Decelerates from `speed` at `decel` until stopped, then holds.
inline Trajectory Braking(const std::string& id, double x0, double y, double speed, double decel,
                          int start, int n, double dt = 0.1) {
  Trajectory t;
  t.actor_id = ActorId(id);
  t.start_tick = start;
  t.dt = dt;
  const double stop_time = speed / decel;
  for (int j = 0; j <= n; ++j) {
    const double s = std::min(j * dt, stop_time);
    t.states.push_back(
        ActorState{x0 + speed * s - 0.5 * decel * s * s, y, 0.0, std::max(0.0, speed - decel * j * dt)});
  }
  return t;
}

inline Scenario EmptyScenario(int horizon, double road_length = 1000.0) {
  Scenario s;
  s.map = RoadMap{3, 3.5, road_length, 13.9};
  s.dt = 0.1;
  s.horizon_ticks = horizon;
  s.ego_initial = ActorState{0.0, s.map.LaneCenter(1), 0.0, 10.0};
  return s;
}

inline void AddActor(Scenario& s, Trajectory t, double radius = 1.2) {
  const ActorId id = t.actor_id;
  s.npc_trajectories[id] = std::move(t);
  s.actor_radius[id] = radius;
}

}  // namespace actor_risk::testing

#endif  // ACTOR_RISK_TESTS_TEST_UTIL_H_
