#include "actor_risk/phase_script.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace actor_risk {
namespace {

struct LiveActor {
  ActorId id;
  double x = 0.0;
  double y = 0.0;
  double longitudinal_speed = 0.0;
  double lateral_speed = 0.0;
  std::optional<double> target_speed;
  std::optional<double> deceleration;
  bool ramp_active = false;
  double ramp_from = 0.0;
  double ramp_to = 0.0;
  int ramp_start = 0;
};

ActorState StateOf(const LiveActor& a) {
  ActorState s;
  s.x = a.x;
  s.y = a.y;
  s.speed = std::hypot(a.longitudinal_speed, a.lateral_speed);
  s.heading = s.speed > 0.0 ? std::atan2(a.lateral_speed, a.longitudinal_speed) : 0.0;
  return s;
}

void Apply(const ActorCommand& command, const RoadMap& map, int tick, LiveActor& a) {
  if (command.target_speed) a.target_speed = *command.target_speed;
  if (command.deceleration) a.deceleration = *command.deceleration;
  if (command.target_lane) {
    a.ramp_active = true;
    a.ramp_from = a.y;
    a.ramp_to = map.LaneCenter(*command.target_lane);
    a.ramp_start = tick;
  }
}

void Step(const ScriptDynamics& dyn, int ramp_ticks, int next_tick, LiveActor& a) {
  double v = a.longitudinal_speed;
  if (a.deceleration) {
    v = std::max(0.0, v - *a.deceleration * dyn.dt);
  } else if (a.target_speed) {
    const double max_change = dyn.accel * dyn.dt;
    v += std::clamp(*a.target_speed - v, -max_change, max_change);
  }
  a.x += 0.5 * (a.longitudinal_speed + v) * dyn.dt;
  a.longitudinal_speed = v;

  a.lateral_speed = 0.0;
  if (a.ramp_active) {
    const double progress =
        static_cast<double>(next_tick - a.ramp_start) / static_cast<double>(ramp_ticks);
    if (progress >= 1.0) {
      a.y = a.ramp_to;
      a.ramp_active = false;
    } else {
      const double delta = a.ramp_to - a.ramp_from;
      a.y = a.ramp_from + delta * 0.5 * (1.0 - std::cos(std::numbers::pi * progress));
      a.lateral_speed = delta * std::numbers::pi /
                        (2.0 * ramp_ticks * dyn.dt) *
                        std::sin(std::numbers::pi * progress);
    }
  }
}

bool EventHolds(const PhaseTrigger& trigger, const std::vector<LiveActor>& actors) {
  switch (trigger.kind) {
    case TriggerKind::kElapsed:
      return true;
    case TriggerKind::kAllAtTargetSpeed:
      return std::all_of(actors.begin(), actors.end(), [&](const LiveActor& a) {
        return !a.target_speed ||
               std::abs(a.longitudinal_speed - *a.target_speed) <= trigger.tolerance;
      });
    case TriggerKind::kManeuversComplete:
      return std::all_of(actors.begin(), actors.end(), [](const LiveActor& a) {
        const bool braking = a.deceleration && *a.deceleration > 0.0;
        return !a.ramp_active && (!braking || a.longitudinal_speed == 0.0);
      });
  }
  return false;
}

}  // namespace

ScriptOutput RunPhaseScript(const PhaseScript& script, const RoadMap& map,
                            const std::vector<ScriptedActor>& actors,
                            const ScriptDynamics& dynamics) {
  if (script.phases.empty()) Fail(ErrorCode::kInvalidArgument, "phase script is empty");
  if (!(dynamics.dt > 0.0)) Fail(ErrorCode::kInvalidArgument, "dt must be > 0");
  const int ramp_ticks =
      std::max(1, static_cast<int>(std::lround(dynamics.lane_change_duration / dynamics.dt)));

  std::vector<LiveActor> live;
  live.reserve(actors.size());
  ScriptOutput out;
  for (const ScriptedActor& a : actors) {
    LiveActor l;
    l.id = a.id;
    l.x = a.initial.x;
    l.y = a.initial.y;
    l.longitudinal_speed = a.initial.speed * std::cos(a.initial.heading);
    live.push_back(l);
    Trajectory& t = out.trajectories[a.id];
    t.actor_id = a.id;
    t.start_tick = 0;
    t.dt = dynamics.dt;
    t.states.push_back(a.initial);
  }
  auto find = [&](const ActorId& id) -> LiveActor& {
    for (LiveActor& l : live) {
      if (l.id == id) return l;
    }
    Fail(ErrorCode::kInvalidArgument, "phase command names unknown actor " + id.str());
  };

  std::size_t phase_index = 0;
  int phase_start = 0;
  std::optional<int> event_tick;
  for (const ActorCommand& c : script.phases[0].commands) Apply(c, map, 0, find(c.actor));

  int tick = 0;
  while (true) {
    const Phase& phase = script.phases[phase_index];
    const PhaseTrigger& trigger = phase.end_trigger;
    if (!event_tick && EventHolds(trigger, live)) event_tick = tick;
    const int close_at = event_tick ? (trigger.kind == TriggerKind::kElapsed
                                           ? phase_start + trigger.hold_ticks
                                           : *event_tick + trigger.hold_ticks)
                                    : -1;
    if (event_tick && tick >= close_at) {
      out.phases.push_back(PhaseSpan{phase.name, phase_start, tick});
      ++phase_index;
      if (phase_index == script.phases.size()) break;
      phase_start = tick;
      event_tick.reset();
      for (const ActorCommand& c : script.phases[phase_index].commands) {
        Apply(c, map, tick, find(c.actor));
      }
      continue;
    }
    if (tick >= dynamics.max_ticks) {
      Fail(ErrorCode::kInvalidArgument,
           "phase '" + phase.name + "' trigger did not fire within the tick limit");
    }
    for (LiveActor& l : live) {
      Step(dynamics, ramp_ticks, tick + 1, l);
      out.trajectories[l.id].states.push_back(StateOf(l));
    }
    ++tick;
  }
  out.horizon_ticks = tick;
  return out;
}

}  // namespace actor_risk
