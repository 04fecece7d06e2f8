#ifndef ACTOR_RISK_PHASE_SCRIPT_H_
#define ACTOR_RISK_PHASE_SCRIPT_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "actor_risk/common.h"
#include "actor_risk/scenario.h"

namespace actor_risk {

// Per-actor instruction issued when a phase starts. Unset fields keep the
// actor's current behavior.
struct ActorCommand {
  ActorId actor;
  std::optional<double> target_speed;
  std::optional<int> target_lane;
  // Constant deceleration (m/s^2) applied until standstill; overrides
  // target_speed tracking while active.
  std::optional<double> deceleration;
};

enum class TriggerKind {
  kElapsed,           // `hold_ticks` after the phase started
  kAllAtTargetSpeed,  // every actor within `tolerance` of its target speed
  kManeuversComplete, // lane changes finished and braking actors stopped
};

// Condition that closes a phase. Event triggers close the phase `hold_ticks`
// after the event first holds.
struct PhaseTrigger {
  TriggerKind kind = TriggerKind::kElapsed;
  int hold_ticks = 0;
  double tolerance = 0.05;
};

struct Phase {
  std::string name;
  PhaseTrigger end_trigger;
  std::vector<ActorCommand> commands;
};

struct PhaseScript {
  std::vector<Phase> phases;
};

struct ScriptedActor {
  ActorId id;
  ActorState initial;
  double radius = 1.2;
};

struct ScriptDynamics {
  double dt = 0.1;
  double accel = 1.0;                 // speed-tracking acceleration limit
  double lane_change_duration = 3.0;  // seconds of the cosine lateral ramp
  // Guards against triggers that never fire.
  int max_ticks = 1'000'000;
};

struct ScriptOutput {
  World trajectories;
  std::vector<PhaseSpan> phases;
  int horizon_ticks = 0;
};

// Integrates all actors forward tick by tick, switching phases when their end
// triggers fire. Each trigger fires exactly once and phases run in order; the
// run ends when the last phase closes.
ScriptOutput RunPhaseScript(const PhaseScript& script, const RoadMap& map,
                            const std::vector<ScriptedActor>& actors,
                            const ScriptDynamics& dynamics);

}  // namespace actor_risk

#endif  // ACTOR_RISK_PHASE_SCRIPT_H_
