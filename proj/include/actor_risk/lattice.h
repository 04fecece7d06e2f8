#ifndef ACTOR_RISK_LATTICE_H_
#define ACTOR_RISK_LATTICE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "actor_risk/collision.h"
#include "actor_risk/scenario.h"

namespace actor_risk {

// Ordered: lexicographic comparison of maneuver sequences follows this order.
enum class Maneuver : uint8_t { kKeep, kShiftLeft, kShiftRight, kBrake, kAccelerate };

std::string ManeuverName(Maneuver m);
// Accepts keep, shift_left, shift_right, brake, accelerate.
Maneuver ParseManeuver(const std::string& name);
// Comma-separated list.
std::vector<Maneuver> ParseManeuverList(const std::string& list);

using ManeuverSequence = std::vector<Maneuver>;

struct LatticeConfig {
  int decision_steps = 3;
  int ticks_per_step = 10;
  std::vector<Maneuver> maneuvers{Maneuver::kKeep, Maneuver::kShiftLeft, Maneuver::kShiftRight};
  double accel = 1.0;         // m/s^2 applied over an accelerate step
  double brake_decel = 2.0;   // m/s^2 applied over a brake step
  double safety_margin = 0.5;
  // Upper bound on |maneuvers|^decision_steps.
  uint64_t universe_cap = 1'000'000;

  int horizon() const { return decision_steps * ticks_per_step; }
};

// Throws kConfig on inconsistent settings and kCapExceeded when the
// enumeration would exceed universe_cap.
void ValidateLatticeConfig(const LatticeConfig& config);

struct Plan {
  Trajectory trajectory;
  double cost = 0.0;
  std::optional<ManeuverSequence> maneuvers;
};

struct PlanSet {
  std::vector<Plan> plans;
  // Number of in-bounds maneuver sequences (|Z_empty|).
  uint64_t universe_size = 0;
};

// Renders one sequence starting from `ego` at tick t. Returns nullopt when
// the sequence leaves the road, exceeds the speed limit or runs past
// road_length.
std::optional<Plan> RenderManeuvers(const RoadMap& map, const ActorState& ego, int t, double dt,
                                    const LatticeConfig& lattice, double ego_radius,
                                    const ManeuverSequence& sequence);

struct LatticeWorld {
  const World* world = nullptr;  // nullptr: empty world
  const RadiusMap* radii = nullptr;
  double ego_radius = 1.2;
};

// Enumerates every maneuver sequence in lexicographic order, keeping the
// in-bounds sequences that are collision-free against `world`. With an empty
// world the result holds exactly universe_size plans.
PlanSet EnumeratePlans(const RoadMap& map, const ActorState& ego, int t, double dt,
                       const LatticeConfig& lattice, const LatticeWorld& world);

// Counts only, without materializing plans.
struct LatticeCounts {
  uint64_t universe = 0;
  uint64_t feasible = 0;
};
LatticeCounts CountPlans(const RoadMap& map, const ActorState& ego, int t, double dt,
                         const LatticeConfig& lattice, const LatticeWorld& world);

// Counts for leave-one-out ablation from a single enumeration.
// blocked_only_by[i] is the number of in-bounds sequences that collide with
// the i-th actor of the world (in map order) and with no other actor, so
// removing actor i leaves feasible + blocked_only_by[i] plans.
struct LatticeAblationCounts {
  uint64_t universe = 0;
  uint64_t feasible = 0;
  std::vector<uint64_t> blocked_only_by;
};
LatticeAblationCounts CountPlansByActor(const RoadMap& map, const ActorState& ego, int t,
                                        double dt, const LatticeConfig& lattice,
                                        const LatticeWorld& world);

}  // namespace actor_risk

#endif  // ACTOR_RISK_LATTICE_H_
