#ifndef ACTOR_RISK_SAMPLING_PLANNER_H_
#define ACTOR_RISK_SAMPLING_PLANNER_H_

#include <cstdint>

#include "actor_risk/collision.h"
#include "actor_risk/lattice.h"
#include "actor_risk/scenario.h"

namespace actor_risk {

struct PlannerConfig {
  int iteration_budget = 2000;
  uint64_t seed = 0;
  // Longitudinal distance to the goal line; <= 0 derives it as
  // target_speed * k * dt.
  double goal_advance = 0.0;
  // -1 uses the ego's current lane.
  int preferred_lane = -1;
  double steer_step = 2.0;
  double goal_tolerance = 2.0;
  double safety_margin = 0.5;
  // Longitudinal speed used to time-parameterize the path; <= 0 uses the
  // speed limit. Always clamped to the speed limit.
  double target_speed = 0.0;
  // Every n-th sample is replaced by the preferred-lane goal point.
  int goal_sample_period = 10;
  // Bound on |dy/dx| of tree edges.
  double max_lateral_slope = 0.35;
  // Ranking of partial plans: cost + weight * distance to the nearest goal.
  double partial_progress_weight = 2.0;
};

void ValidatePlannerConfig(const PlannerConfig& config);

enum class PlanStatus { kReachedGoal, kPartial, kInfeasible };

struct SamplingResult {
  Plan plan;
  PlanStatus status = PlanStatus::kInfeasible;
  int tree_size = 0;
  // Number of candidate edges rejected by the collision model.
  int rejected_edges = 0;

  bool partial() const { return status != PlanStatus::kReachedGoal; }
};

// Rewiring sampling tree (RRT*) over (x, y). Time along the tree is tied to
// the longitudinal coordinate (t = (x - x0) / v), so each edge is checked
// against the moving actors at the instants it is traversed and rewiring
// never retimes a subtree. Samples are drawn up front from `seed` alone; the
// world only influences which edges are accepted.
//
// The world must cover [t, t+k]; the returned trajectory spans [t, t+k] and
// holds its final position once the path ends.
SamplingResult PlanSampling(const RoadMap& map, const ActorState& ego, int t, int k, double dt,
                            const World& world, const RadiusMap& radii, double ego_radius,
                            const PlannerConfig& config);

}  // namespace actor_risk

#endif  // ACTOR_RISK_SAMPLING_PLANNER_H_
