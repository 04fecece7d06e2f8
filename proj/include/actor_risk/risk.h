#ifndef ACTOR_RISK_RISK_H_
#define ACTOR_RISK_RISK_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "actor_risk/collision.h"
#include "actor_risk/lattice.h"
#include "actor_risk/prediction.h"
#include "actor_risk/sampling_planner.h"
#include "actor_risk/scenario.h"

namespace actor_risk {

// ---------------------------------------------------------------------------
// Exact set-reduction risk on the maneuver lattice.
//
// Plan sets are compared by cardinality: with Z the feasible plans in the
// full world, Z_empty the in-bounds plans with no actors and Z_minus_i the
// feasible plans with actor i removed,
//
//   total risk  = (|Z_empty| - |Z|) / |Z_empty|
//   actor risk  = (|Z_minus_i| - |Z|) / |Z_empty|
//
// Both lie in [0, 1] because Z is a subset of Z_minus_i, itself a subset of
// Z_empty. Per-actor risks are not additive: two actors that redundantly
// block the same plans each get zero.
// ---------------------------------------------------------------------------

// Everything the lattice needs besides the ego state.
struct ExactRiskInput {
  RoadMap map;
  ActorState ego;
  double ego_radius = 1.2;
  int t = 0;
  double dt = 0.1;
  World world;  // each trajectory covers [t, t + lattice.horizon()]
  RadiusMap radii;
};

struct ExactRisk {
  uint64_t universe = 0;   // |Z_empty|
  uint64_t feasible = 0;   // |Z|
  double total = 0.0;
  std::map<ActorId, uint64_t> feasible_without;  // |Z_minus_i|
  std::map<ActorId, double> per_actor;
};

// Throws kDegenerate when |Z_empty| = 0. With `actors` empty every actor of
// the world is scored.
ExactRisk ComputeExactRisk(const ExactRiskInput& input, const LatticeConfig& lattice,
                           const std::vector<ActorId>& actors = {});

// Scenario-level forms; the ego starts from `ego` (default: the scenario's
// initial ego state) and the world is the ground truth over [t, t+k].
double TotalRiskExact(const Scenario& scenario, int t, int k, const LatticeConfig& lattice,
                      std::optional<ActorState> ego = std::nullopt);
double ActorRiskExact(const Scenario& scenario, const ActorId& actor, int t, int k,
                      const LatticeConfig& lattice, std::optional<ActorState> ego = std::nullopt);
ExactRiskInput ExactInputFor(const Scenario& scenario, int t, int k,
                             std::optional<ActorState> ego = std::nullopt);

// ---------------------------------------------------------------------------
// Difference operators.
// ---------------------------------------------------------------------------

// Mean per-waypoint Euclidean distance. Both trajectories must start at the
// same tick; the shorter one is padded by holding its final state.
double TrajDifferenceEuclidean(const Trajectory& a, const Trajectory& b);

// Distribution over the lattice universe. Feasible plans share the mass
// uniformly, then the whole distribution is mixed with the uniform one:
//   p = (1 - epsilon) * q + epsilon / |universe|
// so every entry is at least epsilon / |universe|. With no feasible plans
// the distribution is uniform.
struct PlanDistribution {
  std::vector<ManeuverSequence> support;
  std::vector<double> probabilities;
};

inline constexpr double kDefaultKlFloor = 1e-6;

PlanDistribution MakePlanDistribution(const std::vector<ManeuverSequence>& universe,
                                      const std::vector<ManeuverSequence>& feasible,
                                      double epsilon = kDefaultKlFloor);

// KL(p || q) in nats. Throws kInvalidArgument when supports differ.
double PlanDivergenceKl(const PlanDistribution& p, const PlanDistribution& q);

// ---------------------------------------------------------------------------
// Leave-one-out importance.
// ---------------------------------------------------------------------------

enum class RiskOperator { kEuclid, kKl };

struct ImportanceContext {
  RoadMap map;
  ActorState ego;
  double ego_radius = 1.2;
  int t = 0;
  int k = 50;
  double dt = 0.1;
  RadiusMap radii;
  PlannerConfig planner;
  std::optional<LatticeConfig> lattice;  // required for kKl
  double kl_floor = kDefaultKlFloor;
};

struct Importance {
  double value = 0.0;
  bool saturated = false;
  // Status of the plan in the full world (euclid operator only).
  PlanStatus full_status = PlanStatus::kReachedGoal;
};

// Change of the ego plan when `actor` is removed from `world`, with every
// random stream shared between the two planner runs.
Importance ActorImportance(const World& world, const ActorId& actor, const ImportanceContext& ctx,
                           RiskOperator op);

// Same as ActorImportance for every actor of the world, sharing the
// full-world planner run. `threads` > 1 evaluates actors concurrently; the
// result does not depend on it.
std::map<ActorId, Importance> AllActorImportances(const World& world, const ImportanceContext& ctx,
                                                  RiskOperator op, int threads = 1);

// ---------------------------------------------------------------------------
// Risk under prediction uncertainty.
// ---------------------------------------------------------------------------

struct RiskMoments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased; 0 for a single sample
  int samples = 0;
};

// Produces the j-th joint world sample.
using WorldSampler = std::function<World(int sample_index)>;

// Mean and variance of the importance of `actor` over `sample_count` sampled
// worlds. The planner seed is the same for every sample, so all variation
// comes from the sampled futures.
RiskMoments ExpectedActorRisk(const WorldSampler& sampler, int sample_count, const ActorId& actor,
                              const ImportanceContext& ctx, RiskOperator op);

// Sampler drawing every actor's future from SamplePredictions(history, k).
WorldSampler PredictionSampler(const World& histories, int k, const PredictionConfig& config);

// Convenience form over actor histories.
RiskMoments ExpectedActorRisk(const World& histories, const ActorId& actor,
                              const ImportanceContext& ctx, const PredictionConfig& config,
                              RiskOperator op);

// ---------------------------------------------------------------------------
// Risk-aware plan selection.
// ---------------------------------------------------------------------------

struct Selection {
  Plan plan;
  std::size_t index = 0;
  double collision_frequency = 0.0;
  bool all_collide = false;
};

// Candidate with the lowest collision frequency across sampled worlds; ties
// go to the lower cost, then the lexicographically smaller maneuver
// sequence. Throws kInvalidArgument on empty input.
Selection SelectMinRiskPlan(const PlanSet& candidates, const std::vector<World>& sampled_worlds,
                            const RadiusMap& radii, double ego_radius, double margin);

}  // namespace actor_risk

#endif  // ACTOR_RISK_RISK_H_
