#ifndef ACTOR_RISK_SIMULATION_H_
#define ACTOR_RISK_SIMULATION_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "actor_risk/lattice.h"
#include "actor_risk/prediction.h"
#include "actor_risk/risk.h"
#include "actor_risk/sampling_planner.h"
#include "actor_risk/scenario.h"

namespace actor_risk {

struct RunConfig {
  uint64_t seed = 42;
  int horizon = 50;
  int replan_every = 15;
  // sample_count >= 2 enables the Monte-Carlo columns. The seed field is
  // ignored; sample streams are keyed by the run seed.
  PredictionConfig prediction;
  // The seed field is ignored; every replan derives its own from the run
  // seed and the tick. target_speed is the ego's cruise speed.
  PlannerConfig planner;
  // Each replan times its path at min(cruise speed, current speed + this).
  double plan_speed_headroom = 3.0;
  // Acceleration limit of the ego's car-following controller (m/s^2).
  double ego_max_accel = 1.5;
  // Used by the KL operator and the exact oracle; horizon() must equal
  // `horizon` when either is enabled.
  LatticeConfig lattice{5, 10};
  bool euclid = true;
  bool kl = false;
  bool exact = false;
  // Worker threads for per-actor evaluation. Results do not depend on it.
  int threads = 1;
};

void ValidateRunConfig(const RunConfig& config);

// One row per (replan tick, npc).
struct StepRecord {
  int tick = 0;
  std::string phase;
  ActorId actor_id;
  std::optional<double> gamma_euclid;
  std::optional<double> gamma_kl;
  std::optional<double> rho_exact;
  std::optional<double> mean_gamma;
  std::optional<double> var_gamma;
  // Mean displacement between the prediction made at `tick` and the ground
  // truth over [tick, tick+k]; absent when the run ends first.
  std::optional<double> prediction_error;
  int ego_lane = 0;
  bool plan_partial = false;
};

struct SummaryRow {
  std::string phase;
  ActorId actor_id;
  std::string metric;
  int count = 0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

struct RunResult {
  std::vector<int> replan_ticks;
  std::vector<StepRecord> records;
  // Executed ego motion over [0, horizon_ticks].
  Trajectory ego;
  std::vector<SummaryRow> summary;
};

// Closed-loop run over the scenario's ground truth. At every replan tick the
// npc histories are extrapolated, the ego replans against the predictions
// and each npc is scored. Between replans the ego changes lanes toward the
// lane its plan ends in, subject to gap acceptance, while an IDM controller
// keeps its distance to the vehicle ahead.
RunResult RunSimulation(const Scenario& scenario, const RunConfig& config);

// Linear-interpolated quantile (type 7). `values` must be non-empty.
double Quantile(std::vector<double> values, double q);

// Per (phase, actor, metric) quartiles over replan ticks. Phases appear in
// scenario order, actors in id order.
std::vector<SummaryRow> SummarizeByPhase(const std::vector<StepRecord>& records,
                                         const std::vector<PhaseSpan>& phases);

// Looks up the median of a metric; nullopt when absent.
std::optional<double> SummaryMedian(const std::vector<SummaryRow>& summary,
                                    const std::string& phase, const ActorId& actor,
                                    const std::string& metric);

}  // namespace actor_risk

#endif  // ACTOR_RISK_SIMULATION_H_
