#ifndef ACTOR_RISK_PREDICTION_H_
#define ACTOR_RISK_PREDICTION_H_

#include <cstdint>
#include <map>
#include <vector>

#include "actor_risk/scenario.h"

namespace actor_risk {

// Gaussian perturbation model for sampled futures: every tick draws an
// independent longitudinal acceleration and yaw rate, which are integrated
// through the same kinematics as the deterministic prediction.
struct PredictionConfig {
  double noise_accel_sigma = 0.0;    // m/s^2
  double noise_yawrate_sigma = 0.0;  // rad/s
  int sample_count = 1;
  uint64_t seed = 0;
};

void ValidatePredictionConfig(const PredictionConfig& config);

// Constant-velocity, constant-heading extrapolation from the last state of
// `history` over k ticks. The result spans [t, t+k] where t is the last tick
// of the history.
Trajectory PredictLinear(const Trajectory& history, int k);

// `sample_count` perturbed futures. Sample j is drawn from a stream keyed by
// (seed, actor_id, t, j), so results do not depend on which other actors are
// being sampled or in which order. With both sigmas zero every sample equals
// PredictLinear exactly.
std::vector<Trajectory> SamplePredictions(const Trajectory& history, int k,
                                          const PredictionConfig& config);

// Mean Euclidean displacement per waypoint between two trajectories covering
// the same tick window. Throws kInvalidArgument on window mismatch.
double PredictionError(const Trajectory& predicted, const Trajectory& realized);

// Deterministic predictions for every actor in `histories`.
World PredictWorld(const World& histories, int k);

}  // namespace actor_risk

#endif  // ACTOR_RISK_PREDICTION_H_
