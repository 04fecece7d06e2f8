#include "actor_risk/prediction.h"

#include <cmath>
#include <random>
#include <sstream>

#include "actor_risk/kernels.h"
#include "actor_risk/random.h"

namespace actor_risk {
namespace {

const ActorState& LastState(const Trajectory& history) {
  if (history.states.empty()) {
    Fail(ErrorCode::kInvalidArgument,
         "cannot predict actor " + history.actor_id.str() + " from an empty history");
  }
  return history.states.back();
}

// Integrates speed/heading increments. `accel` and `yaw_rate` may be null for
// the noise-free model.
Trajectory Integrate(const Trajectory& history, int k, const std::vector<double>* accel,
                     const std::vector<double>* yaw_rate) {
  if (k < 1) Fail(ErrorCode::kInvalidArgument, "prediction horizon must be >= 1");
  const ActorState& last = LastState(history);
  Trajectory out;
  out.actor_id = history.actor_id;
  out.start_tick = history.end_tick();
  out.dt = history.dt;
  out.states.reserve(k + 1);
  ActorState s = last;
  out.states.push_back(s);
  for (int j = 0; j < k; ++j) {
    if (accel) s.speed = std::max(0.0, s.speed + (*accel)[j] * history.dt);
    if (yaw_rate) s.heading = NormalizeHeading(s.heading + (*yaw_rate)[j] * history.dt);
    s.x += s.speed * std::cos(s.heading) * history.dt;
    s.y += s.speed * std::sin(s.heading) * history.dt;
    out.states.push_back(s);
  }
  return out;
}

}  // namespace

void ValidatePredictionConfig(const PredictionConfig& config) {
  if (!(config.noise_accel_sigma >= 0.0) || !(config.noise_yawrate_sigma >= 0.0)) {
    Fail(ErrorCode::kConfig, "prediction noise sigmas must be >= 0");
  }
  if (config.sample_count < 1) Fail(ErrorCode::kConfig, "sample_count must be >= 1");
}

Trajectory PredictLinear(const Trajectory& history, int k) {
  return Integrate(history, k, nullptr, nullptr);
}

std::vector<Trajectory> SamplePredictions(const Trajectory& history, int k,
                                          const PredictionConfig& config) {
  ValidatePredictionConfig(config);
  LastState(history);
  std::vector<Trajectory> samples;
  samples.reserve(config.sample_count);
  const bool noisy = config.noise_accel_sigma > 0.0 || config.noise_yawrate_sigma > 0.0;
  if (!noisy) {
    const Trajectory linear = PredictLinear(history, k);
    samples.assign(config.sample_count, linear);
    return samples;
  }
  const uint64_t actor_key = StableHash(history.actor_id.str());
  const auto t = static_cast<uint64_t>(history.end_tick());
  std::vector<double> accel(k), yaw(k);
  for (int j = 0; j < config.sample_count; ++j) {
    std::mt19937_64 rng(StreamSeed(config.seed, {actor_key, t, static_cast<uint64_t>(j)}));
    std::normal_distribution<double> unit(0.0, 1.0);
    for (int n = 0; n < k; ++n) {
      accel[n] = config.noise_accel_sigma * unit(rng);
      yaw[n] = config.noise_yawrate_sigma * unit(rng);
    }
    samples.push_back(Integrate(history, k, &accel, &yaw));
  }
  return samples;
}

double PredictionError(const Trajectory& predicted, const Trajectory& realized) {
  if (predicted.start_tick != realized.start_tick ||
      predicted.states.size() != realized.states.size() || predicted.states.empty()) {
    std::ostringstream msg;
    msg << "prediction window [" << predicted.start_tick << ", " << predicted.end_tick()
        << "] does not match realized window [" << realized.start_tick << ", "
        << realized.end_tick() << "]";
    Fail(ErrorCode::kInvalidArgument, msg.str());
  }
  const std::size_t n = predicted.states.size();
  std::vector<double> px(n), py(n), rx(n), ry(n);
  for (std::size_t i = 0; i < n; ++i) {
    px[i] = predicted.states[i].x;
    py[i] = predicted.states[i].y;
    rx[i] = realized.states[i].x;
    ry[i] = realized.states[i].y;
  }
  return kernels::SumDistances(px, py, rx, ry) / static_cast<double>(n);
}

World PredictWorld(const World& histories, int k) {
  World out;
  for (const auto& [id, history] : histories) out.emplace(id, PredictLinear(history, k));
  return out;
}

}  // namespace actor_risk
