#include "actor_risk/prediction.h"

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "test_util.h"

namespace actor_risk {
namespace {

using testing::Braking;
using testing::Straight;

Trajectory SingleState(const std::string& id, ActorState s, int tick = 0) {
  Trajectory t;
  t.actor_id = ActorId(id);
  t.start_tick = tick;
  t.states.push_back(s);
  return t;
}

TEST(PredictLinearTest, ClosedFormAlongHeading) {
  const Trajectory p = PredictLinear(SingleState("a", {0.0, 0.0, 0.0, 10.0}), 20);
  ASSERT_EQ(p.states.size(), 21u);
  EXPECT_EQ(p.start_tick, 0);
  for (int j = 0; j <= 20; ++j) {
    EXPECT_NEAR(p.states[j].x, j * 0.1 * 10.0, 1e-9);
    EXPECT_EQ(p.states[j].y, 0.0);
    EXPECT_EQ(p.states[j].speed, 10.0);
    EXPECT_EQ(p.states[j].heading, 0.0);
  }
}

TEST(PredictLinearTest, StartsAtLastHistoryTick) {
  const Trajectory history = Straight("a", 5.0, 1.75, 4.0, 30, 12);
  const Trajectory p = PredictLinear(history, 10);
  EXPECT_EQ(p.start_tick, 42);
  EXPECT_EQ(p.end_tick(), 52);
  EXPECT_EQ(p.states.front(), history.states.back());
}

TEST(PredictLinearTest, HeadingAndSpeedHeld) {
  const Trajectory p = PredictLinear(SingleState("a", {1.0, 2.0, 0.3, 7.0}), 30);
  for (const ActorState& s : p.states) {
    EXPECT_EQ(s.heading, 0.3);
    EXPECT_EQ(s.speed, 7.0);
  }
  EXPECT_NEAR(p.states.back().x, 1.0 + 7.0 * 3.0 * std::cos(0.3), 1e-9);
  EXPECT_NEAR(p.states.back().y, 2.0 + 7.0 * 3.0 * std::sin(0.3), 1e-9);
}

TEST(PredictLinearTest, EmptyHistoryThrows) {
  Trajectory empty;
  empty.actor_id = ActorId("a");
  EXPECT_THROW(PredictLinear(empty, 5), Error);
}

TEST(PredictionErrorTest, ConstantVelocityTruthGivesZero) {
  for (int k : {1, 10, 50, 200}) {
    const Trajectory truth = Straight("a", 3.0, 5.25, 9.0, 0, k);
    const Trajectory p = PredictLinear(SliceTrajectory(truth, 0, 0), k);
    EXPECT_LT(PredictionError(p, truth), 1e-9) << "k=" << k;
  }
}

TEST(PredictionErrorTest, DecelerationMatchesClosedForm) {
  const double v = 10.0, a = 2.0, dt = 0.1;
  const int k = 40;  // stops after 5 s, so the window ends before the stop
  const Trajectory truth = Braking("a", 0.0, 1.75, v, a, 0, k, dt);
  const Trajectory p = PredictLinear(SliceTrajectory(truth, 0, 0), k);
  double expected = 0.0;
  for (int j = 0; j <= k; ++j) expected += 0.5 * a * (j * dt) * (j * dt);
  expected /= k + 1;
  EXPECT_NEAR(PredictionError(p, truth), expected, 1e-6);
}

TEST(PredictionErrorTest, IdentityAndConstantOffset) {
  const Trajectory a = Straight("a", 0.0, 1.0, 5.0, 0, 20);
  Trajectory b = a;
  EXPECT_EQ(PredictionError(a, b), 0.0);
  for (ActorState& s : b.states) s.y += 1.0;
  EXPECT_NEAR(PredictionError(a, b), 1.0, 1e-12);
  EXPECT_EQ(PredictionError(a, b), PredictionError(b, a));
}

TEST(PredictionErrorTest, WindowMismatchThrows) {
  const Trajectory a = Straight("a", 0.0, 1.0, 5.0, 0, 20);
  EXPECT_THROW(PredictionError(a, Straight("a", 0.0, 1.0, 5.0, 1, 20)), Error);
  EXPECT_THROW(PredictionError(a, Straight("a", 0.0, 1.0, 5.0, 0, 19)), Error);
}

TEST(SamplePredictionsTest, ZeroNoiseEqualsLinear) {
  const Trajectory history = Straight("a", 0.0, 1.75, 8.0, 0, 5);
  PredictionConfig config;
  config.sample_count = 7;
  config.seed = 99;
  const auto samples = SamplePredictions(history, 25, config);
  ASSERT_EQ(samples.size(), 7u);
  const Trajectory linear = PredictLinear(history, 25);
  for (const Trajectory& s : samples) EXPECT_EQ(s, linear);
}

TEST(SamplePredictionsTest, RepeatedCallIsBitIdentical) {
  const Trajectory history = Straight("a", 0.0, 1.75, 8.0, 0, 5);
  PredictionConfig config;
  config.noise_accel_sigma = 1.5;
  config.noise_yawrate_sigma = 0.1;
  config.sample_count = 20;
  config.seed = 7;
  EXPECT_EQ(SamplePredictions(history, 30, config), SamplePredictions(history, 30, config));
  const auto a = SamplePredictions(history, 30, config);
  config.seed = 8;
  const auto b = SamplePredictions(history, 30, config);
  EXPECT_NE(a.front().states.back(), b.front().states.back());
}

TEST(SamplePredictionsTest, SampleDoesNotDependOnSampleCount) {
  const Trajectory history = Straight("a", 0.0, 1.75, 8.0, 0, 5);
  PredictionConfig few{1.0, 0.05, 3, 11};
  PredictionConfig many{1.0, 0.05, 30, 11};
  const auto a = SamplePredictions(history, 20, few);
  const auto b = SamplePredictions(history, 20, many);
  for (std::size_t j = 0; j < a.size(); ++j) EXPECT_EQ(a[j], b[j]);
}

TEST(SamplePredictionsTest, StreamsAreKeyedByActor) {
  PredictionConfig config{1.0, 0.0, 1, 3};
  const auto a = SamplePredictions(Straight("a", 0.0, 1.75, 8.0, 0, 5), 20, config);
  const auto b = SamplePredictions(Straight("b", 0.0, 1.75, 8.0, 0, 5), 20, config);
  EXPECT_NE(a[0].states.back().x, b[0].states.back().x);
}

// Endpoint displacement is dt^2 * sum_i (K - i + 1) a_i, so its variance is
// dt^4 sigma^2 K (K + 1) (2K + 1) / 6.
TEST(SamplePredictionsTest, EndpointVarianceMatchesIntegratedNoise) {
  const int k = 50;
  const double dt = 0.1, sigma = 1.0;
  const Trajectory history = Straight("a", 0.0, 1.75, 20.0, 0, 1, dt);
  PredictionConfig config{sigma, 0.0, 10000, 2024};
  const auto samples = SamplePredictions(history, k, config);
  const double linear_x = PredictLinear(history, k).states.back().x;
  std::vector<double> d;
  for (const Trajectory& s : samples) d.push_back(s.states.back().x - linear_x);
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / d.size();
  double var = 0.0;
  for (double v : d) var += (v - mean) * (v - mean);
  var /= d.size() - 1;
  const double expected = std::pow(dt, 4) * sigma * sigma * k * (k + 1) * (2 * k + 1) / 6.0;
  EXPECT_NEAR(var / expected, 1.0, 0.05);
}

TEST(SamplePredictionsTest, InvalidConfigRejected) {
  const Trajectory history = Straight("a", 0.0, 1.75, 8.0, 0, 5);
  EXPECT_THROW(SamplePredictions(history, 10, PredictionConfig{-1.0, 0.0, 1, 0}), Error);
  EXPECT_THROW(SamplePredictions(history, 10, PredictionConfig{0.0, 0.0, 0, 0}), Error);
}

TEST(PredictWorldTest, PredictsEveryActor) {
  World histories;
  histories[ActorId("a")] = Straight("a", 0.0, 1.75, 8.0, 0, 5);
  histories[ActorId("b")] = Straight("b", 10.0, 5.25, 6.0, 0, 5);
  const World p = PredictWorld(histories, 10);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p.at(ActorId("b")), PredictLinear(histories[ActorId("b")], 10));
}

}  // namespace
}  // namespace actor_risk
