#include "actor_risk/simulation.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include "actor_risk/random.h"

namespace actor_risk {
namespace {

// IDM parameters for the executed ego motion.
constexpr double kIdmComfortDecel = 3.0;
constexpr double kIdmMinGap = 2.0;
constexpr double kIdmTimeHeadway = 1.2;
constexpr double kMaxBrake = 8.0;
// The executed ego holds lane centers and moves one lane at a time toward the
// lane its plan ends in, at this lateral speed, when the gap there is clear.
constexpr double kLateralSpeed = 1.5;

constexpr uint64_t kPlannerStream = 0x706c616eULL;
constexpr uint64_t kSampleStream = 0x73616d70ULL;

double DesiredSpeed(const RoadMap& map, const PlannerConfig& planner) {
  const double v = planner.target_speed > 0.0 ? planner.target_speed : map.speed_limit;
  return std::min(v, map.speed_limit);
}

double IdmAccel(double v, double v0, double max_accel,
                std::optional<std::pair<double, double>> lead) {
  double a = 1.0 - std::pow(v / v0, 4.0);
  if (lead) {
    const auto [gap, lead_speed] = *lead;
    const double dv = v - lead_speed;
    const double s_star =
        kIdmMinGap + std::max(0.0, v * kIdmTimeHeadway +
                                       v * dv / (2.0 * std::sqrt(max_accel * kIdmComfortDecel)));
    const double s = std::max(gap, 0.1);
    a -= (s_star / s) * (s_star / s);
  }
  return std::max(-kMaxBrake, max_accel * a);
}

template <typename Fn>
void ForEachIndex(int n, int threads, Fn fn) {
  threads = std::clamp(threads, 1, std::max(1, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> workers;
  for (int w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (int i = w; i < n; i += threads) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& t : workers) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

class EgoDriver {
 public:
  EgoDriver(const Scenario& scenario, const RunConfig& config)
      : scenario_(scenario), v0_(DesiredSpeed(scenario.map, config.planner)),
        max_accel_(config.ego_max_accel), margin_(config.planner.safety_margin) {}

  // Advances `state` by one tick from `tick` along `plan`. A lane change, once
  // started, runs until the ego reaches the new lane center.
  ActorState Step(const ActorState& state, int tick, const std::optional<Trajectory>& plan) {
    const double dt = scenario_.dt;
    const RoadMap& map = scenario_.map;
    const double vx = std::max(0.0, state.speed * std::cos(state.heading));
    if (!lane_) lane_ = map.LaneOf(state.y);
    if (state.y == map.LaneCenter(*lane_) && plan && !plan->states.empty()) {
      const int destination = map.LaneOf(plan->states.back().y);
      const int next_lane = *lane_ + (destination > *lane_) - (destination < *lane_);
      if (next_lane != *lane_ && GapIsClear(state, vx, next_lane, tick)) lane_ = next_lane;
    }
    const double target = map.LaneCenter(*lane_);
    const double a = IdmAccel(vx, v0_, max_accel_, LeadOf(state, target, tick));
    const double v = std::clamp(vx + a * dt, 0.0, map.speed_limit);
    ActorState next = state;
    next.x = state.x + v * dt;
    const double step = kLateralSpeed * dt;
    next.y = std::abs(target - state.y) <= step ? target
                                                : state.y + std::copysign(step, target - state.y);
    const double vy = (next.y - state.y) / dt;
    next.speed = std::hypot(v, vy);
    next.heading = v == 0.0 && vy == 0.0 ? 0.0 : std::atan2(vy, v);
    return next;
  }

 private:
  // Gap and speed of the nearest npc ahead that overlaps the ego's current
  // position or its target lane center.
  std::optional<std::pair<double, double>> LeadOf(const ActorState& ego, double target_y,
                                                  int tick) const {
    std::optional<std::pair<double, double>> lead;
    for (const auto& [id, trajectory] : scenario_.npc_trajectories) {
      if (!trajectory.covers(tick)) continue;
      const ActorState& s = trajectory.at(tick);
      const double r = scenario_.ego_radius + scenario_.RadiusOf(id);
      const double dy = std::min(std::abs(s.y - ego.y), std::abs(s.y - target_y));
      if (s.x <= ego.x || dy >= r + margin_) continue;
      const double gap = s.x - ego.x - r;
      if (!lead || gap < lead->first) lead = {{gap, s.speed * std::cos(s.heading)}};
    }
    return lead;
  }

  // True when no npc in `lane` is within the lane-change acceptance window
  // around the ego.
  bool GapIsClear(const ActorState& ego, double vx, int lane, int tick) const {
    const RoadMap& map = scenario_.map;
    for (const auto& [id, trajectory] : scenario_.npc_trajectories) {
      if (!trajectory.covers(tick)) continue;
      const ActorState& s = trajectory.at(tick);
      if (std::abs(s.y - map.LaneCenter(lane)) >= 0.5 * map.lane_width + scenario_.RadiusOf(id)) {
        continue;
      }
      const double r = scenario_.ego_radius + scenario_.RadiusOf(id) + margin_ + kIdmMinGap;
      const double vs = s.speed * std::cos(s.heading);
      const double dx = s.x - ego.x;
      if (dx >= 0.0 && dx < r + kIdmTimeHeadway * std::max(0.0, vx - vs)) return false;
      if (dx < 0.0 && -dx < r + kIdmTimeHeadway * std::max(0.0, vs - vx)) return false;
    }
    return true;
  }

  const Scenario& scenario_;
  double v0_;
  double max_accel_;
  double margin_;
  std::optional<int> lane_;
};

}  // namespace

void ValidateRunConfig(const RunConfig& config) {
  if (config.replan_every < 1) Fail(ErrorCode::kConfig, "replan_every must be >= 1");
  if (config.horizon < config.replan_every) {
    Fail(ErrorCode::kConfig, "horizon must be >= replan_every");
  }
  if (config.threads < 1) Fail(ErrorCode::kConfig, "threads must be >= 1");
  if (!(config.ego_max_accel > 0.0)) Fail(ErrorCode::kConfig, "ego_max_accel must be > 0");
  if (!(config.plan_speed_headroom > 0.0)) {
    Fail(ErrorCode::kConfig, "plan_speed_headroom must be > 0");
  }
  if (!config.euclid && !config.kl) Fail(ErrorCode::kConfig, "no risk operator selected");
  ValidatePlannerConfig(config.planner);
  ValidatePredictionConfig(config.prediction);
  if (config.kl || config.exact) {
    ValidateLatticeConfig(config.lattice);
    if (config.lattice.horizon() != config.horizon) {
      Fail(ErrorCode::kConfig, "lattice steps * ticks_per_step must equal the horizon");
    }
  }
}

RunResult RunSimulation(const Scenario& scenario, const RunConfig& config) {
  ValidateScenario(scenario);
  ValidateRunConfig(config);
  const int k = config.horizon;
  const int total = scenario.horizon_ticks;
  EgoDriver driver(scenario, config);

  RunResult result;
  result.ego.actor_id = EgoId();
  result.ego.start_tick = 0;
  result.ego.dt = scenario.dt;
  result.ego.states.push_back(scenario.ego_initial);

  for (int t = 0; t < total; t += config.replan_every) {
    result.replan_ticks.push_back(t);
    const ActorState ego = result.ego.states.back();

    World histories;
    for (const auto& [id, trajectory] : scenario.npc_trajectories) {
      if (!trajectory.covers(t)) continue;
      histories.emplace(id, SliceTrajectory(trajectory, trajectory.start_tick,
                                            t - trajectory.start_tick));
    }
    const World predicted = PredictWorld(histories, k);

    ImportanceContext ctx;
    ctx.map = scenario.map;
    ctx.ego = ego;
    ctx.ego_radius = scenario.ego_radius;
    ctx.t = t;
    ctx.k = k;
    ctx.dt = scenario.dt;
    ctx.radii = scenario.actor_radius;
    ctx.planner = config.planner;
    ctx.planner.seed = StreamSeed(config.seed, {kPlannerStream, static_cast<uint64_t>(t)});
    ctx.planner.target_speed =
        std::min(DesiredSpeed(scenario.map, config.planner),
                 std::max(0.0, ego.speed * std::cos(ego.heading)) + config.plan_speed_headroom);
    if (config.kl) ctx.lattice = config.lattice;

    const SamplingResult plan = PlanSampling(ctx.map, ego, t, k, ctx.dt, predicted, ctx.radii,
                                             ctx.ego_radius, ctx.planner);
    std::map<ActorId, Importance> euclid;
    std::map<ActorId, Importance> kl;
    if (config.euclid) euclid = AllActorImportances(predicted, ctx, RiskOperator::kEuclid, config.threads);
    if (config.kl) kl = AllActorImportances(predicted, ctx, RiskOperator::kKl, config.threads);

    std::optional<ExactRisk> exact;
    if (config.exact && t + k <= total) {
      ExactRiskInput input = ExactInputFor(scenario, t, k, ego);
      exact = ComputeExactRisk(input, config.lattice);
    }

    std::vector<ActorId> ids;
    for (const auto& [id, history] : histories) ids.push_back(id);
    std::vector<std::optional<RiskMoments>> moments(ids.size());
    if (config.prediction.sample_count >= 2) {
      PredictionConfig pc = config.prediction;
      pc.seed = StreamSeed(config.seed, {kSampleStream});
      const WorldSampler sampler = PredictionSampler(histories, k, pc);
      const RiskOperator op = config.euclid ? RiskOperator::kEuclid : RiskOperator::kKl;
      ForEachIndex(static_cast<int>(ids.size()), config.threads, [&](int i) {
        moments[i] = ExpectedActorRisk(sampler, pc.sample_count, ids[i], ctx, op);
      });
    }

    const std::string phase = scenario.PhaseAt(t);
    const int ego_lane = scenario.map.LaneOf(ego.y);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const ActorId& id = ids[i];
      StepRecord r;
      r.tick = t;
      r.phase = phase;
      r.actor_id = id;
      r.ego_lane = ego_lane;
      r.plan_partial = plan.partial();
      if (config.euclid) r.gamma_euclid = euclid.at(id).value;
      if (config.kl) r.gamma_kl = kl.at(id).value;
      if (exact) r.rho_exact = exact->per_actor.at(id);
      if (moments[i]) {
        r.mean_gamma = moments[i]->mean;
        r.var_gamma = moments[i]->variance;
      }
      const Trajectory& truth = scenario.npc_trajectories.at(id);
      if (t + k <= total && truth.covers(t + k)) {
        r.prediction_error = PredictionError(predicted.at(id), SliceTrajectory(truth, t, k));
      }
      result.records.push_back(std::move(r));
    }

    std::optional<Trajectory> path;
    if (plan.status != PlanStatus::kInfeasible) path = plan.plan.trajectory;
    const int stop = std::min(total, t + config.replan_every);
    for (int tick = t; tick < stop; ++tick) {
      result.ego.states.push_back(driver.Step(result.ego.states.back(), tick, path));
    }
  }
  result.summary = SummarizeByPhase(result.records, scenario.phases);
  return result;
}

double Quantile(std::vector<double> values, double q) {
  if (values.empty()) Fail(ErrorCode::kInvalidArgument, "quantile of an empty set");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<SummaryRow> SummarizeByPhase(const std::vector<StepRecord>& records,
                                         const std::vector<PhaseSpan>& phases) {
  static const char* kMetrics[] = {"gamma_euclid", "gamma_kl", "rho_exact", "mean_gamma",
                                   "prediction_error"};
  auto field = [](const StepRecord& r, int m) -> std::optional<double> {
    switch (m) {
      case 0: return r.gamma_euclid;
      case 1: return r.gamma_kl;
      case 2: return r.rho_exact;
      case 3: return r.mean_gamma;
      default: return r.prediction_error;
    }
  };
  std::vector<std::string> order;
  for (const PhaseSpan& p : phases) order.push_back(p.name);
  for (const StepRecord& r : records) {
    if (std::find(order.begin(), order.end(), r.phase) == order.end()) order.push_back(r.phase);
  }
  std::vector<SummaryRow> out;
  for (const std::string& phase : order) {
    std::map<ActorId, std::vector<const StepRecord*>> by_actor;
    for (const StepRecord& r : records) {
      if (r.phase == phase) by_actor[r.actor_id].push_back(&r);
    }
    for (const auto& [id, rows] : by_actor) {
      for (int m = 0; m < 5; ++m) {
        std::vector<double> values;
        for (const StepRecord* r : rows) {
          if (auto v = field(*r, m)) values.push_back(*v);
        }
        if (values.empty()) continue;
        out.push_back({phase, id, kMetrics[m], static_cast<int>(values.size()),
                       Quantile(values, 0.25), Quantile(values, 0.5), Quantile(values, 0.75)});
      }
    }
  }
  return out;
}

std::optional<double> SummaryMedian(const std::vector<SummaryRow>& summary,
                                    const std::string& phase, const ActorId& actor,
                                    const std::string& metric) {
  for (const SummaryRow& row : summary) {
    if (row.phase == phase && row.actor_id == actor && row.metric == metric) return row.median;
  }
  return std::nullopt;
}

}  // namespace actor_risk
