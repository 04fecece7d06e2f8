#include "actor_risk/risk.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <thread>

#include "actor_risk/kernels.h"

namespace actor_risk {
namespace {

World Without(const World& world, const ActorId& actor) {
  World out = world;
  out.erase(actor);
  return out;
}

void RequireActor(const World& world, const ActorId& actor) {
  if (!world.contains(actor)) Fail(ErrorCode::kInvalidArgument, "unknown actor id " + actor.str());
}

std::vector<ManeuverSequence> Sequences(const PlanSet& set) {
  std::vector<ManeuverSequence> out;
  out.reserve(set.plans.size());
  for (const Plan& p : set.plans) out.push_back(*p.maneuvers);
  return out;
}

const LatticeConfig& RequireLattice(const ImportanceContext& ctx) {
  if (!ctx.lattice) Fail(ErrorCode::kConfig, "the KL operator needs a lattice configuration");
  if (ctx.lattice->horizon() != ctx.k) {
    Fail(ErrorCode::kConfig, "lattice decision_steps * ticks_per_step must equal the horizon k");
  }
  return *ctx.lattice;
}

// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index writes
// only its own output slot.
template <typename Fn>
void ParallelFor(int n, int threads, Fn fn) {
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

Importance EuclidFrom(const SamplingResult& full, const World& world, const ActorId& actor,
                      const ImportanceContext& ctx) {
  const SamplingResult minus = PlanSampling(ctx.map, ctx.ego, ctx.t, ctx.k, ctx.dt,
                                            Without(world, actor), ctx.radii, ctx.ego_radius,
                                            ctx.planner);
  Importance out;
  out.full_status = full.status;
  const bool full_ok = full.status != PlanStatus::kInfeasible;
  const bool minus_ok = minus.status != PlanStatus::kInfeasible;
  if (!full_ok && minus_ok) {
    out.value = ctx.map.road_length / ctx.k;
    out.saturated = true;
  } else if (!full_ok && !minus_ok) {
    out.value = 0.0;
  } else {
    out.value = TrajDifferenceEuclidean(full.plan.trajectory, minus.plan.trajectory);
  }
  return out;
}

struct KlBaseline {
  std::vector<ManeuverSequence> universe;
  std::vector<ManeuverSequence> feasible;
};

KlBaseline KlBaselineFor(const World& world, const ImportanceContext& ctx) {
  const LatticeConfig& lattice = RequireLattice(ctx);
  KlBaseline b;
  b.universe = Sequences(EnumeratePlans(ctx.map, ctx.ego, ctx.t, ctx.dt, lattice,
                                        LatticeWorld{nullptr, nullptr, ctx.ego_radius}));
  if (b.universe.empty()) {
    Fail(ErrorCode::kDegenerate, "the lattice admits no in-bounds plan (|Z_empty| = 0)");
  }
  b.feasible = Sequences(EnumeratePlans(ctx.map, ctx.ego, ctx.t, ctx.dt, lattice,
                                        LatticeWorld{&world, &ctx.radii, ctx.ego_radius}));
  return b;
}

Importance KlFrom(const KlBaseline& base, const World& world, const ActorId& actor,
                  const ImportanceContext& ctx) {
  const World minus_world = Without(world, actor);
  const auto minus = Sequences(EnumeratePlans(
      ctx.map, ctx.ego, ctx.t, ctx.dt, *ctx.lattice,
      LatticeWorld{&minus_world, &ctx.radii, ctx.ego_radius}));
  Importance out;
  out.saturated = base.feasible.empty() && !minus.empty();
  out.value = PlanDivergenceKl(MakePlanDistribution(base.universe, base.feasible, ctx.kl_floor),
                               MakePlanDistribution(base.universe, minus, ctx.kl_floor));
  return out;
}

}  // namespace

ExactRisk ComputeExactRisk(const ExactRiskInput& input, const LatticeConfig& lattice,
                           const std::vector<ActorId>& actors) {
  for (const ActorId& id : actors) RequireActor(input.world, id);
  const LatticeAblationCounts counts =
      CountPlansByActor(input.map, input.ego, input.t, input.dt, lattice,
                        LatticeWorld{&input.world, &input.radii, input.ego_radius});
  if (counts.universe == 0) {
    Fail(ErrorCode::kDegenerate, "the lattice admits no in-bounds plan (|Z_empty| = 0)");
  }
  ExactRisk out;
  out.universe = counts.universe;
  out.feasible = counts.feasible;
  const double universe = static_cast<double>(out.universe);
  out.total = static_cast<double>(out.universe - out.feasible) / universe;
  std::size_t index = 0;
  for (const auto& [id, trajectory] : input.world) {
    const uint64_t only = counts.blocked_only_by[index++];
    if (!actors.empty() && std::find(actors.begin(), actors.end(), id) == actors.end()) continue;
    out.feasible_without[id] = out.feasible + only;
    out.per_actor[id] = static_cast<double>(only) / universe;
  }
  return out;
}

ExactRiskInput ExactInputFor(const Scenario& scenario, int t, int k,
                             std::optional<ActorState> ego) {
  ExactRiskInput input;
  input.map = scenario.map;
  input.ego = ego.value_or(scenario.ego_initial);
  input.ego_radius = scenario.ego_radius;
  input.t = t;
  input.dt = scenario.dt;
  input.world = SliceWorld(scenario, t, k);
  input.radii = scenario.actor_radius;
  return input;
}

double TotalRiskExact(const Scenario& scenario, int t, int k, const LatticeConfig& lattice,
                      std::optional<ActorState> ego) {
  if (lattice.horizon() != k) {
    Fail(ErrorCode::kConfig, "lattice decision_steps * ticks_per_step must equal k");
  }
  ExactRiskInput input = ExactInputFor(scenario, t, k, ego);
  ValidateLatticeConfig(lattice);
  const LatticeCounts empty = CountPlans(input.map, input.ego, t, input.dt, lattice,
                                         LatticeWorld{nullptr, nullptr, input.ego_radius});
  if (empty.universe == 0) {
    Fail(ErrorCode::kDegenerate, "the lattice admits no in-bounds plan (|Z_empty| = 0)");
  }
  const uint64_t feasible = CountPlans(input.map, input.ego, t, input.dt, lattice,
                                       LatticeWorld{&input.world, &input.radii, input.ego_radius})
                                .feasible;
  return static_cast<double>(empty.universe - feasible) / static_cast<double>(empty.universe);
}

double ActorRiskExact(const Scenario& scenario, const ActorId& actor, int t, int k,
                      const LatticeConfig& lattice, std::optional<ActorState> ego) {
  if (lattice.horizon() != k) {
    Fail(ErrorCode::kConfig, "lattice decision_steps * ticks_per_step must equal k");
  }
  if (!scenario.npc_trajectories.contains(actor)) {
    Fail(ErrorCode::kInvalidArgument, "unknown actor id " + actor.str());
  }
  return ComputeExactRisk(ExactInputFor(scenario, t, k, ego), lattice, {actor}).per_actor.at(actor);
}

double TrajDifferenceEuclidean(const Trajectory& a, const Trajectory& b) {
  if (a.states.empty() || b.states.empty()) {
    Fail(ErrorCode::kInvalidArgument, "cannot compare empty trajectories");
  }
  if (a.start_tick != b.start_tick) {
    std::ostringstream msg;
    msg << "trajectories start at different ticks (" << a.start_tick << " vs " << b.start_tick << ")";
    Fail(ErrorCode::kInvalidArgument, msg.str());
  }
  const std::size_t n = std::max(a.states.size(), b.states.size());
  std::vector<double> ax(n), ay(n), bx(n), by(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ActorState& sa = a.states[std::min(i, a.states.size() - 1)];
    const ActorState& sb = b.states[std::min(i, b.states.size() - 1)];
    ax[i] = sa.x;
    ay[i] = sa.y;
    bx[i] = sb.x;
    by[i] = sb.y;
  }
  return kernels::SumDistances(ax, ay, bx, by) / static_cast<double>(n);
}

PlanDistribution MakePlanDistribution(const std::vector<ManeuverSequence>& universe,
                                      const std::vector<ManeuverSequence>& feasible,
                                      double epsilon) {
  if (universe.empty()) Fail(ErrorCode::kInvalidArgument, "plan distribution over an empty universe");
  if (!(epsilon > 0.0) || epsilon > 1.0) {
    Fail(ErrorCode::kInvalidArgument, "distribution floor must lie in (0, 1]");
  }
  std::map<ManeuverSequence, std::size_t> index;
  for (std::size_t i = 0; i < universe.size(); ++i) index.emplace(universe[i], i);
  PlanDistribution out;
  out.support = universe;
  const double n = static_cast<double>(universe.size());
  out.probabilities.assign(universe.size(), feasible.empty() ? 1.0 / n : epsilon / n);
  if (feasible.empty()) return out;
  const double share = (1.0 - epsilon) / static_cast<double>(feasible.size());
  for (const ManeuverSequence& s : feasible) {
    auto it = index.find(s);
    if (it == index.end()) {
      Fail(ErrorCode::kInvalidArgument, "feasible plan outside the distribution universe");
    }
    out.probabilities[it->second] += share;
  }
  return out;
}

double PlanDivergenceKl(const PlanDistribution& p, const PlanDistribution& q) {
  if (p.support != q.support || p.probabilities.size() != q.probabilities.size()) {
    Fail(ErrorCode::kInvalidArgument, "plan distributions are over different universes");
  }
  double kl = 0.0;
  for (std::size_t i = 0; i < p.probabilities.size(); ++i) {
    const double pi = p.probabilities[i];
    const double qi = q.probabilities[i];
    if (pi > 0.0 && pi != qi) kl += pi * std::log(pi / qi);
  }
  return std::max(0.0, kl);
}

Importance ActorImportance(const World& world, const ActorId& actor, const ImportanceContext& ctx,
                           RiskOperator op) {
  RequireActor(world, actor);
  if (op == RiskOperator::kKl) return KlFrom(KlBaselineFor(world, ctx), world, actor, ctx);
  const SamplingResult full = PlanSampling(ctx.map, ctx.ego, ctx.t, ctx.k, ctx.dt, world,
                                           ctx.radii, ctx.ego_radius, ctx.planner);
  return EuclidFrom(full, world, actor, ctx);
}

std::map<ActorId, Importance> AllActorImportances(const World& world, const ImportanceContext& ctx,
                                                  RiskOperator op, int threads) {
  std::vector<ActorId> ids;
  for (const auto& [id, trajectory] : world) ids.push_back(id);
  std::vector<Importance> values(ids.size());
  const int n = static_cast<int>(ids.size());
  if (op == RiskOperator::kKl) {
    const KlBaseline base = KlBaselineFor(world, ctx);
    ParallelFor(n, threads, [&](int i) { values[i] = KlFrom(base, world, ids[i], ctx); });
  } else {
    const SamplingResult full = PlanSampling(ctx.map, ctx.ego, ctx.t, ctx.k, ctx.dt, world,
                                             ctx.radii, ctx.ego_radius, ctx.planner);
    ParallelFor(n, threads, [&](int i) { values[i] = EuclidFrom(full, world, ids[i], ctx); });
  }
  std::map<ActorId, Importance> out;
  for (int i = 0; i < n; ++i) out.emplace(ids[i], values[i]);
  return out;
}

RiskMoments ExpectedActorRisk(const WorldSampler& sampler, int sample_count, const ActorId& actor,
                              const ImportanceContext& ctx, RiskOperator op) {
  if (sample_count < 1) Fail(ErrorCode::kConfig, "sample_count must be >= 1");
  RiskMoments m;
  double m2 = 0.0;
  for (int j = 0; j < sample_count; ++j) {
    double value;
    try {
      value = ActorImportance(sampler(j), actor, ctx, op).value;
    } catch (const Error& e) {
      Fail(e.code(), "sample " + std::to_string(j) + ": " + e.what());
    }
    ++m.samples;
    const double delta = value - m.mean;
    m.mean += delta / m.samples;
    m2 += delta * (value - m.mean);
  }
  m.variance = m.samples > 1 ? std::max(0.0, m2 / (m.samples - 1)) : 0.0;
  return m;
}

WorldSampler PredictionSampler(const World& histories, int k, const PredictionConfig& config) {
  auto samples = std::make_shared<std::map<ActorId, std::vector<Trajectory>>>();
  for (const auto& [id, history] : histories) {
    samples->emplace(id, SamplePredictions(history, k, config));
  }
  return [samples](int j) {
    World world;
    for (const auto& [id, list] : *samples) world.emplace(id, list.at(j));
    return world;
  };
}

RiskMoments ExpectedActorRisk(const World& histories, const ActorId& actor,
                              const ImportanceContext& ctx, const PredictionConfig& config,
                              RiskOperator op) {
  ValidatePredictionConfig(config);
  return ExpectedActorRisk(PredictionSampler(histories, ctx.k, config), config.sample_count, actor,
                           ctx, op);
}

Selection SelectMinRiskPlan(const PlanSet& candidates, const std::vector<World>& sampled_worlds,
                            const RadiusMap& radii, double ego_radius, double margin) {
  if (candidates.plans.empty()) Fail(ErrorCode::kInvalidArgument, "no candidate plans");
  if (sampled_worlds.empty()) Fail(ErrorCode::kInvalidArgument, "no sampled worlds");
  Selection best;
  bool have = false;
  for (std::size_t c = 0; c < candidates.plans.size(); ++c) {
    const Plan& plan = candidates.plans[c];
    int hits = 0;
    for (const World& world : sampled_worlds) {
      if (CollisionCheck(plan.trajectory, world, radii, ego_radius, margin)) ++hits;
    }
    const double frequency = static_cast<double>(hits) / static_cast<double>(sampled_worlds.size());
    bool better = !have;
    if (have) {
      const Plan& incumbent = best.plan;
      if (frequency != best.collision_frequency) {
        better = frequency < best.collision_frequency;
      } else if (plan.cost != incumbent.cost) {
        better = plan.cost < incumbent.cost;
      } else {
        better = plan.maneuvers.value_or(ManeuverSequence{}) <
                 incumbent.maneuvers.value_or(ManeuverSequence{});
      }
    }
    if (better) {
      best.plan = plan;
      best.index = c;
      best.collision_frequency = frequency;
      have = true;
    }
  }
  best.all_collide = best.collision_frequency == 1.0;
  return best;
}

}  // namespace actor_risk
