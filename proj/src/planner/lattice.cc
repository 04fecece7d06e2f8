#include "actor_risk/lattice.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

namespace actor_risk {
namespace {

constexpr double kLaneChangePenalty = 2.0;
constexpr double kComfortWeight = 0.5;

std::vector<Maneuver> SortedManeuvers(const LatticeConfig& lattice) {
  std::vector<Maneuver> m = lattice.maneuvers;
  std::sort(m.begin(), m.end());
  m.erase(std::unique(m.begin(), m.end()), m.end());
  return m;
}

struct Cursor {
  double x;
  double y;
  double speed;  // longitudinal
  int lane;
  double cost;
};

// Renders ticks [1, m] of one step into out[0..m). Returns false when the
// step is out of bounds.
bool RenderStep(const RoadMap& map, const LatticeConfig& lattice, double dt, double ego_radius,
                const Cursor& from, Maneuver maneuver, std::span<ActorState> out, Cursor& to) {
  const int m = lattice.ticks_per_step;
  int lane = from.lane;
  if (maneuver == Maneuver::kShiftLeft) ++lane;
  if (maneuver == Maneuver::kShiftRight) --lane;
  if (lane < 0 || lane >= map.lane_count) return false;
  const double y_from = from.y;
  const double y_to = lane == from.lane ? from.y : map.LaneCenter(lane);

  double x = from.x;
  double y = from.y;
  double length = 0.0;
  double speed = from.speed;
  if (speed > map.speed_limit) return false;
  for (int j = 1; j <= m; ++j) {
    if (maneuver == Maneuver::kAccelerate) speed = from.speed + lattice.accel * j * dt;
    if (maneuver == Maneuver::kBrake) speed = std::max(0.0, from.speed - lattice.brake_decel * j * dt);
    if (speed > map.speed_limit) return false;
    const double nx = x + speed * dt;
    const double ny =
        y_from + (y_to - y_from) * 0.5 * (1.0 - std::cos(std::numbers::pi * j / m));
    if (nx > map.road_length || !map.LateralInBounds(ny, ego_radius)) return false;
    const double dx = nx - x;
    const double dy = ny - y;
    const double step = std::hypot(dx, dy);
    ActorState& s = out[j - 1];
    s.x = nx;
    s.y = ny;
    s.heading = step > 0.0 ? std::atan2(dy, dx) : 0.0;
    s.speed = step / dt;
    length += step;
    x = nx;
    y = ny;
  }
  to.x = x;
  to.y = y;
  to.speed = speed;
  to.lane = lane;
  to.cost = from.cost + length + (lane != from.lane ? kLaneChangePenalty : 0.0) +
            kComfortWeight * std::abs(speed - from.speed);
  return true;
}

class Enumerator {
 public:
  Enumerator(const RoadMap& map, const ActorState& ego, int t, double dt,
             const LatticeConfig& lattice, const LatticeWorld& world, PlanSet* sink)
      : map_(map), ego_(ego), t_(t), dt_(dt), lattice_(lattice), world_(world), sink_(sink),
        maneuvers_(SortedManeuvers(lattice)) {
    ValidateLatticeConfig(lattice);
    const int k = lattice.horizon();
    states_.resize(k + 1);
    states_[0] = ego;
    states_[0].heading = NormalizeHeading(ego.heading);
    if (world.world != nullptr) {
      if (world.radii == nullptr) Fail(ErrorCode::kInvalidArgument, "lattice world without radii");
      table_ = std::make_unique<ObstacleTable>(*world.world, *world.radii, t, k, dt,
                                               world.ego_radius, lattice.safety_margin);
    }
  }

  LatticeAblationCounts Run() {
    if (table_) counts_.blocked_only_by.assign(table_->obstacles().size(), 0);
    Cursor start{ego_.x, ego_.y, ego_.speed * std::cos(ego_.heading), map_.LaneOf(ego_.y), 0.0};
    const bool in_bounds = map_.LateralInBounds(ego_.y, world_.ego_radius) &&
                           ego_.x <= map_.road_length;
    if (!in_bounds) return counts_;
    const double x0 = ego_.x, y0 = ego_.y;
    Descend(0, start, Hits(kNone, 0, std::span(&x0, 1), std::span(&y0, 1)));
    return counts_;
  }

 private:
  // Collision state of a partial sequence: no actor hit, exactly actor i
  // (i >= 0) hit, or several actors hit.
  static constexpr int kNone = -1;
  static constexpr int kSeveral = -2;

  int Hits(int state, int first_tick, std::span<const double> xs,
           std::span<const double> ys) const {
    if (!table_ || state == kSeveral) return state;
    const int n = static_cast<int>(table_->obstacles().size());
    for (int i = 0; i < n; ++i) {
      if (i == state || !table_->ObstacleCollidesAtTicks(i, first_tick, xs, ys)) continue;
      if (state != kNone) return kSeveral;
      state = i;
    }
    return state;
  }

  void Descend(int depth, const Cursor& at, int hits) {
    if (depth == lattice_.decision_steps) {
      ++counts_.universe;
      if (hits == kNone) {
        ++counts_.feasible;
        if (sink_) Emit(at.cost);
      } else if (hits >= 0) {
        ++counts_.blocked_only_by[hits];
      }
      return;
    }
    const int m = lattice_.ticks_per_step;
    const int first = depth * m + 1;
    std::span<ActorState> slot(states_.data() + first, m);
    for (Maneuver maneuver : maneuvers_) {
      Cursor next;
      if (!RenderStep(map_, lattice_, dt_, world_.ego_radius, at, maneuver, slot, next)) continue;
      int next_hits = hits;
      if (table_ && hits != kSeveral) {
        xs_.resize(m);
        ys_.resize(m);
        for (int j = 0; j < m; ++j) {
          xs_[j] = slot[j].x;
          ys_[j] = slot[j].y;
        }
        next_hits = Hits(hits, first, xs_, ys_);
      }
      sequence_.push_back(maneuver);
      Descend(depth + 1, next, next_hits);
      sequence_.pop_back();
    }
  }

  void Emit(double cost) {
    Plan plan;
    plan.trajectory.actor_id = EgoId();
    plan.trajectory.start_tick = t_;
    plan.trajectory.dt = dt_;
    plan.trajectory.states = states_;
    plan.cost = cost;
    plan.maneuvers = sequence_;
    sink_->plans.push_back(std::move(plan));
  }

  const RoadMap& map_;
  const ActorState& ego_;
  int t_;
  double dt_;
  const LatticeConfig& lattice_;
  const LatticeWorld& world_;
  PlanSet* sink_;
  std::vector<Maneuver> maneuvers_;
  std::unique_ptr<ObstacleTable> table_;
  std::vector<ActorState> states_;
  std::vector<double> xs_, ys_;
  ManeuverSequence sequence_;
  LatticeAblationCounts counts_;
};

}  // namespace

std::string ManeuverName(Maneuver m) {
  switch (m) {
    case Maneuver::kKeep:
      return "keep";
    case Maneuver::kShiftLeft:
      return "shift_left";
    case Maneuver::kShiftRight:
      return "shift_right";
    case Maneuver::kBrake:
      return "brake";
    case Maneuver::kAccelerate:
      return "accelerate";
  }
  return "?";
}

Maneuver ParseManeuver(const std::string& name) {
  for (Maneuver m : {Maneuver::kKeep, Maneuver::kShiftLeft, Maneuver::kShiftRight,
                     Maneuver::kBrake, Maneuver::kAccelerate}) {
    if (ManeuverName(m) == name) return m;
  }
  Fail(ErrorCode::kConfig, "unknown maneuver '" + name + "'");
}

std::vector<Maneuver> ParseManeuverList(const std::string& list) {
  std::vector<Maneuver> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(ParseManeuver(item));
  }
  return out;
}

void ValidateLatticeConfig(const LatticeConfig& c) {
  if (c.decision_steps < 1) Fail(ErrorCode::kConfig, "lattice decision_steps must be >= 1");
  if (c.ticks_per_step < 1) Fail(ErrorCode::kConfig, "lattice ticks_per_step must be >= 1");
  if (c.maneuvers.empty()) Fail(ErrorCode::kConfig, "lattice maneuver set is empty");
  if (!(c.accel >= 0.0) || !(c.brake_decel >= 0.0) || !(c.safety_margin >= 0.0)) {
    Fail(ErrorCode::kConfig, "lattice accel, brake_decel and safety_margin must be >= 0");
  }
  const uint64_t branching = SortedManeuvers(c).size();
  uint64_t total = 1;
  for (int i = 0; i < c.decision_steps; ++i) {
    if (total > c.universe_cap / branching) {
      Fail(ErrorCode::kCapExceeded, "lattice of " + std::to_string(branching) + "^" +
                                        std::to_string(c.decision_steps) +
                                        " sequences exceeds the cap of " +
                                        std::to_string(c.universe_cap));
    }
    total *= branching;
  }
}

std::optional<Plan> RenderManeuvers(const RoadMap& map, const ActorState& ego, int t, double dt,
                                    const LatticeConfig& lattice, double ego_radius,
                                    const ManeuverSequence& sequence) {
  if (static_cast<int>(sequence.size()) != lattice.decision_steps) {
    Fail(ErrorCode::kInvalidArgument, "maneuver sequence length differs from decision_steps");
  }
  const int m = lattice.ticks_per_step;
  Plan plan;
  plan.trajectory.actor_id = EgoId();
  plan.trajectory.start_tick = t;
  plan.trajectory.dt = dt;
  plan.trajectory.states.resize(lattice.horizon() + 1);
  plan.trajectory.states[0] = ego;
  if (!map.LateralInBounds(ego.y, ego_radius) || ego.x > map.road_length) return std::nullopt;
  Cursor at{ego.x, ego.y, ego.speed * std::cos(ego.heading), map.LaneOf(ego.y), 0.0};
  for (std::size_t s = 0; s < sequence.size(); ++s) {
    Cursor next;
    std::span<ActorState> slot(plan.trajectory.states.data() + s * m + 1, m);
    if (!RenderStep(map, lattice, dt, ego_radius, at, sequence[s], slot, next)) return std::nullopt;
    at = next;
  }
  plan.cost = at.cost;
  plan.maneuvers = sequence;
  return plan;
}

PlanSet EnumeratePlans(const RoadMap& map, const ActorState& ego, int t, double dt,
                       const LatticeConfig& lattice, const LatticeWorld& world) {
  PlanSet out;
  Enumerator enumerator(map, ego, t, dt, lattice, world, &out);
  out.universe_size = enumerator.Run().universe;
  return out;
}

LatticeCounts CountPlans(const RoadMap& map, const ActorState& ego, int t, double dt,
                         const LatticeConfig& lattice, const LatticeWorld& world) {
  Enumerator enumerator(map, ego, t, dt, lattice, world, nullptr);
  const LatticeAblationCounts c = enumerator.Run();
  return LatticeCounts{c.universe, c.feasible};
}

LatticeAblationCounts CountPlansByActor(const RoadMap& map, const ActorState& ego, int t,
                                        double dt, const LatticeConfig& lattice,
                                        const LatticeWorld& world) {
  Enumerator enumerator(map, ego, t, dt, lattice, world, nullptr);
  return enumerator.Run();
}

}  // namespace actor_risk
