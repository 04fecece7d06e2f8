#include "actor_risk/sampling_planner.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "actor_risk/random.h"

namespace actor_risk {
namespace {

constexpr double kLaneChangePenalty = 2.0;
constexpr uint64_t kSampleStreamTag = 0x52525453u;  // "RRTS"

struct Node {
  double x;
  double y;
  double cost;
  int parent;
  int lane;
  std::vector<int> children;
};

struct Point {
  double x;
  double y;
};

class Tree {
 public:
  // `bin_width` must be at least the largest near radius passed to Extend.
  Tree(const RoadMap& map, const ActorState& ego, int k, double dt, const ObstacleTable& table,
       double ego_radius, const PlannerConfig& config, double speed, double bin_width)
      : map_(map), k_(k), dt_(dt), table_(table), ego_radius_(ego_radius), config_(config),
        speed_(speed), x0_(ego.x), bin_width_(bin_width) {
    AddNode(Node{ego.x, ego.y, 0.0, -1, map.LaneOf(ego.y), {}});
  }

  const std::vector<Node>& nodes() const { return nodes_; }
  int rejected() const { return rejected_; }

  double EdgeCost(const Node& a, double bx, double by, int b_lane) const {
    return std::hypot(bx - a.x, by - a.y) + kLaneChangePenalty * std::abs(b_lane - a.lane);
  }

  bool SlopeOk(double ax, double ay, double bx, double by) const {
    const double dx = bx - ax;
    return dx > 0.0 && std::abs(by - ay) <= config_.max_lateral_slope * dx + 1e-12;
  }

  // Ego points on the segment at every tick instant strictly inside it, plus
  // the endpoint.
  bool EdgeCollides(double ax, double ay, double bx, double by) const {
    const double ta = (ax - x0_) / speed_;
    const double tb = (bx - x0_) / speed_;
    times_.clear();
    xs_.clear();
    ys_.clear();
    for (int j = static_cast<int>(std::floor(ta / dt_)) + 1; j * dt_ < tb; ++j) {
      const double tj = j * dt_;
      if (tj <= ta) continue;
      const double f = (tj - ta) / (tb - ta);
      times_.push_back(tj);
      xs_.push_back(ax + (bx - ax) * f);
      ys_.push_back(ay + (by - ay) * f);
    }
    times_.push_back(tb);
    xs_.push_back(bx);
    ys_.push_back(by);
    return table_.CollidesAtTimes(times_, xs_, ys_);
  }

  void Extend(const Point& sample, double near_radius) {
    // Nearest node strictly behind the sample; ties go to the lowest index.
    int nearest = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int b = std::min(BinOf(sample.x), static_cast<int>(bins_.size()) - 1); b >= 0; --b) {
      const double bin_end = x0_ + (b + 1) * bin_width_;
      if (nearest >= 0 && sample.x - bin_end > 0.0 &&
          (sample.x - bin_end) * (sample.x - bin_end) > best) {
        break;
      }
      for (int i : bins_[b]) {
        const Node& n = nodes_[i];
        if (n.x >= sample.x) continue;
        const double d = Dist2(sample.x - n.x, sample.y - n.y);
        if (d < best || (d == best && i < nearest)) {
          best = d;
          nearest = i;
        }
      }
    }
    if (nearest < 0) return;
    const Node& from = nodes_[nearest];
    double dx = sample.x - from.x;
    double dy = sample.y - from.y;
    const double max_dy = config_.max_lateral_slope * dx;
    dy = std::clamp(dy, -max_dy, max_dy);
    const double length = std::hypot(dx, dy);
    const double scale = std::min(1.0, config_.steer_step / length);
    const double px = from.x + dx * scale;
    const double py = from.y + dy * scale;
    if (!map_.LateralInBounds(py, ego_radius_) || px > map_.road_length) return;
    const int p_lane = map_.LaneOf(py);

    near_.clear();
    const double r2 = near_radius * near_radius;
    const int last_bin = static_cast<int>(bins_.size()) - 1;
    for (int b = std::max(0, BinOf(px) - 1); b <= std::min(last_bin, BinOf(px) + 1); ++b) {
      for (int i : bins_[b]) {
        const Node& n = nodes_[i];
        if (i == nearest || Dist2(px - n.x, py - n.y) <= r2) near_.push_back(i);
      }
    }
    if (std::find(near_.begin(), near_.end(), nearest) == near_.end()) near_.push_back(nearest);
    std::sort(near_.begin(), near_.end());

    // Parent: cheapest collision-free connection, checked lazily in cost order.
    candidates_.clear();
    for (int i : near_) {
      const Node& n = nodes_[i];
      if (!SlopeOk(n.x, n.y, px, py)) continue;
      candidates_.push_back({n.cost + EdgeCost(n, px, py, p_lane), i});
    }
    std::sort(candidates_.begin(), candidates_.end());
    int parent = -1;
    double cost = 0.0;
    for (const auto& [c, i] : candidates_) {
      if (!EdgeCollides(nodes_[i].x, nodes_[i].y, px, py)) {
        parent = i;
        cost = c;
        break;
      }
      ++rejected_;
    }
    if (parent < 0) return;
    const int id = AddNode(Node{px, py, cost, parent, p_lane, {}});
    nodes_[parent].children.push_back(id);

    // Rewire forward neighbours through the new node.
    for (int i : near_) {
      Node& q = nodes_[i];
      if (i == parent || !SlopeOk(px, py, q.x, q.y)) continue;
      const double through = cost + EdgeCost(nodes_[id], q.x, q.y, q.lane);
      if (through >= q.cost) continue;
      if (EdgeCollides(px, py, q.x, q.y)) {
        ++rejected_;
        continue;
      }
      auto& siblings = nodes_[q.parent].children;
      siblings.erase(std::find(siblings.begin(), siblings.end(), i));
      q.parent = id;
      nodes_[id].children.push_back(i);
      PropagateCost(i, through - q.cost);
    }
  }

 private:
  static double Dist2(double dx, double dy) { return dx * dx + dy * dy; }

  int BinOf(double x) const {
    return std::max(0, static_cast<int>(std::floor((x - x0_) / bin_width_)));
  }

  int AddNode(Node node) {
    const int id = static_cast<int>(nodes_.size());
    const int b = BinOf(node.x);
    if (b >= static_cast<int>(bins_.size())) bins_.resize(b + 1);
    bins_[b].push_back(id);
    nodes_.push_back(std::move(node));
    return id;
  }

  void PropagateCost(int root, double delta) {
    stack_.clear();
    stack_.push_back(root);
    while (!stack_.empty()) {
      const int i = stack_.back();
      stack_.pop_back();
      nodes_[i].cost += delta;
      for (int c : nodes_[i].children) stack_.push_back(c);
    }
  }

  const RoadMap& map_;
  int k_;
  double dt_;
  const ObstacleTable& table_;
  double ego_radius_;
  const PlannerConfig& config_;
  double speed_;
  double x0_;
  double bin_width_;
  std::vector<Node> nodes_;
  // Node ids bucketed by x in bins of bin_width_ starting at x0_.
  std::vector<std::vector<int>> bins_;
  int rejected_ = 0;
  std::vector<int> near_;
  std::vector<std::pair<double, int>> candidates_;
  std::vector<int> stack_;
  mutable std::vector<double> times_, xs_, ys_;
};

Trajectory HoldTrajectory(const ActorState& ego, int t, int k, double dt) {
  Trajectory out;
  out.actor_id = EgoId();
  out.start_tick = t;
  out.dt = dt;
  ActorState s = ego;
  s.speed = 0.0;
  out.states.assign(k + 1, s);
  out.states[0] = ego;
  return out;
}

Trajectory RenderPath(const std::vector<Point>& path, const ActorState& ego, int t, int k,
                      double dt, double speed) {
  Trajectory out;
  out.actor_id = EgoId();
  out.start_tick = t;
  out.dt = dt;
  out.states.reserve(k + 1);
  out.states.push_back(ego);
  std::size_t seg = 0;
  for (int j = 1; j <= k; ++j) {
    const double x = ego.x + speed * j * dt;
    ActorState s;
    while (seg + 1 < path.size() && path[seg + 1].x < x) ++seg;
    if (seg + 1 >= path.size()) {
      s.x = path.back().x;
      s.y = path.back().y;
      s.heading = out.states.back().heading;
      s.speed = 0.0;
    } else {
      const Point& a = path[seg];
      const Point& b = path[seg + 1];
      const double slope = (b.y - a.y) / (b.x - a.x);
      s.x = x;
      s.y = a.y + slope * (x - a.x);
      s.heading = std::atan(slope);
      s.speed = speed * std::sqrt(1.0 + slope * slope);
    }
    out.states.push_back(s);
  }
  return out;
}

bool TrajectoryValid(const Trajectory& trajectory, const ObstacleTable& table,
                     const RoadMap& map, double ego_radius) {
  const std::size_t n = trajectory.states.size();
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = trajectory.states[i].x;
    ys[i] = trajectory.states[i].y;
    if (!map.LateralInBounds(ys[i], ego_radius)) return false;
  }
  return !table.CollidesAtTicks(0, xs, ys);
}

}  // namespace

void ValidatePlannerConfig(const PlannerConfig& c) {
  if (c.iteration_budget < 1) Fail(ErrorCode::kConfig, "planner iteration_budget must be >= 1");
  if (!(c.steer_step > 0.0) || !(c.goal_tolerance > 0.0)) {
    Fail(ErrorCode::kConfig, "planner steer_step and goal_tolerance must be > 0");
  }
  if (!(c.safety_margin >= 0.0)) Fail(ErrorCode::kConfig, "planner safety_margin must be >= 0");
  if (!(c.max_lateral_slope > 0.0)) Fail(ErrorCode::kConfig, "planner max_lateral_slope must be > 0");
  if (c.goal_sample_period < 0) Fail(ErrorCode::kConfig, "planner goal_sample_period must be >= 0");
}

SamplingResult PlanSampling(const RoadMap& map, const ActorState& ego, int t, int k, double dt,
                            const World& world, const RadiusMap& radii, double ego_radius,
                            const PlannerConfig& config) {
  ValidatePlannerConfig(config);
  if (k < 1) Fail(ErrorCode::kInvalidArgument, "planning horizon must be >= 1");
  SamplingResult result;
  result.plan.trajectory = HoldTrajectory(ego, t, k, dt);

  const double speed = std::min(config.target_speed > 0.0 ? config.target_speed : map.speed_limit,
                                map.speed_limit);
  const double advance = config.goal_advance > 0.0 ? config.goal_advance : speed * k * dt;
  const double goal_x = std::min(ego.x + advance, map.road_length);
  const int preferred =
      config.preferred_lane >= 0 ? std::min(config.preferred_lane, map.lane_count - 1) : map.LaneOf(ego.y);

  const ObstacleTable table(world, radii, t, k, dt, ego_radius, config.safety_margin);
  {
    const double x0 = ego.x, y0 = ego.y;
    if (table.CollidesAtTicks(0, std::span(&x0, 1), std::span(&y0, 1)) ||
        !map.LateralInBounds(ego.y, ego_radius)) {
      return result;
    }
  }

  // Sample stream: a function of the seed and the geometry only.
  const double x_lo = ego.x;
  const double x_hi = std::min(goal_x + config.goal_tolerance, map.road_length);
  const double y_lo = ego_radius;
  const double y_hi = map.width() - ego_radius;
  std::vector<Point> samples(config.iteration_budget);
  {
    std::mt19937_64 rng(StreamSeed(config.seed, {kSampleStreamTag}));
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    for (Point& p : samples) {
      p.x = x_lo + (x_hi - x_lo) * ux(rng);
      p.y = y_lo + (y_hi - y_lo) * ux(rng);
    }
    if (config.goal_sample_period > 0) {
      for (int i = config.goal_sample_period - 1; i < config.iteration_budget;
           i += config.goal_sample_period) {
        samples[i] = Point{goal_x, map.LaneCenter(preferred)};
      }
    }
  }

  Tree tree(map, ego, k, dt, table, ego_radius, config, speed, 3.0 * config.steer_step);
  const double area = std::max(1.0, (x_hi - x_lo) * (y_hi - y_lo));
  const double gamma = 2.0 * std::sqrt(1.5 * area / std::numbers::pi);
  for (const Point& sample : samples) {
    const double n = static_cast<double>(tree.nodes().size()) + 1.0;
    const double radius = std::clamp(gamma * std::sqrt(std::log(n) / n), config.steer_step,
                                     3.0 * config.steer_step);
    tree.Extend(sample, radius);
  }
  const std::vector<Node>& nodes = tree.nodes();
  result.tree_size = static_cast<int>(nodes.size());
  result.rejected_edges = tree.rejected();
  if (nodes.size() <= 1) return result;

  auto goal_distance = [&](const Node& n) {
    double best = std::numeric_limits<double>::infinity();
    for (int lane = 0; lane < map.lane_count; ++lane) {
      best = std::min(best, std::hypot(n.x - goal_x, n.y - map.LaneCenter(lane)));
    }
    return best;
  };
  auto path_to = [&](int i) {
    std::vector<Point> path;
    for (; i >= 0; i = nodes[i].parent) path.push_back(Point{nodes[i].x, nodes[i].y});
    std::reverse(path.begin(), path.end());
    return path;
  };

  std::vector<std::pair<double, int>> reached, partial;
  for (int i = 1; i < static_cast<int>(nodes.size()); ++i) {
    const double d = goal_distance(nodes[i]);
    if (d <= config.goal_tolerance) reached.push_back({nodes[i].cost, i});
    partial.push_back({nodes[i].cost + config.partial_progress_weight * d, i});
  }
  std::sort(reached.begin(), reached.end());
  std::sort(partial.begin(), partial.end());
  for (const auto* ranked : {&reached, &partial}) {
    for (const auto& [score, i] : *ranked) {
      Trajectory trajectory = RenderPath(path_to(i), ego, t, k, dt, speed);
      if (!TrajectoryValid(trajectory, table, map, ego_radius)) continue;
      result.plan.trajectory = std::move(trajectory);
      result.plan.cost = nodes[i].cost;
      result.status = ranked == &reached ? PlanStatus::kReachedGoal : PlanStatus::kPartial;
      return result;
    }
  }
  return result;
}

}  // namespace actor_risk
