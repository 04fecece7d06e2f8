#include "actor_risk/collision.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "actor_risk/kernels.h"

namespace actor_risk {
namespace {

double RadiusFor(const RadiusMap& radii, const ActorId& id) {
  auto it = radii.find(id);
  if (it == radii.end()) Fail(ErrorCode::kInvalidArgument, "no radius for actor " + id.str());
  return it->second;
}

}  // namespace

bool CollisionCheck(const Trajectory& ego, const World& world, const RadiusMap& radii,
                    double ego_radius, double margin) {
  const std::size_t n = ego.states.size();
  std::vector<double> ex(n), ey(n), ox(n), oy(n);
  for (std::size_t i = 0; i < n; ++i) {
    ex[i] = ego.states[i].x;
    ey[i] = ego.states[i].y;
  }
  for (const auto& [id, other] : world) {
    if (other.start_tick != ego.start_tick || other.states.size() != n) {
      std::ostringstream msg;
      msg << "actor " << id << " window [" << other.start_tick << ", " << other.end_tick()
          << "] differs from ego window [" << ego.start_tick << ", " << ego.end_tick() << "]";
      Fail(ErrorCode::kInvalidArgument, msg.str());
    }
    for (std::size_t i = 0; i < n; ++i) {
      ox[i] = other.states[i].x;
      oy[i] = other.states[i].y;
    }
    const double clearance = ego_radius + RadiusFor(radii, id) + margin;
    if (kernels::AnyWithin(ex, ey, ox, oy, clearance)) return true;
  }
  return false;
}

ObstacleTable::ObstacleTable(const World& world, const RadiusMap& radii, int t, int k,
                             double dt, double ego_radius, double margin)
    : start_tick_(t), ticks_(k), dt_(dt) {
  obstacles_.reserve(world.size());
  for (const auto& [id, trajectory] : world) {
    Obstacle o;
    o.id = id;
    o.clearance = ego_radius + RadiusFor(radii, id) + margin;
    o.xs.resize(k + 1);
    o.ys.resize(k + 1);
    for (int j = 0; j <= k; ++j) {
      const ActorState& s = trajectory.at(t + j);
      o.xs[j] = s.x;
      o.ys[j] = s.y;
    }
    const auto [lo, hi] = std::minmax_element(o.xs.begin(), o.xs.end());
    o.min_x = *lo;
    o.max_x = *hi;
    obstacles_.push_back(std::move(o));
  }
}

bool ObstacleTable::CollidesAtTicks(int first_tick, std::span<const double> xs,
                                    std::span<const double> ys) const {
  for (std::size_t i = 0; i < obstacles_.size(); ++i) {
    if (ObstacleCollidesAtTicks(i, first_tick, xs, ys)) return true;
  }
  return false;
}

bool ObstacleTable::ObstacleCollidesAtTicks(std::size_t index, int first_tick,
                                            std::span<const double> xs,
                                            std::span<const double> ys) const {
  if (xs.empty()) return false;
  const int count = static_cast<int>(xs.size());
  const int begin = std::clamp(first_tick, 0, ticks_);
  const int end = std::clamp(first_tick + count, 0, ticks_ + 1);
  if (end - begin != count) {
    Fail(ErrorCode::kInvalidArgument, "tick range outside the obstacle window");
  }
  const Obstacle& o = obstacles_.at(index);
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  if (o.max_x + o.clearance <= *lo || o.min_x - o.clearance >= *hi) return false;
  return kernels::AnyWithin(xs, ys, std::span(o.xs).subspan(begin, count),
                            std::span(o.ys).subspan(begin, count), o.clearance);
}

bool ObstacleTable::CollidesAtTimes(std::span<const double> times, std::span<const double> xs,
                                    std::span<const double> ys) const {
  const std::size_t n = times.size();
  if (n == 0) return false;
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  std::vector<double> ox(n), oy(n);
  for (const Obstacle& o : obstacles_) {
    if (o.max_x + o.clearance <= *lo || o.min_x - o.clearance >= *hi) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const double u = std::clamp(times[i] / dt_, 0.0, static_cast<double>(ticks_));
      const int j = std::min(static_cast<int>(u), std::max(ticks_ - 1, 0));
      const double f = ticks_ == 0 ? 0.0 : u - j;
      if (ticks_ == 0 || f == 0.0) {
        ox[i] = o.xs[j];
        oy[i] = o.ys[j];
      } else {
        ox[i] = o.xs[j] + (o.xs[j + 1] - o.xs[j]) * f;
        oy[i] = o.ys[j] + (o.ys[j + 1] - o.ys[j]) * f;
      }
    }
    if (kernels::AnyWithin(xs, ys, ox, oy, o.clearance)) return true;
  }
  return false;
}

}  // namespace actor_risk
