#ifndef ACTOR_RISK_COLLISION_H_
#define ACTOR_RISK_COLLISION_H_

#include <map>
#include <span>
#include <vector>

#include "actor_risk/scenario.h"

namespace actor_risk {

using RadiusMap = std::map<ActorId, double>;

// Disc footprints: a collision is a tick where the center distance is
// strictly below ego_radius + actor_radius + margin. Touching is allowed.
// All trajectories must cover the same tick window as `ego`.
bool CollisionCheck(const Trajectory& ego, const World& world, const RadiusMap& radii,
                    double ego_radius, double margin);

// World positions laid out per actor as contiguous x/y arrays over a tick
// window, for repeated collision queries by the planners.
class ObstacleTable {
 public:
  struct Obstacle {
    ActorId id;
    double clearance = 0.0;  // ego_radius + radius + margin
    std::vector<double> xs;
    std::vector<double> ys;
    double min_x = 0.0;
    double max_x = 0.0;
  };

  // Every trajectory in `world` must cover [t, t+k].
  ObstacleTable(const World& world, const RadiusMap& radii, int t, int k, double dt,
                double ego_radius, double margin);

  int start_tick() const { return start_tick_; }
  int ticks() const { return ticks_; }
  double dt() const { return dt_; }
  const std::vector<Obstacle>& obstacles() const { return obstacles_; }

  // Collision test for ego positions at consecutive ticks [first_tick,
  // first_tick + xs.size()) relative to the window start.
  bool CollidesAtTicks(int first_tick, std::span<const double> xs,
                       std::span<const double> ys) const;
  // Same test against obstacles()[index] alone.
  bool ObstacleCollidesAtTicks(std::size_t index, int first_tick, std::span<const double> xs,
                               std::span<const double> ys) const;

  // Collision test for ego points at arbitrary times (seconds from the window
  // start). Obstacles are interpolated linearly between ticks and held at the
  // window ends.
  bool CollidesAtTimes(std::span<const double> times, std::span<const double> xs,
                       std::span<const double> ys) const;

 private:
  int start_tick_ = 0;
  int ticks_ = 0;
  double dt_ = 0.1;
  std::vector<Obstacle> obstacles_;
};

}  // namespace actor_risk

#endif  // ACTOR_RISK_COLLISION_H_
