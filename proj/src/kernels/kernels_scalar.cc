#include <cmath>
#include <cstddef>

#include "actor_risk/kernels.h"

namespace actor_risk::kernels::scalar {

bool AnyWithin(std::span<const double> ax, std::span<const double> ay,
               std::span<const double> bx, std::span<const double> by,
               double threshold) {
  const double limit = threshold * threshold;
  for (std::size_t i = 0; i < ax.size(); ++i) {
    const double dx = ax[i] - bx[i];
    const double dy = ay[i] - by[i];
    if (dx * dx + dy * dy < limit) return true;
  }
  return false;
}

double SumDistances(std::span<const double> ax, std::span<const double> ay,
                    std::span<const double> bx, std::span<const double> by) {
  const std::size_t n = ax.size();
  const std::size_t striped_end = n - n % 4;
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < striped_end; i += 4) {
    for (std::size_t l = 0; l < 4; ++l) {
      const double dx = ax[i + l] - bx[i + l];
      const double dy = ay[i + l] - by[i + l];
      lane[l] += std::sqrt(dx * dx + dy * dy);
    }
  }
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (std::size_t i = striped_end; i < n; ++i) {
    const double dx = ax[i] - bx[i];
    const double dy = ay[i] - by[i];
    total += std::sqrt(dx * dx + dy * dy);
  }
  return total;
}

}  // namespace actor_risk::kernels::scalar
