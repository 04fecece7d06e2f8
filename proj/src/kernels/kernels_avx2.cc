// Compiled with -mavx2; only reached after a runtime CPU check.

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "actor_risk/kernels.h"

namespace actor_risk::kernels::avx2 {

bool AnyWithin(std::span<const double> ax, std::span<const double> ay,
               std::span<const double> bx, std::span<const double> by,
               double threshold) {
  const std::size_t n = ax.size();
  const std::size_t simd_end = n - n % 4;
  const double limit = threshold * threshold;
  const __m256d vlimit = _mm256_set1_pd(limit);
  for (std::size_t i = 0; i < simd_end; i += 4) {
    const __m256d dx =
        _mm256_sub_pd(_mm256_loadu_pd(&ax[i]), _mm256_loadu_pd(&bx[i]));
    const __m256d dy =
        _mm256_sub_pd(_mm256_loadu_pd(&ay[i]), _mm256_loadu_pd(&by[i]));
    const __m256d d2 =
        _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    const __m256d hit = _mm256_cmp_pd(d2, vlimit, _CMP_LT_OQ);
    if (_mm256_movemask_pd(hit) != 0) return true;
  }
  for (std::size_t i = simd_end; i < n; ++i) {
    const double dx = ax[i] - bx[i];
    const double dy = ay[i] - by[i];
    if (dx * dx + dy * dy < limit) return true;
  }
  return false;
}

double SumDistances(std::span<const double> ax, std::span<const double> ay,
                    std::span<const double> bx, std::span<const double> by) {
  const std::size_t n = ax.size();
  const std::size_t simd_end = n - n % 4;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < simd_end; i += 4) {
    const __m256d dx =
        _mm256_sub_pd(_mm256_loadu_pd(&ax[i]), _mm256_loadu_pd(&bx[i]));
    const __m256d dy =
        _mm256_sub_pd(_mm256_loadu_pd(&ay[i]), _mm256_loadu_pd(&by[i]));
    const __m256d d2 =
        _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    acc = _mm256_add_pd(acc, _mm256_sqrt_pd(d2));
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (std::size_t i = simd_end; i < n; ++i) {
    const double dx = ax[i] - bx[i];
    const double dy = ay[i] - by[i];
    total += std::sqrt(dx * dx + dy * dy);
  }
  return total;
}

}  // namespace actor_risk::kernels::avx2
