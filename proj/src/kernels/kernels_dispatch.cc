#include <atomic>
#include <cstdlib>
#include <string_view>

#include "actor_risk/kernels.h"

namespace actor_risk::kernels {
namespace {

Backend DetectBackend() {
  if (const char* forced = std::getenv("ACTOR_RISK_KERNELS")) {
    if (std::string_view(forced) == "scalar") return Backend::kScalar;
  }
  return BackendAvailable(Backend::kAvx2) ? Backend::kAvx2 : Backend::kScalar;
}

std::atomic<Backend>& ActiveSlot() {
  static std::atomic<Backend> active{DetectBackend()};
  return active;
}

}  // namespace

std::string_view BackendName(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return "scalar";
    case Backend::kAvx2:
      return "avx2";
  }
  return "unknown";
}

bool BackendAvailable(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return true;
    case Backend::kAvx2:
#if defined(ACTOR_RISK_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Backend ActiveBackend() { return ActiveSlot().load(std::memory_order_relaxed); }

Backend SetBackend(Backend backend) {
  if (!BackendAvailable(backend)) backend = Backend::kScalar;
  return ActiveSlot().exchange(backend);
}

bool AnyWithin(std::span<const double> ax, std::span<const double> ay,
               std::span<const double> bx, std::span<const double> by,
               double threshold) {
#if defined(ACTOR_RISK_HAVE_AVX2)
  if (ActiveBackend() == Backend::kAvx2) {
    return avx2::AnyWithin(ax, ay, bx, by, threshold);
  }
#endif
  return scalar::AnyWithin(ax, ay, bx, by, threshold);
}

double SumDistances(std::span<const double> ax, std::span<const double> ay,
                    std::span<const double> bx, std::span<const double> by) {
#if defined(ACTOR_RISK_HAVE_AVX2)
  if (ActiveBackend() == Backend::kAvx2) {
    return avx2::SumDistances(ax, ay, bx, by);
  }
#endif
  return scalar::SumDistances(ax, ay, bx, by);
}

}  // namespace actor_risk::kernels
