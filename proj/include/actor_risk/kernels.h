#ifndef ACTOR_RISK_KERNELS_H_
#define ACTOR_RISK_KERNELS_H_

#include <span>
#include <string_view>

// Data-parallel inner loops shared by the collision model, the trajectory
// difference operator and prediction-error measurement. Every kernel has a
// portable scalar reference and an AVX2 variant; the active backend is picked
// once at startup from CPU features and can be forced for testing.
//
// All backends produce bit-identical results: reductions use a fixed
// four-lane striped order (element i accumulates into lane i % 4, lanes are
// combined as (l0 + l1) + (l2 + l3), then the tail is added in order).

namespace actor_risk::kernels {

enum class Backend { kScalar, kAvx2 };

std::string_view BackendName(Backend backend);

// True when the backend was compiled in and the CPU supports it.
bool BackendAvailable(Backend backend);

Backend ActiveBackend();

// Forces a backend; returns the previous one. Unavailable backends fall back
// to scalar.
Backend SetBackend(Backend backend);

// True iff some index i has (ax-bx)^2 + (ay-by)^2 < threshold^2.
// All four spans must have equal length.
bool AnyWithin(std::span<const double> ax, std::span<const double> ay,
               std::span<const double> bx, std::span<const double> by,
               double threshold);

// Sum over i of the Euclidean distance between (ax,ay)[i] and (bx,by)[i].
double SumDistances(std::span<const double> ax, std::span<const double> ay,
                    std::span<const double> bx, std::span<const double> by);

namespace scalar {
bool AnyWithin(std::span<const double> ax, std::span<const double> ay,
               std::span<const double> bx, std::span<const double> by,
               double threshold);
double SumDistances(std::span<const double> ax, std::span<const double> ay,
                    std::span<const double> bx, std::span<const double> by);
}  // namespace scalar

namespace avx2 {
bool AnyWithin(std::span<const double> ax, std::span<const double> ay,
               std::span<const double> bx, std::span<const double> by,
               double threshold);
double SumDistances(std::span<const double> ax, std::span<const double> ay,
                    std::span<const double> bx, std::span<const double> by);
}  // namespace avx2

}  // namespace actor_risk::kernels

#endif  // ACTOR_RISK_KERNELS_H_
