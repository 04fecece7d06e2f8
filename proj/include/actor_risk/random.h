#ifndef ACTOR_RISK_RANDOM_H_
#define ACTOR_RISK_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace actor_risk {

// SplitMix64 finalizer.
constexpr uint64_t Mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stable 64-bit FNV-1a; independent of the standard library's std::hash.
constexpr uint64_t StableHash(std::string_view text) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Seed for a random stream identified by a tuple of keys. Distinct tuples
// give unrelated streams; the same tuple always gives the same seed.
constexpr uint64_t StreamSeed(uint64_t seed, std::initializer_list<uint64_t> keys) {
  uint64_t h = Mix64(seed);
  for (uint64_t k : keys) h = Mix64(h ^ Mix64(k));
  return h;
}

}  // namespace actor_risk

#endif  // ACTOR_RISK_RANDOM_H_
