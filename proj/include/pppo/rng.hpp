#pragma once

#include <cstdint>
#include <random>

namespace pppo {

// SplitMix64 mixing step; used to derive independent engine seeds from one agent seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Named sub-streams so the rollout, the environment and the optimizer never
// consume from each other's sequences.
enum class RngStream : std::uint64_t {
  PolicyInit = 1,
  ValueInit = 2,
  EnvReset = 3,
  ActionSample = 4,
  MinibatchShuffle = 5,
};

inline std::mt19937_64 make_rng(std::uint64_t seed, RngStream stream) {
  return std::mt19937_64(splitmix64(seed ^ (static_cast<std::uint64_t>(stream) * 0xd1b54a32d192ed03ULL)));
}

}  // namespace pppo
