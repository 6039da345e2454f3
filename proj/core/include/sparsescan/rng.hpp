#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sparsescan {

// All randomness flows through one engine type so that a seed pins results
// down exactly, on any platform and for any worker count.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

// Uniform draw on the open interval (0,1).  Maps the top 53 bits of the
// engine output directly; std::uniform_real_distribution is not used because
// its output is implementation-defined.
inline double uniform_open01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Derives the seed of an independent stream from a master seed, a purpose
// tag and up to two indices.  Simulation code gives every replication its
// own derived stream, so replication k sees the same randomness no matter
// how work is split across threads.
std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose,
                          std::uint64_t index = 0, std::uint64_t subindex = 0);

}  // namespace sparsescan
