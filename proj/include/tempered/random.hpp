#pragma once

#include <cstdint>
#include <random>

namespace tempered {

using Engine = std::mt19937_64;

/// Engine for stream `stream` of master seed `seed`.
///
/// Streams are derived by hashing (seed, stream) through std::seed_seq, so a
/// replication's draws depend only on its own index and never on which thread
/// ran it or in what order.
Engine make_stream(std::uint64_t seed, std::uint64_t stream);

/// Uniform draw on the open interval (0, 1) built from the top 53 bits.
inline double uniform_open(Engine& engine) {
  return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace tempered
