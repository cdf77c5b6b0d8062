#pragma once

#include <array>
#include <cstdint>

namespace qkdcert {

// Philox 4x64 with 10 rounds: a stateless counter-based generator, so every
// draw is a pure function of (key, counter) and parallel schedules cannot
// change the stream.
struct Philox4x64 {
  static std::array<std::uint64_t, 4> block(
      const std::array<std::uint64_t, 2>& key,
      const std::array<std::uint64_t, 4>& counter);
};

// One uniform [0, 1) draw keyed by (seed, index, tag), 53-bit resolution.
double uniform_draw(std::uint64_t seed, std::uint64_t index,
                    std::uint64_t tag);

}  // namespace qkdcert
