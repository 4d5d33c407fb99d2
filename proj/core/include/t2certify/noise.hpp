// SPDX-License-Identifier: MIT
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "t2certify/time_grid.hpp"

namespace t2c {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// Philox4x32 with 10 rounds (Salmon et al., SC'11). Stateless bijection of the
// counter under a key.
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

// SplitMix64 finalizer, used to derive stream ids from (experiment, chunk).
std::uint64_t mix64(std::uint64_t x) noexcept;

// A counter-based source of standard normals. The i-th normal of a stream is
// a pure function of (seed, stream, i), so any thread can regenerate any
// slice of any stream.
class NoiseSource {
 public:
  NoiseSource(std::uint64_t seed, std::uint64_t stream) noexcept
      : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  // Writes normals with indices [first, first + out.size()).
  void standard_normals(std::uint64_t first, std::span<double> out) const noexcept;

  // Uniforms in (0, 1], indexed independently of the normals above
  // (they live in a disjoint counter half).
  void uniforms(std::uint64_t first, std::span<double> out) const noexcept;

  NoiseSource substream(std::uint64_t id) const noexcept {
    return NoiseSource(seed_, mix64(stream_ ^ mix64(id + 0x632be59bd9b4e019ULL)));
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

// n * d increments, row k holding dW(t_k) ~ N(0, dt I_d).
std::vector<double> brownian_increments(const NoiseSource& noise, const TimeGrid& grid,
                                        std::size_t dim);

}  // namespace t2c
