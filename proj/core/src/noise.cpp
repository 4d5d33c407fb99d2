// SPDX-License-Identifier: MIT
#include "t2certify/noise.hpp"

#include <cmath>
#include <numbers>

namespace t2c {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo,
                    std::uint32_t& hi) noexcept {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(p);
  hi = static_cast<std::uint32_t>(p >> 32);
}

// Uniform in (0, 1] with 53 random bits.
inline double to_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

constexpr std::uint32_t kUniformFlag = 0x80000000u;

inline PhiloxCounter block(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                           bool uniform) noexcept {
  PhiloxCounter ctr{static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32) & ~kUniformFlag,
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  if (uniform) ctr[1] |= kUniformFlag;
  return philox4x32_10(ctr, {static_cast<std::uint32_t>(seed),
                             static_cast<std::uint32_t>(seed >> 32)});
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t lo0, hi0, lo1, hi1;
    mulhilo(kMul0, ctr[0], lo0, hi0);
    mulhilo(kMul1, ctr[2], lo1, hi1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Each Philox block gives two uniforms and, by Box-Muller, two normals;
// normal 2j and 2j+1 come from block j.
void NoiseSource::standard_normals(std::uint64_t first, std::span<double> out) const noexcept {
  std::size_t written = 0;
  std::uint64_t index = first;
  while (written < out.size()) {
    const std::uint64_t j = index / 2;
    const auto r = block(seed_, stream_, j, false);
    const double u1 = to_unit(r[0], r[1]);
    const double u2 = to_unit(r[2], r[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    const double pair[2] = {radius * std::cos(angle), radius * std::sin(angle)};
    for (std::uint64_t s = index % 2; s < 2 && written < out.size(); ++s) {
      out[written++] = pair[s];
      ++index;
    }
  }
}

void NoiseSource::uniforms(std::uint64_t first, std::span<double> out) const noexcept {
  std::size_t written = 0;
  std::uint64_t index = first;
  while (written < out.size()) {
    const auto r = block(seed_, stream_, index / 2, true);
    const double pair[2] = {to_unit(r[0], r[1]), to_unit(r[2], r[3])};
    for (std::uint64_t s = index % 2; s < 2 && written < out.size(); ++s) {
      out[written++] = pair[s];
      ++index;
    }
  }
}

std::vector<double> brownian_increments(const NoiseSource& noise, const TimeGrid& grid,
                                        std::size_t dim) {
  if (dim == 0) throw ConfigError("brownian_increments: dimension must be >= 1");
  std::vector<double> dw(grid.steps() * dim);
  noise.standard_normals(0, dw);
  const double scale = std::sqrt(grid.dt());
  for (double& v : dw) v *= scale;
  return dw;
}

}  // namespace t2c
