#include "metaeval/rng.hpp"

#include <cmath>
#include <numbers>

namespace metaeval {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

namespace {
std::uint64_t fold(std::uint64_t state, std::uint64_t tag) noexcept {
  return splitmix64(state ^ (splitmix64(tag) + 0x9E3779B97F4A7C15ULL +
                             (state << 6) + (state >> 2)));
}
}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) noexcept {
  return fold(master, tag);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t t1,
                          std::uint64_t t2) noexcept {
  return fold(fold(master, t1), t2);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t t1,
                          std::uint64_t t2, std::uint64_t t3) noexcept {
  return fold(fold(fold(master, t1), t2), t3);
}

double uniform01(RngEngine& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(RngEngine& rng, double lo, double hi) noexcept {
  return lo + (hi - lo) * uniform01(rng);
}

bool random_boolean(RngEngine& rng) noexcept { return (rng() >> 63) != 0; }

std::uint64_t bounded_uint(RngEngine& rng, std::uint64_t n) noexcept {
  if (n <= 1) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

std::pair<double, double> standard_normal_pair(RngEngine& rng) noexcept {
  // u1 in (0, 1] keeps the log finite.
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

double standard_normal(RngEngine& rng) noexcept {
  return standard_normal_pair(rng).first;
}

}  // namespace metaeval
