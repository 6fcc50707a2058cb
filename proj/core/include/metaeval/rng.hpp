#pragma once

#include <cstdint>
#include <random>
#include <utility>

namespace metaeval {

/// All stochastic components share one engine type so that a (seed, stream)
/// pair fully determines the bits produced, independent of platform.
using RngEngine = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Deterministic seed derivation: folds each tag into the state with a
/// splitmix64 step. Derivations with different tag sequences are unrelated
/// streams; the same sequence always yields the same seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) noexcept;
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t t1,
                          std::uint64_t t2) noexcept;
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t t1,
                          std::uint64_t t2, std::uint64_t t3) noexcept;

/// Uniform in [0, 1) with 53 random bits.
double uniform01(RngEngine& rng) noexcept;

/// Uniform in [lo, hi).
double uniform(RngEngine& rng, double lo, double hi) noexcept;

/// Fair coin from the top bit of one engine draw.
bool random_boolean(RngEngine& rng) noexcept;

/// Uniform integer in [0, n); n >= 1. Rejection-based, no modulo bias.
std::uint64_t bounded_uint(RngEngine& rng, std::uint64_t n) noexcept;

/// One standard normal draw (Box-Muller, no cached spare): consumes exactly
/// two uniform draws per call regardless of outcome.
double standard_normal(RngEngine& rng) noexcept;

/// Independent standard normal pair from a single Box-Muller transform.
std::pair<double, double> standard_normal_pair(RngEngine& rng) noexcept;

}  // namespace metaeval
