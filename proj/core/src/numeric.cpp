#include "metaeval/numeric.hpp"

#include <cassert>
#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace metaeval {

double compensated_sum(std::span<const double> xs) noexcept {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean of empty range");
  return compensated_sum(xs) / static_cast<double>(xs.size());
}

double sample_stddev(std::span<const double> xs) {
  if (xs.size() < 2) throw std::invalid_argument("stddev needs >= 2 values");
  const double m = mean(xs);
  CompensatedSum ss;
  for (double x : xs) {
    const double d = x - m;
    ss.add(d * d);
  }
  const double var = ss.value() / static_cast<double>(xs.size() - 1);
  return var > 0.0 ? std::sqrt(var) : 0.0;
}

std::string to_decimal_string(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  assert(res.ec == std::errc());
  return std::string(buf, res.ptr);
}

}  // namespace metaeval
