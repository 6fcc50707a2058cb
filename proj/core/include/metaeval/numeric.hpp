#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>

namespace metaeval {

/// Neumaier-compensated running sum. Accumulation order still matters for the
/// exact bits, so deterministic code must feed values in a fixed order.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double compensated_sum(std::span<const double> xs) noexcept;

/// Compensated arithmetic mean; xs must be non-empty.
double mean(std::span<const double> xs);

/// Sample standard deviation (n-1 denominator); xs must hold >= 2 values.
double sample_stddev(std::span<const double> xs);

/// Shortest decimal string that parses back to the same double.
std::string to_decimal_string(double v);

}  // namespace metaeval
