#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace metaeval {

enum class CoefKind { Pearson, Spearman, KendallTauB };

/// Why a coefficient has no defined value.
enum class UndefinedReason { ConstantX, ConstantY, TooShort };

/// A coefficient value in [-1, 1], or the reason none exists. Degenerate
/// inputs never produce NaN; callers decide how to treat undefined results.
class CoefResult {
 public:
  static CoefResult defined(double value) noexcept {
    CoefResult r;
    r.defined_ = true;
    r.value_ = value;
    return r;
  }
  static CoefResult undefined(UndefinedReason reason) noexcept {
    CoefResult r;
    r.reason_ = reason;
    return r;
  }

  bool is_defined() const noexcept { return defined_; }
  double value() const;            // throws std::logic_error when undefined
  UndefinedReason reason() const;  // throws std::logic_error when defined

 private:
  CoefResult() = default;
  bool defined_ = false;
  double value_ = 0.0;
  UndefinedReason reason_ = UndefinedReason::TooShort;
};

/// Ranks 1..n; tied values share the mean of the rank positions they occupy.
std::vector<double> fractional_ranks(std::span<const double> x);

/// Pearson's r: sum((x-xbar)(y-ybar)) / sqrt(sum((x-xbar)^2) sum((y-ybar)^2)),
/// with compensated accumulation. Undefined when either vector is constant.
CoefResult pearson(std::span<const double> x, std::span<const double> y);

/// Spearman's rho as Pearson on fractional ranks. Coincides with the
/// 1 - 6*sum(d^2)/(n(n^2-1)) form exactly when neither vector has ties.
CoefResult spearman(std::span<const double> x, std::span<const double> y);

/// Kendall's tau-b: (C - D) / sqrt((n0 - n1)(n0 - n2)) with n0 = n(n-1)/2 and
/// n1, n2 the tied-pair counts of x and y. Counting is exact in integers, so
/// the result matches direct pair enumeration bit for bit; the implementation
/// runs in O(n log n). Undefined when either vector is constant.
CoefResult kendall_tau_b(std::span<const double> x, std::span<const double> y);

CoefResult correlation(CoefKind kind, std::span<const double> x,
                       std::span<const double> y);

std::string_view to_token(CoefKind kind);  // "pearson" | "spearman" | "kendall"

}  // namespace metaeval
