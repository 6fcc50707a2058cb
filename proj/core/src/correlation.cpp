#include "metaeval/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

#include "metaeval/numeric.hpp"

namespace metaeval {

double CoefResult::value() const {
  if (!defined_) throw std::logic_error("CoefResult: value() on undefined");
  return value_;
}

UndefinedReason CoefResult::reason() const {
  if (defined_) throw std::logic_error("CoefResult: reason() on defined");
  return reason_;
}

namespace {

void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("correlation: length mismatch (" +
                                std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()) + ")");
  }
  if (x.size() < 2) {
    throw std::invalid_argument("correlation: need at least 2 observations");
  }
}

bool is_constant(std::span<const double> x) {
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  return *mn == *mx;
}

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

}  // namespace

std::vector<double> fractional_ranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && x[order[j]] == x[order[i]]) ++j;
    // Tied run occupies 1-based positions i+1 .. j; mean of those positions.
    const double r = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
    i = j;
  }
  return ranks;
}

CoefResult pearson(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  if (is_constant(x)) return CoefResult::undefined(UndefinedReason::ConstantX);
  if (is_constant(y)) return CoefResult::undefined(UndefinedReason::ConstantY);

  const std::size_t n = x.size();
  const double mx = mean(x);
  const double my = mean(y);
  CompensatedSum sxy, sxx, syy;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy.add(dx * dy);
    sxx.add(dx * dx);
    syy.add(dy * dy);
  }
  const double vx = sxx.value();
  const double vy = syy.value();
  if (!(vx > 0.0)) return CoefResult::undefined(UndefinedReason::ConstantX);
  if (!(vy > 0.0)) return CoefResult::undefined(UndefinedReason::ConstantY);
  return CoefResult::defined(
      clamp_unit(sxy.value() / (std::sqrt(vx) * std::sqrt(vy))));
}

CoefResult spearman(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  if (is_constant(x)) return CoefResult::undefined(UndefinedReason::ConstantX);
  if (is_constant(y)) return CoefResult::undefined(UndefinedReason::ConstantY);
  return pearson(fractional_ranks(x), fractional_ranks(y));
}

namespace {

struct TieCounts {
  std::uint64_t pairs = 0;        // n0 = n(n-1)/2
  std::uint64_t x_ties = 0;       // n1
  std::uint64_t y_ties = 0;       // n2
  std::uint64_t joint_ties = 0;   // pairs tied in both
  std::uint64_t discordant = 0;   // D
};

// Strict inversions of v: pairs i < j with v[i] > v[j]. Bottom-up merge sort.
std::uint64_t count_inversions(std::vector<double>& v,
                               std::vector<double>& scratch) {
  const std::size_t n = v.size();
  std::uint64_t inv = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo + width < n; lo += 2 * width) {
      const std::size_t mid = lo + width;
      const std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t a = lo, b = mid, out = lo;
      while (a < mid && b < hi) {
        if (v[b] < v[a]) {
          inv += mid - a;  // every remaining left element exceeds v[b]
          scratch[out++] = v[b++];
        } else {
          scratch[out++] = v[a++];
        }
      }
      while (a < mid) scratch[out++] = v[a++];
      while (b < hi) scratch[out++] = v[b++];
      std::copy(scratch.begin() + lo, scratch.begin() + hi, v.begin() + lo);
    }
  }
  return inv;
}

// Exact integer pair counts via sort by (x, y); inversions of y within the
// sorted order are exactly the discordant pairs, since x-tied runs are sorted
// by y and contribute none.
TieCounts kendall_counts(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  TieCounts c;
  c.pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return y[a] < y[b];
  });

  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];

  std::size_t run = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i == n || x[order[i]] != x[order[run]]) {
      const std::uint64_t t = i - run;
      c.x_ties += t * (t - 1) / 2;
      std::size_t jrun = run;
      for (std::size_t j = run + 1; j <= i; ++j) {
        if (j == i || ys[j] != ys[jrun]) {
          const std::uint64_t u = j - jrun;
          c.joint_ties += u * (u - 1) / 2;
          jrun = j;
        }
      }
      run = i;
    }
  }

  std::vector<double> scratch(n);
  c.discordant = count_inversions(ys, scratch);

  // ys is now globally sorted; reuse it for the y tie-group counts.
  run = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i == n || ys[i] != ys[run]) {
      const std::uint64_t u = i - run;
      c.y_ties += u * (u - 1) / 2;
      run = i;
    }
  }
  return c;
}

}  // namespace

CoefResult kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const TieCounts c = kendall_counts(x, y);
  if (c.pairs == c.x_ties) {
    return CoefResult::undefined(UndefinedReason::ConstantX);
  }
  if (c.pairs == c.y_ties) {
    return CoefResult::undefined(UndefinedReason::ConstantY);
  }
  // C + D = n0 - n1 - n2 + n3, hence C - D = that minus 2D; all exact.
  const std::int64_t comparable = static_cast<std::int64_t>(c.pairs) -
                                  static_cast<std::int64_t>(c.x_ties) -
                                  static_cast<std::int64_t>(c.y_ties) +
                                  static_cast<std::int64_t>(c.joint_ties);
  const std::int64_t num =
      comparable - 2 * static_cast<std::int64_t>(c.discordant);
  // Counts stay below 2^53 for any realistic n, so the product is exact and
  // x == y yields exactly 1.
  const double den = std::sqrt(static_cast<double>(c.pairs - c.x_ties) *
                               static_cast<double>(c.pairs - c.y_ties));
  return CoefResult::defined(clamp_unit(static_cast<double>(num) / den));
}

CoefResult correlation(CoefKind kind, std::span<const double> x,
                       std::span<const double> y) {
  switch (kind) {
    case CoefKind::Pearson:
      return pearson(x, y);
    case CoefKind::Spearman:
      return spearman(x, y);
    case CoefKind::KendallTauB:
      return kendall_tau_b(x, y);
  }
  throw std::logic_error("unknown CoefKind");
}

std::string_view to_token(CoefKind kind) {
  switch (kind) {
    case CoefKind::Pearson:
      return "pearson";
    case CoefKind::Spearman:
      return "spearman";
    case CoefKind::KendallTauB:
      return "kendall";
  }
  throw std::logic_error("unknown CoefKind");
}

}  // namespace metaeval
