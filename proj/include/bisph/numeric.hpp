// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace bisph {

/// A positive exponent that may be unbounded. Stored through its reciprocal,
/// so 1/x == 0 is the unbounded marker and no sentinel float is needed.
class ExtendedReal {
public:
  static ExtendedReal from_reciprocal(double inv) { return ExtendedReal(inv); }
  static ExtendedReal unbounded() { return ExtendedReal(0.0); }
  static ExtendedReal finite(double value) { return ExtendedReal(1.0 / value); }

  bool is_unbounded() const noexcept { return inv_ == 0.0; }
  double reciprocal() const noexcept { return inv_; }
  /// Throws Boundary when unbounded.
  double value() const;
  std::string str() const;

private:
  explicit ExtendedReal(double inv) : inv_(inv) {}
  double inv_;
};

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double to_double() const noexcept {
    return static_cast<double>(num) / static_cast<double>(den);
  }
};

/// Open or half-open interval on the real line.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = false;
  bool hi_closed = false;

  bool empty() const noexcept {
    return lo > hi || (lo == hi && !(lo_closed && hi_closed));
  }
  bool contains(double x) const noexcept {
    bool above = lo_closed ? x >= lo : x > lo;
    bool below = hi_closed ? x <= hi : x < hi;
    return above && below;
  }
  std::string str() const;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double residual_rms = 0.0;
};

/// Ordinary least squares of y against x. Needs at least two distinct x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Pairwise sum with a fixed reduction tree; the result depends only on the
/// input order.
double pairwise_sum(std::span<const double> values);

/// Formats with 12 significant digits, the precision used in all text output.
std::string format_real(double x);

} // namespace bisph
