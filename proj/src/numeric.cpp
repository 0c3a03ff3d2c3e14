// SPDX-License-Identifier: Apache-2.0
#include "bisph/numeric.hpp"

#include <cmath>
#include <cstdio>

#include "bisph/error.hpp"
#include "bisph/parallel.hpp"
#include "parallel.hpp"

namespace bisph {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
  case ErrorKind::InvalidDimension: return "invalid-dimension";
  case ErrorKind::Domain: return "domain";
  case ErrorKind::UndefinedExponent: return "undefined-exponent";
  case ErrorKind::ExponentOrder: return "exponent-order";
  case ErrorKind::Boundary: return "boundary";
  case ErrorKind::Resolution: return "resolution";
  case ErrorKind::Shape: return "shape";
  case ErrorKind::Unsupported: return "unsupported";
  case ErrorKind::Io: return "io";
  case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

double ExtendedReal::value() const {
  if (is_unbounded()) fail(ErrorKind::Boundary, "exponent is unbounded");
  return 1.0 / inv_;
}

std::string ExtendedReal::str() const {
  return is_unbounded() ? std::string("inf") : format_real(1.0 / inv_);
}

std::string Interval::str() const {
  return std::string(lo_closed ? "[" : "(") + format_real(lo) + ", " + format_real(hi) +
         (hi_closed ? "]" : ")");
}

std::string format_real(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double pairwise_sum(std::span<const double> v) {
  constexpr std::size_t kLeaf = 32;
  if (v.size() <= kLeaf) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    fail(ErrorKind::Shape, "line fit needs two or more paired samples");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) fail(ErrorKind::Domain, "line fit needs distinct abscissae");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.residual_rms = std::sqrt(ss_res / n);
  return fit;
}

namespace {
int g_threads = 0;
}

void set_thread_count(int threads) { g_threads = threads > 0 ? threads : 0; }

int thread_count() { return detail::thread_count(); }

namespace detail {
int thread_count() { return g_threads > 0 ? g_threads : omp_get_max_threads(); }
} // namespace detail

} // namespace bisph
