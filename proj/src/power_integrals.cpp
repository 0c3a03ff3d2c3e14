// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "bisph/error.hpp"
#include "bisph/weights.hpp"

namespace bisph {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

bool closed_contains_origin(const Cube& q) {
  for (int a = 0; a < q.dim; ++a)
    if (q.lower[a] > 0.0 || q.lower[a] + q.side < 0.0) return false;
  return true;
}

/// Integral of x^b over [lo, hi] with 0 <= lo <= hi.
double half_line(double lo, double hi, double b) {
  if (hi <= lo) return 0.0;
  if (b == -1.0) return std::log(hi / lo);
  return (std::pow(hi, b + 1.0) - std::pow(lo, b + 1.0)) / (b + 1.0);
}

double mean_1d(const Cube& q, double b) {
  const double lo = q.lower[0], hi = q.lower[0] + q.side;
  double total = 0.0;
  if (lo >= 0.0)
    total = half_line(lo, hi, b);
  else if (hi <= 0.0)
    total = half_line(-hi, -lo, b);
  else
    total = half_line(0.0, -lo, b) + half_line(0.0, hi, b);
  return total / q.side;
}

/// Integral along the ray of r^(b+1) dr between the two box crossings.
struct Ray {
  const Cube& q;
  double b;

  double operator()(double theta) const {
    const double d[2] = {std::cos(theta), std::sin(theta)};
    double t0 = 0.0, t1 = kInf;
    for (int a = 0; a < 2; ++a) {
      const double lo = q.lower[a], hi = q.lower[a] + q.side;
      if (std::abs(d[a]) < 1e-300) {
        if (lo > 0.0 || hi < 0.0) return 0.0;
        continue;
      }
      double u = lo / d[a], v = hi / d[a];
      if (u > v) std::swap(u, v);
      t0 = std::max(t0, u);
      t1 = std::min(t1, v);
    }
    if (!(t1 > t0)) return 0.0;
    if (b == -2.0) return std::log(t1 / t0);
    return (std::pow(t1, b + 2.0) - std::pow(t0, b + 2.0)) / (b + 2.0);
  }
};

template <class F>
double simpson_step(const F& f, double a, double b, double fa, double fm, double fb, double whole,
                    double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(left) + std::abs(right));
  if (depth <= 0 || std::abs(diff) <= std::max(15.0 * eps, noise)) return left + right + diff / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double eps) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, eps, 40);
}

double mean_2d(const Cube& q, double b) {
  const Point c = q.center();
  const double phase = (c[0] == 0.0 && c[1] == 0.0) ? 0.0 : std::atan2(c[1], c[0]);
  const bool inside = closed_contains_origin(q);
  std::vector<double> cuts;
  for (int k = 0; k < 4; ++k) {
    const double x = q.lower[0] + ((k >> 1) & 1) * q.side;
    const double y = q.lower[1] + (k & 1) * q.side;
    if (x == 0.0 && y == 0.0) continue;
    cuts.push_back(std::remainder(std::atan2(y, x) - phase, 2.0 * kPi));
  }
  if (inside) {
    cuts.push_back(-kPi);
    cuts.push_back(kPi);
  }
  std::sort(cuts.begin(), cuts.end());
  Ray ray{q, b};
  auto f = [&](double rel) { return ray(phase + rel); };
  double total = 0.0;
  const double lo = cuts.front(), hi = cuts.back();
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = std::max(cuts[i], lo), e = std::min(cuts[i + 1], hi);
    if (e - a <= 0.0) continue;
    const double rough = adaptive_simpson(f, a, e, 1e-6 * q.measure());
    total += adaptive_simpson(f, a, e, 1e-13 * std::max(std::abs(rough), 1e-300));
  }
  return total / q.measure();
}

double mean_3d(const Cube& q, double b) {
  constexpr int kSub = 32;
  const double s = q.side / kSub;
  double total = 0.0;
  for (int i = 0; i < kSub; ++i) {
    const double x = q.lower[0] + (i + 0.5) * s;
    double slab = 0.0;
    for (int j = 0; j < kSub; ++j) {
      const double y = q.lower[1] + (j + 0.5) * s;
      double row = 0.0;
      for (int k = 0; k < kSub; ++k) {
        const double z = q.lower[2] + (k + 0.5) * s;
        row += std::pow(std::sqrt(x * x + y * y + z * z), b);
      }
      slab += row;
    }
    total += slab;
  }
  return total / (static_cast<double>(kSub) * kSub * kSub);
}

} // namespace

double power_cube_mean(const Cube& cube, double b, double scale) {
  if (!(cube.side > 0.0)) fail(ErrorKind::Domain, "cube side must be positive");
  if (b == 0.0) return scale;
  if (closed_contains_origin(cube) && b <= -cube.dim) return kInf;
  switch (cube.dim) {
  case 1: return scale * mean_1d(cube, b);
  case 2: return scale * mean_2d(cube, b);
  case 3: return scale * mean_3d(cube, b);
  default: fail(ErrorKind::InvalidDimension, "cube dimension must be 1, 2 or 3");
  }
}

} // namespace bisph
