// SPDX-License-Identifier: Apache-2.0
#include "bisph/weights.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>

#include "bisph/error.hpp"
#include "bisph/numeric.hpp"
#include "parallel.hpp"

namespace bisph {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double min_distance(const Cube& q) {
  double s = 0.0;
  for (int a = 0; a < q.dim; ++a) {
    double gap = std::max({q.lower[a], -(q.lower[a] + q.side), 0.0});
    s += gap * gap;
  }
  return std::sqrt(s);
}

double max_distance(const Cube& q) {
  double s = 0.0;
  for (int a = 0; a < q.dim; ++a) {
    double far = std::max(std::abs(q.lower[a]), std::abs(q.lower[a] + q.side));
    s += far * far;
  }
  return std::sqrt(s);
}

template <class Fn>
void for_samples_in(const GridFunction& g, const Cube& q, Fn&& fn) {
  bool any = false;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (q.contains(g.point(i))) {
      fn(g[i]);
      any = true;
    }
  }
  if (!any) fail(ErrorKind::Domain, "cube contains no weight samples");
}

double root(double x, double e) { return x == kInf ? kInf : std::pow(x, e); }

CharacteristicScan scan_family(const CubeFamily& family,
                               const std::function<double(const Cube&)>& local) {
  CharacteristicScan scan;
  double running = 0.0;
  std::size_t id = 0;
  for (std::size_t lv = 0; lv < family.levels.size(); ++lv) {
    const auto& cubes = family.levels[lv];
    std::vector<double> vals(cubes.size());
    detail::parallel_for(static_cast<std::ptrdiff_t>(cubes.size()), [&](std::ptrdiff_t i) {
      vals[static_cast<std::size_t>(i)] = local(cubes[static_cast<std::size_t>(i)]);
    });
    for (std::size_t i = 0; i < cubes.size(); ++i) {
      if (std::isnan(vals[i])) vals[i] = kInf;
      running = (lv == 0 && i == 0) ? vals[i] : std::max(running, vals[i]);
      scan.rows.push_back({static_cast<int>(lv), id++, vals[i], running});
    }
    scan.level_max.push_back(running);
  }
  return scan;
}

} // namespace

double cube_mean(const WeightSpec& w, const Cube& cube) {
  if (w.is_power()) return power_cube_mean(cube, w.exponent(), w.scale());
  double sum = 0.0;
  std::size_t count = 0;
  for_samples_in(*w.samples(), cube, [&](double v) {
    sum += v;
    ++count;
  });
  return sum / static_cast<double>(count);
}

double cube_esssup(const WeightSpec& w, const Cube& cube) {
  if (w.is_power()) {
    const double b = w.exponent();
    if (b == 0.0) return w.scale();
    const double r = b > 0.0 ? max_distance(cube) : min_distance(cube);
    return r == 0.0 ? kInf : w.scale() * std::pow(r, b);
  }
  double m = -kInf;
  for_samples_in(*w.samples(), cube, [&](double v) { m = std::max(m, v); });
  return m;
}

double cube_essinf(const WeightSpec& w, const Cube& cube) {
  if (w.is_power()) {
    const double b = w.exponent();
    if (b == 0.0) return w.scale();
    const double r = b > 0.0 ? min_distance(cube) : max_distance(cube);
    return w.scale() * std::pow(r, b);
  }
  double m = kInf;
  for_samples_in(*w.samples(), cube, [&](double v) { m = std::min(m, v); });
  return m;
}

CubeFamily CubeFamily::dyadic_descendants(const Cube& root, int depth) {
  if (depth < 0) fail(ErrorKind::Domain, "depth must be nonnegative");
  CubeFamily fam;
  fam.dim = root.dim;
  fam.name = "dyadic_descendants";
  for (int d = 0; d <= depth; ++d) {
    const int per_axis = 1 << d;
    const double side = root.side / per_axis;
    std::size_t count = 1;
    for (int a = 0; a < root.dim; ++a) count *= static_cast<std::size_t>(per_axis);
    std::vector<Cube> level;
    level.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      Cube c{root.dim, root.lower, side};
      std::size_t rest = i;
      for (int a = root.dim - 1; a >= 0; --a) {
        c.lower[a] = root.lower[a] + static_cast<double>(rest % static_cast<std::size_t>(per_axis)) * side;
        rest /= static_cast<std::size_t>(per_axis);
      }
      level.push_back(c);
    }
    fam.levels.push_back(std::move(level));
  }
  return fam;
}

CubeFamily CubeFamily::nested_centered(int dim, int k_min, int k_max) {
  CubeFamily fam;
  fam.dim = dim;
  fam.name = "nested_centered";
  for (int k = k_min; k <= k_max; ++k) {
    Cube c;
    c.dim = dim;
    c.side = std::ldexp(2.0, k);
    for (int a = 0; a < dim; ++a) c.lower[a] = -std::ldexp(1.0, k);
    fam.levels.push_back({c});
  }
  return fam;
}

CubeFamily CubeFamily::translated(int dim, double side, const std::vector<Point>& lowers) {
  CubeFamily fam;
  fam.dim = dim;
  fam.name = "translated";
  for (const auto& lo : lowers) fam.levels.push_back({Cube{dim, lo, side}});
  return fam;
}

CubeFamily CubeFamily::origin_approach(int dim, int count, double ratio) {
  CubeFamily fam;
  fam.dim = dim;
  fam.name = "origin_approach";
  for (int k = 0; k < count; ++k) {
    Cube c;
    c.dim = dim;
    c.side = 1.0;
    c.lower[0] = std::pow(ratio, -k);
    for (int a = 1; a < dim; ++a) c.lower[a] = -0.5;
    fam.levels.push_back({c});
  }
  return fam;
}

std::size_t CubeFamily::cube_count() const {
  std::size_t n = 0;
  for (const auto& l : levels) n += l.size();
  return n;
}

double CharacteristicScan::value() const { return level_max.empty() ? 0.0 : level_max.back(); }

double CharacteristicScan::last_change() const {
  if (level_max.size() < 2) return 0.0;
  const double a = level_max[level_max.size() - 2], b = level_max.back();
  if (a == b) return 0.0;
  if (!std::isfinite(a) || !std::isfinite(b)) return kInf;
  return std::abs(b - a) / std::abs(a);
}

bool CharacteristicScan::stable(double tolerance) const {
  return std::isfinite(value()) && last_change() < tolerance;
}

double CharacteristicScan::growth() const {
  if (level_max.empty()) return 1.0;
  return level_max.back() / level_max.front();
}

void write_scan_csv(const CharacteristicScan& scan, std::ostream& out) {
  out << "family_level,cube_id,local_value,running_max\n";
  for (const auto& r : scan.rows)
    out << r.family_level << ',' << r.cube_id << ',' << format_real(r.local_value) << ','
        << format_real(r.running_max) << '\n';
}

bool ap_power_membership(double b, double p, int n) {
  if (!(p > 1.0)) fail(ErrorKind::Unsupported, "A_p membership needs p > 1; use the A_1 test");
  return -n < b && b < n * (p - 1.0);
}

bool a1_power_membership(double b, int n) { return -n < b && b <= 0.0; }

CharacteristicScan ap_characteristic(const WeightSpec& w, double p, const CubeFamily& family) {
  if (!(p > 1.0)) fail(ErrorKind::Unsupported, "A_p characteristic needs p > 1");
  const WeightSpec dual = w.pow(-1.0 / (p - 1.0));
  return scan_family(family, [&](const Cube& q) {
    return cube_mean(w, q) * root(cube_mean(dual, q), p - 1.0);
  });
}

CharacteristicScan rh_characteristic(const WeightSpec& w, double s, const CubeFamily& family) {
  if (!(s > 1.0)) fail(ErrorKind::Domain, "reverse Hoelder exponent must exceed 1");
  const WeightSpec ws = w.pow(s);
  return scan_family(family, [&](const Cube& q) {
    return root(cube_mean(ws, q), 1.0 / s) / cube_mean(w, q);
  });
}

WeightSpec BilinearWeight::composite() const {
  const double pp = p();
  return w1.pow(pp / p1).times(w2.pow(pp / p2));
}

CharacteristicScan lerner_characteristic(const BilinearWeight& weights, const CubeFamily& family) {
  const double p1 = weights.p1, p2 = weights.p2;
  if (!(p1 >= 1.0 && p2 >= 1.0)) fail(ErrorKind::ExponentOrder, "p1 and p2 must be at least 1");
  const double p = weights.p();
  const WeightSpec w = weights.composite();
  auto factor = [p](const WeightSpec& wj, double pj, const Cube& q) {
    if (pj == 1.0) return root(1.0 / cube_essinf(wj, q), p);
    const double pj_dual = pj / (pj - 1.0);
    return root(cube_mean(wj.pow(1.0 - pj_dual), q), p / pj_dual);
  };
  return scan_family(family, [&](const Cube& q) {
    return cube_mean(w, q) * factor(weights.w1, p1, q) * factor(weights.w2, p2, q);
  });
}

CharacteristicScan lmo_characteristic(const BilinearWeight& weights, const CubeFamily& family) {
  if (!weights.r) fail(ErrorKind::Domain, "localized class needs auxiliary exponents r");
  const auto [r1, r2, r3] = *weights.r;
  lmo_params(weights.p1, weights.p2, r1, r2, r3);
  const double p = weights.p();
  const WeightSpec w = weights.composite();
  auto own = [](const WeightSpec& wi, double pi, double ri, const Cube& q) {
    if (pi == ri) return cube_esssup(wi.pow(-1.0 / pi), q);
    return root(cube_mean(wi.pow(ri / (ri - pi)), q), 1.0 / ri - 1.0 / pi);
  };
  auto joint = [&](const Cube& q) {
    if (r3 == 1.0) return root(cube_mean(w, q), 1.0 / p);
    const double r3_dual = r3 / (r3 - 1.0);
    return root(cube_mean(w.pow(r3_dual / (r3_dual - p)), q), 1.0 / p - 1.0 / r3_dual);
  };
  return scan_family(family, [&](const Cube& q) {
    return joint(q) * own(weights.w1, weights.p1, r1, q) * own(weights.w2, weights.p2, r2, q);
  });
}

CharacteristicScan nieraeth_characteristic(const WeightSpec& u1, const WeightSpec& u2, double q1,
                                           double q2, double p1, double p2, double s,
                                           const CubeFamily& family) {
  if (!(s > 1.0)) fail(ErrorKind::ExponentOrder, "s must exceed 1");
  BilinearWeight bw;
  bw.w1 = u1.pow(1.0 / q1);
  bw.w2 = u2.pow(1.0 / q2);
  bw.p1 = q1;
  bw.p2 = q2;
  bw.r = std::array<double, 3>{p1, p2, s / (s - 1.0)};
  return lmo_characteristic(bw, family);
}

WeightRelationReport weightrelation_check(const BilinearWeight& weights, const LmoParameters& params,
                                          const CubeFamily& family) {
  if (!weights.w1.is_power() || !weights.w2.is_power())
    fail(ErrorKind::Unsupported, "the class comparison needs power weights");
  const int n = family.dim;
  const double scale = params.class_scale();
  WeightRelationReport rep;
  auto derive = [&](const std::string& label, double base_exponent, double inv_aux, double inv_p) {
    DerivedMembership d;
    d.label = label;
    if (!(inv_aux > 0.0)) {
      d.exponent = std::numeric_limits<double>::quiet_NaN();
      d.class_index = std::numeric_limits<double>::quiet_NaN();
      rep.derived.push_back(d);
      return;
    }
    d.exponent = base_exponent / (inv_aux / inv_p);
    d.class_index = scale / inv_aux;
    if (d.class_index > 1.0)
      d.member = ap_power_membership(d.exponent, d.class_index, n);
    else if (d.class_index == 1.0)
      d.member = a1_power_membership(d.exponent, n);
    rep.derived.push_back(d);
  };
  derive("w1", weights.w1.exponent(), params.inv_theta[0], params.inv_p1);
  derive("w2", weights.w2.exponent(), params.inv_theta[1], params.inv_p2);
  derive("w", weights.composite().exponent(), params.inv_delta[2], params.inv_p);
  rep.all_derived = std::all_of(rep.derived.begin(), rep.derived.end(),
                                [](const DerivedMembership& d) { return d.member; });
  rep.scan = lmo_characteristic(weights, family);
  rep.numeric_stable = rep.scan.stable();
  rep.agree = rep.all_derived == rep.numeric_stable;
  return rep;
}

bool radial_family_membership(double b, double p, int n, RadialFamily family) {
  if (family == RadialFamily::closed_lower) {
    if (n < 2 || !(p > 1.0)) fail(ErrorKind::Domain, "closed-lower radial family needs n >= 2, p > 1");
    return 1.0 - n <= b && b < (n - 1) * (p - 1.0);
  }
  if (n < 3 || !(p > static_cast<double>(n) / (n - 1)))
    fail(ErrorKind::Domain, "open-lower radial family needs n >= 3, p > n/(n-1)");
  return 1.0 - n < b && b < (n - 1) * (p - 1.0) - 1.0;
}

} // namespace bisph
