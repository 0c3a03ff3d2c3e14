// SPDX-License-Identifier: Apache-2.0
#include "bisph/exponents.hpp"

#include <algorithm>
#include <cmath>

#include "bisph/error.hpp"

namespace bisph {

namespace {

constexpr double kEdgeSlack = 1e-12;

void require_dimension(int n) {
  if (n < 2) fail(ErrorKind::InvalidDimension, "dimension must be at least 2, got " + std::to_string(n));
}

Rational frac(std::int64_t num, std::int64_t den) { return {num, den}; }

double cross(ExponentPoint o, ExponentPoint a, ExponentPoint b) {
  return (a.inv_r - o.inv_r) * (b.inv_s - o.inv_s) - (a.inv_s - o.inv_s) * (b.inv_r - o.inv_r);
}

// Andrew's monotone chain, counter-clockwise, collinear points dropped.
std::vector<ExponentPoint> convex_hull(std::vector<ExponentPoint> pts) {
  std::sort(pts.begin(), pts.end(), [](ExponentPoint a, ExponentPoint b) {
    return a.inv_r < b.inv_r || (a.inv_r == b.inv_r && a.inv_s < b.inv_s);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](ExponentPoint a, ExponentPoint b) {
                          return a.inv_r == b.inv_r && a.inv_s == b.inv_s;
                        }),
            pts.end());
  if (pts.size() < 3) return pts;
  std::vector<ExponentPoint> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

void check_open(double x, double lo, double hi, const char* what) {
  if (!(x > lo && x < hi))
    fail(ErrorKind::Domain, std::string(what) + ": 1/r = " + format_real(x) + " outside (" +
                                format_real(lo) + ", " + format_real(hi) + ")");
}

NecessaryCondition make_condition(std::string name, double lhs, double bound, bool strict) {
  NecessaryCondition c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.bound = bound;
  c.strict = strict;
  c.holds = strict ? lhs < bound : lhs <= bound;
  return c;
}

} // namespace

const char* to_string(RegionKind kind) noexcept {
  return kind == RegionKind::lacunary ? "lacunary" : "full";
}

RegionKind parse_region_kind(const std::string& text) {
  if (text == "lac" || text == "lacunary") return RegionKind::lacunary;
  if (text == "full") return RegionKind::full;
  fail(ErrorKind::Parse, "unknown region kind '" + text + "' (expected lac or full)");
}

bool RegionPolygon::degenerate() const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t j = i + 1; j < vertices.size(); ++j)
      if (exact[2 * i].num * exact[2 * j].den == exact[2 * j].num * exact[2 * i].den &&
          exact[2 * i + 1].num * exact[2 * j + 1].den == exact[2 * j + 1].num * exact[2 * i + 1].den)
        return true;
  return false;
}

RegionPolygon region_polygon(RegionKind kind, int n) {
  require_dimension(n);
  RegionPolygon poly;
  poly.kind = kind;
  poly.n = n;
  const std::int64_t m = n;
  if (kind == RegionKind::lacunary) {
    poly.exact = {frac(0, 1), frac(1, 1), frac(1, 1), frac(0, 1),
                  frac(m, m + 1), frac(m, m + 1)};
  } else {
    poly.exact = {frac(0, 1), frac(1, 1),
                  frac(m - 1, m), frac(1, m),
                  frac(m - 1, m), frac(m - 1, m),
                  frac(m * m - m, m * m + 1), frac(m * m - m + 2, m * m + 1)};
  }
  for (std::size_t i = 0; i < poly.exact.size(); i += 2)
    poly.vertices.push_back({poly.exact[i].to_double(), poly.exact[i + 1].to_double()});
  return poly;
}

bool is_interior(ExponentPoint point, const RegionPolygon& polygon) {
  auto hull = convex_hull(polygon.vertices);
  if (hull.size() < 3) return false;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    double len = std::hypot(b.inv_r - a.inv_r, b.inv_s - a.inv_s);
    if (cross(a, b, point) / len <= kEdgeSlack) return false;
  }
  return true;
}

namespace phi_branch {
double lacunary_left(int n, double inv_r) { return 1.0 - inv_r / n; }
double lacunary_right(int n, double inv_r) { return n * (1.0 - inv_r); }
double full_left(int n, double inv_r) { return 1.0 - inv_r / n; }
double full_right(int n, double inv_r) { return 2.0 - (n + 1) * inv_r / (n - 1); }
double lacunary_breakpoint(int n) { return static_cast<double>(n) / (n + 1); }
double full_breakpoint(int n) {
  return static_cast<double>(n * n - n) / static_cast<double>(n * n + 1);
}
} // namespace phi_branch

double phi(RegionKind kind, int n, double inv_r) {
  require_dimension(n);
  using namespace phi_branch;
  if (kind == RegionKind::lacunary) {
    check_open(inv_r, 0.0, 1.0, "lacunary boundary");
    return inv_r <= lacunary_breakpoint(n) ? lacunary_left(n, inv_r) : lacunary_right(n, inv_r);
  }
  check_open(inv_r, 0.0, static_cast<double>(n - 1) / n, "full boundary");
  return inv_r <= full_breakpoint(n) ? full_left(n, inv_r) : full_right(n, inv_r);
}

double holder_t(double s1, double s2) {
  if (!(s1 > 1.0) || !(s2 > 1.0)) fail(ErrorKind::Domain, "Hoelder exponents must exceed 1");
  double inv_sum = 1.0 / s1 + 1.0 / s2;
  if (inv_sum <= 1.0)
    fail(ErrorKind::UndefinedExponent, "t undefined: 1/s1 + 1/s2 = " + format_real(inv_sum) + " <= 1");
  return s1 * s2 / (s1 + s2 - s1 * s2);
}

ExponentConfig ExponentConfig::from_points(int n, ExponentPoint first, ExponentPoint second) {
  ExponentConfig c;
  c.n = n;
  c.r1 = 1.0 / first.inv_r;
  c.s1 = 1.0 / first.inv_s;
  c.r2 = 1.0 / second.inv_r;
  c.s2 = 1.0 / second.inv_s;
  return c;
}

std::optional<double> ExponentConfig::inv_t() const {
  double v = 1.0 / s1 + 1.0 / s2 - 1.0;
  if (v <= 0.0) return std::nullopt;
  return v;
}

double ExponentConfig::t() const { return holder_t(s1, s2); }

std::optional<double> ExponentConfig::q() const {
  if (!q1 || !q2) return std::nullopt;
  return 1.0 / (1.0 / *q1 + 1.0 / *q2);
}

bool NecessaryReport::all_hold() const {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const NecessaryCondition& c) { return c.holds; });
}

const NecessaryCondition& NecessaryReport::find(const std::string& name) const {
  for (const auto& c : conditions)
    if (c.name == name) return c;
  fail(ErrorKind::Domain, "no condition named " + name);
}

NecessaryReport necessary_report(RegionKind kind, const ExponentConfig& config) {
  require_dimension(config.n);
  if (!(config.r1 > 0 && config.r2 > 0 && config.s1 > 0 && config.s2 > 0))
    fail(ErrorKind::Domain, "exponents must be positive");
  auto it = config.inv_t();
  if (!it) fail(ErrorKind::UndefinedExponent, "t undefined: 1/s1 + 1/s2 <= 1");
  const double n = config.n;
  const double a1 = 1.0 / config.r1, b1 = 1.0 / config.s1;
  const double a2 = 1.0 / config.r2, b2 = 1.0 / config.s2;
  const double it_ = *it;

  NecessaryReport report;
  report.kind = kind;
  auto& cs = report.conditions;
  cs.push_back(make_condition("annulus_ball", a1 + n * b1 + a2 + n * b2, 2 * n, false));
  cs.push_back(make_condition("ball_annulus", n * a1 + b1 + n * a2 + b2, 2 * n, false));
  cs.push_back(make_condition("mixed_r1", std::max(n * a1 + it_, a1 + n * it_), n, false));
  cs.push_back(make_condition("mixed_r2", std::max(n * a2 + it_, a2 + n * it_), n, false));
  cs.push_back(make_condition("sum_r_below_one", a1 + a2, 1.0, true));
  if (kind == RegionKind::full) {
    const double cap = (n - 1) / n;
    cs.push_back(make_condition("r1_below_cap", a1, cap, true));
    cs.push_back(make_condition("r2_below_cap", a2, cap, true));
    cs.push_back(make_condition("knapp_boxes",
                                (n + 1) * a1 + (n - 1) * b1 + (n + 1) * a2 + (n - 1) * b2,
                                4 * (n - 1), false));
    cs.push_back(make_condition("one_box_r1", (n + 1) * a1 + (n - 1) * it_, 2 * (n - 1), false));
    cs.push_back(make_condition("one_box_r2", (n + 1) * a2 + (n - 1) * it_, 2 * (n - 1), false));
  }
  return report;
}

LmoParameters lmo_params(double p1, double p2, double r1, double r2, double r3) {
  auto order = [](const std::string& msg) { fail(ErrorKind::ExponentOrder, msg); };
  if (!(r1 >= 1.0 && r1 <= p1)) order("need 1 <= r1 <= p1");
  if (!(r2 >= 1.0 && r2 <= p2)) order("need 1 <= r2 <= p2");
  if (!(r3 >= 1.0)) order("need r3 >= 1");
  LmoParameters m;
  m.inv_p1 = 1.0 / p1;
  m.inv_p2 = 1.0 / p2;
  m.inv_p = m.inv_p1 + m.inv_p2;
  if (!(m.inv_p < 1.0)) order("need p > 1 so that p' is finite");
  const double inv_r3_conj = 1.0 - 1.0 / r3;
  if (!(inv_r3_conj < m.inv_p)) order("need r3' > p");
  m.inv_p3 = 1.0 - m.inv_p;
  m.inv_r = {1.0 / r1, 1.0 / r2, 1.0 / r3};
  m.inv_r_total = m.inv_r[0] + m.inv_r[1] + m.inv_r[2];
  const std::array<double, 3> inv_pp{m.inv_p1, m.inv_p2, m.inv_p3};
  for (int i = 0; i < 3; ++i) {
    m.inv_delta[i] = m.inv_r[i] - inv_pp[i];
    m.inv_theta[i] = theta_reciprocal(m, i);
  }
  return m;
}

double theta_reciprocal(const LmoParameters& params, int i) {
  return (params.inv_r_total - 1.0) - params.inv_delta.at(i);
}

StepTwoExponents step2_exponents(int n, double epsilon) {
  require_dimension(n);
  if (!(epsilon > 0.0)) fail(ErrorKind::Domain, "epsilon must be positive");
  const double e = epsilon;
  StepTwoExponents out;
  out.inv_t = (2.0 * (n - 1) + n * e) / (n * (2.0 + e));
  out.inv_r = (4.0 * n + n * e - 2.0) / (n * (2.0 + e));
  out.inv_theta1 = (n * (4.0 + 3.0 * e) - 4.0 * (1.0 + e)) / (2.0 * n * (1.0 + e) * (2.0 + e));
  return out;
}

StepTwoExponents step2_exponents_via_lmo(int n, double epsilon) {
  require_dimension(n);
  if (!(epsilon > 0.0)) fail(ErrorKind::Domain, "epsilon must be positive");
  const double r = 2.0 + epsilon;
  const double p = 2.0 + 2.0 * epsilon;
  const double s = 1.0 / phi(RegionKind::lacunary, n, 1.0 / r);
  const double t = holder_t(s, s);
  const auto m = lmo_params(p, p, r, r, t);
  return {1.0 / t, m.inv_r_total, m.inv_theta[0]};
}

double sharpness_exponent(double r1, double r2, ExtendedReal t_prime, double q1, double q2) {
  const double a1 = 1.0 / r1, a2 = 1.0 / r2;
  const double c1 = 1.0 / q1, c2 = 1.0 / q2;
  const double inv_q = c1 + c2;
  const double inv_tp = t_prime.reciprocal();
  if (a1 == c1 || a2 == c2) fail(ErrorKind::Boundary, "q_i equals r_i");
  if (inv_q == inv_tp) fail(ErrorKind::Boundary, "q equals t'");
  if (c1 > a1 || c2 > a2) fail(ErrorKind::ExponentOrder, "need q_i > r_i");
  if (inv_q < inv_tp) fail(ErrorKind::ExponentOrder, "need q < t'");
  return std::max({a1 / (a1 - c1), a2 / (a2 - c2), (1.0 - inv_tp) / (inv_q - inv_tp)});
}

RadialComparisonRanges radial_comparison_ranges(int n, double delta, double epsilon, double alpha) {
  require_dimension(n);
  if (!(delta > 1.0)) fail(ErrorKind::Domain, "delta must exceed 1");
  const double eps_lo = std::max(0.0, (delta - n) / n);
  const double eps_hi = n - 2.0 + delta;
  if (!(epsilon > eps_lo && epsilon < eps_hi))
    fail(ErrorKind::Domain, "epsilon outside (" + format_real(eps_lo) + ", " + format_real(eps_hi) + ")");
  const double alpha_hi = (n - 1.0) * (n + delta) / n;
  if (!(alpha > 0.0 && alpha < alpha_hi))
    fail(ErrorKind::Domain, "alpha outside (0, " + format_real(alpha_hi) + ")");

  const double pd = n + delta;
  RadialComparisonRanges out;
  out.theorem_range = {-n - (n - 2.0) * pd / (2.0 + epsilon), n * (pd - 2.0 - epsilon) / (2.0 + epsilon),
                       false, false};
  out.product_range = {-n + pd / (pd - alpha), n * alpha / (pd - alpha), false, false};
  // Values admitted by the theorem below the product range: (lo_T, min(lo_P, hi_T)].
  const auto& T = out.theorem_range;
  const auto& P = out.product_range;
  if (P.lo > T.lo) {
    bool capped = P.lo >= T.hi;
    out.in_theorem_only = {T.lo, capped ? T.hi : P.lo, false, !capped};
  } else {
    out.in_theorem_only = {T.lo, T.lo, false, false};
  }
  return out;
}

CaseTwoBounds case_two_bounds(RegionKind kind, int n, double delta) {
  require_dimension(n);
  const double pd = n + delta;
  CaseTwoBounds b;
  if (kind == RegionKind::lacunary) {
    b.alpha_low = (n * n + n * delta - n - 1.0) / n;
    b.alpha_high = (n - 1.0) * pd * (pd - 1.0) / ((n - 1.0) * pd + 1.0);
  } else {
    const double nn = n * n - n;
    b.alpha_low = (nn * pd - (n * n + 1.0)) / nn;
    b.alpha_high = pd * (pd * (n - 1.0) - 2.0) / ((pd + 1.0) * (n - 1.0));
  }
  return b;
}

Interval radial_family_range(RegionKind kind, int n, double delta) {
  require_dimension(n);
  const double hi = (n - 1.0) * (n + delta - 1.0);
  if (kind == RegionKind::lacunary) return {1.0 - n, hi, true, false};
  return {1.0 - n, hi - 1.0, false, false};
}

} // namespace bisph
