// SPDX-License-Identifier: Apache-2.0
#include "bisph/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include <json.hpp>

#include "bisph/error.hpp"
#include "bisph/weights.hpp"
#include "parallel.hpp"

namespace bisph {

namespace {

using json = nlohmann::ordered_json;

constexpr double kInf = std::numeric_limits<double>::infinity();

int next_pow2(double x) {
  int p = 1;
  while (p < x) p <<= 1;
  return p;
}

/// Largest power of two not above x.
double pow2_floor(double x) { return std::exp2(std::floor(std::log2(x))); }

void require_knapp_dim(int n) {
  if (n < 2 || n > kMaxDim) fail(ErrorKind::InvalidDimension, "dimension must be 2 or 3");
}

/// (mean of |f|^p over the whole grid)^(1/p).
double box_average(const GridFunction& f, double p) {
  auto v = f.values();
  double s = detail::deterministic_sum(static_cast<std::ptrdiff_t>(v.size()), [&](std::ptrdiff_t i) {
    return std::pow(std::abs(v[static_cast<std::size_t>(i)]), p);
  });
  return std::pow(s / static_cast<double>(v.size()), 1.0 / p);
}

SphereQuadrature knapp_quadrature(KnappCase c, int n, double delta, int nodes) {
  const bool full = is_full_case(c);
  int res = nodes;
  if (res <= 0) {
    if (n == 2)
      res = full ? next_pow2(160.0 / std::sqrt(delta)) : std::max(512, next_pow2(64.0 / delta));
    else
      res = full ? next_pow2(16.0 / std::sqrt(delta)) : std::max(32, next_pow2(8.0 / delta));
  }
  return sphere_quadrature(n, res);
}

struct KnappTriple {
  TestFunctionSpec f1, f2, h;
};

KnappTriple knapp_triple(KnappCase c, int n, double delta, const KnappOptions& o) {
  using S = TestFunctionSpec;
  Point shifted{};
  shifted[static_cast<std::size_t>(n - 1)] = 4.0 / 3.0;
  switch (c) {
  case KnappCase::lac_annulus_ball:
    return {S::annulus(delta), S::annulus(delta), S::ball(o.c * delta, {}, true)};
  case KnappCase::lac_ball_annulus:
    return {S::ball(delta), S::ball(delta), S::annulus(o.c * delta)};
  case KnappCase::lac_mixed_1:
    return {S::ball(delta), S::ball(2.0), S::annulus(o.c * delta)};
  case KnappCase::lac_mixed_2:
    return {S::annulus(delta), S::ball(2.0), S::ball(o.c * delta, {}, true)};
  case KnappCase::full_knapp_boxes:
    return {S::knapp_r1(delta, o.C), S::knapp_r1(delta, o.C), S::knapp_r2(delta)};
  case KnappCase::full_knapp_one_box:
    return {S::knapp_r1(delta, o.C), S::ball(2.0, shifted), S::knapp_r2(delta)};
  }
  return {};
}

std::vector<double> logs(const std::vector<double>& v, const char* what) {
  std::vector<double> out;
  for (double x : v) {
    if (!(x > 0.0) || !std::isfinite(x))
      fail(ErrorKind::Domain, std::string(what) + " is not positive and finite: " + format_real(x));
    out.push_back(std::log(x));
  }
  return out;
}

double relative_change(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(b - a) / std::max(std::abs(a), std::abs(b));
}

json interval_json(const Interval& i) {
  return json{{"lo", i.lo}, {"hi", i.hi}, {"lo_closed", i.lo_closed}, {"hi_closed", i.hi_closed},
              {"empty", i.empty()}, {"text", i.str()}};
}

json fit_json(const LinearFit& f) {
  return json{{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared},
              {"residual_rms", f.residual_rms}};
}

} // namespace

const char* to_string(KnappCase c) noexcept {
  switch (c) {
  case KnappCase::lac_annulus_ball: return "lac_annulus_ball";
  case KnappCase::lac_ball_annulus: return "lac_ball_annulus";
  case KnappCase::lac_mixed_1: return "lac_mixed_1";
  case KnappCase::lac_mixed_2: return "lac_mixed_2";
  case KnappCase::full_knapp_boxes: return "full_knapp_boxes";
  case KnappCase::full_knapp_one_box: return "full_knapp_one_box";
  }
  return "?";
}

KnappCase parse_knapp_case(const std::string& text) {
  for (auto c : {KnappCase::lac_annulus_ball, KnappCase::lac_ball_annulus, KnappCase::lac_mixed_1,
                 KnappCase::lac_mixed_2, KnappCase::full_knapp_boxes, KnappCase::full_knapp_one_box})
    if (text == to_string(c)) return c;
  fail(ErrorKind::Parse, "unknown Knapp case '" + text +
                             "' (lac_annulus_ball, lac_ball_annulus, lac_mixed_1, lac_mixed_2, "
                             "full_knapp_boxes, full_knapp_one_box)");
}

bool is_full_case(KnappCase c) noexcept {
  return c == KnappCase::full_knapp_boxes || c == KnappCase::full_knapp_one_box;
}

double knapp_pairing_slope(KnappCase c, int n) {
  switch (c) {
  case KnappCase::lac_annulus_ball: return n;
  case KnappCase::lac_ball_annulus: return 2.0 * (n - 1) + 1.0;
  case KnappCase::lac_mixed_1: return n;
  case KnappCase::lac_mixed_2: return n;
  case KnappCase::full_knapp_boxes: return 1.5 * (n - 1);
  case KnappCase::full_knapp_one_box: return n - 1.0;
  }
  return 0.0;
}

double knapp_sparse_slope(KnappCase c, int n, const ExponentConfig& e) {
  const double a1 = 1.0 / e.r1, a2 = 1.0 / e.r2, it = 1.0 / e.t();
  switch (c) {
  case KnappCase::lac_annulus_ball: return a1 + a2 + n * it;
  case KnappCase::lac_ball_annulus: return n * a1 + n * a2 + it;
  case KnappCase::lac_mixed_1: return n * a1 + it;
  case KnappCase::lac_mixed_2: return a1 + n * it;
  case KnappCase::full_knapp_boxes:
    return 0.5 * (n + 1) * (a1 + a2) + 0.5 * (n - 1) * it;
  case KnappCase::full_knapp_one_box: return 0.5 * (n + 1) * a1 + 0.5 * (n - 1) * it;
  }
  return 0.0;
}

ScalingRun knapp_run(KnappCase c, int n, const std::vector<double>& deltas,
                     const ExponentConfig& exponents, const KnappOptions& o) {
  require_knapp_dim(n);
  if (deltas.size() < 4) fail(ErrorKind::Domain, "a scaling run needs at least four deltas");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0 && deltas[i] < 1.0)) fail(ErrorKind::Domain, "deltas must lie in (0, 1)");
    if (i > 0 && !(deltas[i] < deltas[i - 1]))
      fail(ErrorKind::Domain, "deltas must be strictly decreasing");
  }
  if (!(o.c > 0.0 && o.c < 0.5)) fail(ErrorKind::Domain, "c must lie in (0, 1/2)");
  if (!(o.C > 0.0)) fail(ErrorKind::Domain, "C must be positive");
  if (o.cells_per_delta < 4) fail(ErrorKind::Resolution, "cells_per_delta must be at least 4");

  ScalingRun run;
  run.which = c;
  run.n = n;
  run.exponents = exponents;
  run.exponents.n = n;
  const double t = exponents.t();
  run.expected_pairing_slope = knapp_pairing_slope(c, n);
  run.expected_sparse_slope = knapp_sparse_slope(c, n, run.exponents);

  const bool full = is_full_case(c);
  const double half = c == KnappCase::full_knapp_one_box ? 4.0 : 2.0;
  for (double delta : deltas) {
    GridGeometry g;
    if (o.fixed_cells) {
      g = GridGeometry::centered(n, half, *o.fixed_cells);
    } else {
      double h = pow2_floor(delta / o.cells_per_delta);
      g = GridGeometry::centered(n, half, static_cast<int>(std::lround(2.0 * half / h)));
    }
    const double feature = 2.0 * delta * (full ? o.C : 1.0);
    if (feature < 8.0 * g.spacing() * (1.0 - 1e-12))
      fail(ErrorKind::Resolution, "delta " + format_real(delta) + " spans " +
                                      format_real(feature / g.spacing()) +
                                      " cells; at least 8 are needed");
    if (std::pow(static_cast<double>(g.cells), n) > 6.8e7)
      fail(ErrorKind::Resolution, "grid of " + std::to_string(g.cells) + "^" + std::to_string(n) +
                                      " cells is too large for delta " + format_real(delta));

    KnappTriple spec = knapp_triple(c, n, delta, o);
    GridFunction f1 = sample(spec.f1, g);
    GridFunction f2 = sample(spec.f2, g);
    GridFunction h = sample(spec.h, g);
    if (h.is_zero()) fail(ErrorKind::Resolution, "h has no samples at delta " + format_real(delta));

    RadiusSet radii;
    if (full) {
      int spo = o.steps_per_octave > 0 ? o.steps_per_octave : next_pow2(2.0 / delta);
      radii = default_radii(OperatorKind::full, g, spo);
    } else {
      radii = default_radii(OperatorKind::lacunary, g);
    }
    SphereQuadrature quad = knapp_quadrature(c, n, delta, o.nodes);
    GridFunction m = bilinear_maximal(f1, f2, radii, quad, support_points(h));

    ScalingPoint pt;
    pt.delta = delta;
    pt.cells = g.cells;
    pt.spacing = g.spacing();
    pt.pairing = pairing(m, h);
    pt.sparse_form = g.box().measure() * box_average(f1, exponents.r1) *
                     box_average(f2, exponents.r2) * box_average(h, t);
    pt.ratio = pt.sparse_form > 0.0 ? pt.pairing / pt.sparse_form : kInf;
    run.points.push_back(pt);
  }

  std::vector<double> ld, lp, ls;
  for (const auto& p : run.points) {
    ld.push_back(p.delta);
    lp.push_back(p.pairing);
    ls.push_back(p.sparse_form);
  }
  ld = logs(ld, "delta");
  run.pairing_fit = fit_line(ld, logs(lp, "pairing"));
  run.sparse_fit = fit_line(ld, logs(ls, "sparse form"));
  return run;
}

bool slope_consistency(const ScalingRun& run) {
  return run.pairing_fit.slope >= run.sparse_fit.slope - 0.1;
}

DominationRatio sparse_domination_ratio(const GridFunction& f1, const GridFunction& f2,
                                        const GridFunction& h, const ExponentConfig& exponents,
                                        const DyadicLattice& lattice, OperatorKind kind,
                                        int nodes) {
  DominationRatio out;
  const double t = exponents.t();
  const double inv_rho1 = 1.0 / exponents.r1 - 0.01, inv_rho2 = 1.0 / exponents.r2 - 0.01;
  if (!(inv_rho1 > 0.0 && inv_rho2 > 0.0))
    fail(ErrorKind::ExponentOrder, "r_i must stay below 100 so that rho_i is finite");
  if (h.is_zero()) return out;

  RadiusSet radii = default_radii(kind, f1.geometry());
  SphereQuadrature quad = sphere_quadrature(f1.dim(), nodes);
  GridFunction m = bilinear_maximal(f1, f2, radii, quad, support_points(h));
  out.pairing = pairing(m, h);

  SparseFamily family = build_sparse_family(f1, f2, h, lattice, 1.0 / inv_rho1, 1.0 / inv_rho2, t);
  out.cubes = family.cubes.size();
  out.form = sparse_form(family, f1, f2, h, 1.0 / inv_rho1, 1.0 / inv_rho2, t);
  if (out.form > 0.0) {
    out.ratio = out.pairing / out.form;
  } else if (out.pairing != 0.0) {
    out.ratio = kInf;
    out.anomaly = true;
  }
  return out;
}

bool radial_admissible(OperatorKind kind, int n, double alpha, double beta) {
  const double lo = 2.0 * (1.0 - n);
  if (kind == OperatorKind::lacunary)
    return n >= 2 && alpha > lo && beta > lo && alpha < n - 1.0 && beta < n - 1.0 &&
           alpha + beta > lo;
  if (kind == OperatorKind::full)
    return n >= 3 && alpha > lo && beta > lo && alpha < n - 2.0 && beta < n - 2.0 &&
           alpha + beta > lo;
  return false;
}

TestFunctionSpec dilate(const TestFunctionSpec& spec, double s) {
  if (!(s > 0.0)) fail(ErrorKind::Domain, "scale must be positive");
  TestFunctionSpec out = spec;
  auto scale_point = [s](Point& p) {
    for (double& v : p) v *= s;
  };
  switch (spec.kind) {
  case FunctionKind::annulus:
  case FunctionKind::ball:
    out.delta *= s;
    out.radius *= s;
    scale_point(out.center);
    break;
  case FunctionKind::indicator_box:
    scale_point(out.lower);
    scale_point(out.upper);
    break;
  case FunctionKind::constant: break;
  default: fail(ErrorKind::Unsupported, "cannot dilate '" + spec.str() + "'");
  }
  return out;
}

RadialRun radial_run(int n, double alpha, double beta, const std::vector<double>& scales,
                     const RadialOptions& o) {
  require_knapp_dim(n);
  if (alpha <= -n || beta <= -n)
    fail(ErrorKind::Domain, "weight |x|^b is not locally integrable for b <= -n");
  if (o.kind == OperatorKind::local) fail(ErrorKind::Unsupported, "radial runs use lac or full");
  if (scales.size() < 2) fail(ErrorKind::Domain, "a radial run needs at least two scales");

  RadialRun run;
  run.n = n;
  run.alpha = alpha;
  run.beta = beta;
  run.kind = o.kind;
  run.in_range = radial_admissible(o.kind, n, alpha, beta);
  const WeightSpec w_out = WeightSpec::power(0.5 * (alpha + beta));
  const WeightSpec w1 = WeightSpec::power(alpha), w2 = WeightSpec::power(beta);
  SphereQuadrature quad = sphere_quadrature(n, o.nodes, o.phase);

  for (double s : scales) {
    GridGeometry g = GridGeometry::centered(n, 4.0 * s, o.cells);
    GridFunction f = sample(dilate(o.profile, s), g);
    if (f.is_zero()) fail(ErrorKind::Domain, "input vanishes at scale " + format_real(s) +
                                                 "; ratios are undefined");
    GridFunction m = bilinear_maximal(f, f, default_radii(o.kind, g, o.steps_per_octave), quad);
    RadialPoint p;
    p.scale = s;
    p.output_norm = weighted_lp_norm(m, 1.0, w_out);
    p.input_norm1 = weighted_lp_norm(f, 2.0, w1);
    p.input_norm2 = weighted_lp_norm(f, 2.0, w2);
    p.ratio = p.output_norm / (p.input_norm1 * p.input_norm2);
    run.points.push_back(p);
  }
  std::vector<double> ls, lr;
  for (const auto& p : run.points) {
    ls.push_back(p.scale);
    lr.push_back(p.ratio);
  }
  run.trend = fit_line(logs(ls, "scale"), logs(lr, "ratio"));
  return run;
}

ProbeRun unboundedness_probe(int n, const ProbeOptions& o) {
  require_knapp_dim(n);
  ProbeRun run;
  run.cells = o.cells;
  if (run.cells.empty())
    run.cells = n == 2 ? std::vector<int>{128, 256, 512} : std::vector<int>{32, 64, 128};

  std::vector<Point> probes;
  for (int k = 0; k < 8; ++k) {
    const double a = (k + 0.25) * std::numbers::pi / 4.0;
    Point x{};
    x[0] = 0.5 * std::cos(a);
    x[1] = 0.5 * std::sin(a);
    probes.push_back(x);
  }

  for (int cells : run.cells) {
    GridGeometry g = GridGeometry::centered(n, 1.0, cells);
    GridFunction f1 = sample(o.control ? TestFunctionSpec::ball(0.75) : TestFunctionSpec::log_weight(), g);
    GridFunction f2 = o.zero_second ? GridFunction(g)
                                    : sample(TestFunctionSpec::ball(1.0, {}, true), g);
    SphereQuadrature quad = sphere_quadrature(n, n == 2 ? 8 * cells : 2 * cells);
    std::vector<double> radii = default_radii(OperatorKind::full, g, o.steps_per_octave).radii();
    radii.push_back(0.5);
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    radii = truncate_radii(radii, g);

    std::vector<double> best(probes.size(), 0.0), origin(probes.size(), 0.0);
    detail::parallel_for(static_cast<std::ptrdiff_t>(probes.size()), [&](std::ptrdiff_t k) {
      const Point& x = probes[static_cast<std::size_t>(k)];
      double b = 0.0;
      for (double r : radii) {
        double u = spherical_average_at(f1, r, quad, x);
        if (u == 0.0) continue;
        b = std::max(b, u * spherical_average_at(f2, r, quad, x));
      }
      best[static_cast<std::size_t>(k)] = b;
      origin[static_cast<std::size_t>(k)] =
          spherical_average_at(f1, 0.5, quad, x) * spherical_average_at(f2, 0.5, quad, x);
    });
    run.values.push_back(*std::max_element(best.begin(), best.end()));
    run.through_origin.push_back(*std::max_element(origin.begin(), origin.end()));
  }

  run.strictly_increasing = true;
  for (std::size_t i = 1; i < run.values.size(); ++i)
    if (!(run.values[i] > run.values[i - 1])) run.strictly_increasing = false;
  const double first = run.values.front(), last = run.values.back();
  run.growth = first > 0.0 ? last / first : (last > 0.0 ? kInf : 0.0);
  if (run.values.size() >= 2)
    run.last_change = relative_change(run.values[run.values.size() - 2], last);
  return run;
}

PointwiseScan jeole_ratio_scan(const std::vector<std::pair<TestFunctionSpec, TestFunctionSpec>>& corpus,
                               int cells, int resolution) {
  PointwiseScan out;
  out.cells = cells;
  GridGeometry g = GridGeometry::centered(2, 4.0, cells);
  DyadicLattice lattice = DyadicLattice::for_grid(g);
  std::vector<double> radii;
  for (double r : default_radii(OperatorKind::full, g, 8).radii())
    if (r <= 2.0) radii.push_back(r);
  RadiusSet rs = RadiusSet::list(radii);
  SphereQuadrature s3 = sphere_quadrature(4, resolution);
  SphereQuadrature s1 = sphere_quadrature(2, 2 * resolution);

  const Cube central{2, {-2.0, -2.0, 0.0}, 4.0};
  const GridFunction frame(g);
  PointSet pts;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (central.contains(frame.point(i))) pts.push_back(i);

  for (const auto& [a, b] : corpus) {
    GridFunction f1 = sample(a, g), f2 = sample(b, g);
    GridFunction top = m_sph(f1, f2, rs, s3, pts);
    GridFunction mf1 = linear_maximal(f1, rs, s1, pts);
    GridFunction mf2 = hl_maximal(f2, lattice);
    for (std::size_t i : pts) {
      const double ratio = top[i] / (mf1[i] * mf2[i] + std::numeric_limits<double>::epsilon());
      out.max_ratio = std::max(out.max_ratio, ratio);
    }
  }
  return out;
}

ComparisonReport comparison_report(int n, double delta, double epsilon,
                                   const std::vector<double>& alphas) {
  if (alphas.empty()) fail(ErrorKind::Domain, "the alpha grid is empty");
  ComparisonReport rep;
  rep.n = n;
  rep.delta = delta;
  rep.epsilon = epsilon;
  rep.alphas = alphas;
  for (double a : alphas) {
    RadialComparisonRanges r = radial_comparison_ranges(n, delta, epsilon, a);
    rep.theorem_range = r.theorem_range;
    rep.product_ranges.push_back(r.product_range);
  }

  std::vector<Interval> sorted = rep.product_ranges;
  std::sort(sorted.begin(), sorted.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  rep.product_hull = sorted.front();
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].lo >= rep.product_hull.hi) rep.product_union_connected = false;
    rep.product_hull.hi = std::max(rep.product_hull.hi, sorted[i].hi);
  }

  const Interval& T = rep.theorem_range;
  const Interval& P = rep.product_hull;
  if (P.lo > T.lo) {
    const bool capped = P.lo >= T.hi;
    rep.difference = {T.lo, capped ? T.hi : P.lo, false, !capped && !P.lo_closed};
  } else {
    rep.difference = {T.lo, T.lo, false, false};
  }

  rep.lacunary_case_two = case_two_bounds(RegionKind::lacunary, n, delta);
  rep.full_case_two = case_two_bounds(RegionKind::full, n, delta);
  rep.family_range = radial_family_range(RegionKind::lacunary, n, delta);
  const Interval& F = rep.family_range;
  if (T.lo < F.lo)
    rep.theorem_below_family = {T.lo, std::min(F.lo, T.hi), false, F.lo < T.hi && !F.lo_closed};
  else
    rep.theorem_below_family = {T.lo, T.lo, false, false};
  return rep;
}

void write_scaling_csv(const ScalingRun& run, std::ostream& out) {
  out << "parameter,pairing,sparse_form,ratio\n";
  for (const auto& p : run.points)
    out << format_real(p.delta) << ',' << format_real(p.pairing) << ',' << format_real(p.sparse_form)
        << ',' << format_real(p.ratio) << '\n';
}

void write_radial_csv(const RadialRun& run, std::ostream& out) {
  out << "parameter,pairing,sparse_form,ratio\n";
  for (const auto& p : run.points)
    out << format_real(p.scale) << ',' << format_real(p.output_norm) << ','
        << format_real(p.input_norm1 * p.input_norm2) << ',' << format_real(p.ratio) << '\n';
}

std::string scaling_json(const ScalingRun& run) {
  json j;
  j["case"] = to_string(run.which);
  j["n"] = run.n;
  j["exponents"] = {{"r1", run.exponents.r1}, {"s1", run.exponents.s1}, {"r2", run.exponents.r2},
                    {"s2", run.exponents.s2}, {"t", run.exponents.t()}};
  json pts = json::array();
  for (const auto& p : run.points)
    pts.push_back({{"delta", p.delta}, {"cells", p.cells}, {"spacing", p.spacing},
                   {"pairing", p.pairing}, {"sparse_form", p.sparse_form}, {"ratio", p.ratio}});
  j["points"] = pts;
  j["pairing_fit"] = fit_json(run.pairing_fit);
  j["sparse_fit"] = fit_json(run.sparse_fit);
  j["expected_pairing_slope"] = run.expected_pairing_slope;
  j["expected_sparse_slope"] = run.expected_sparse_slope;
  j["pass"] = {{"slope_consistency", slope_consistency(run)},
               {"pairing_r_squared", run.pairing_fit.r_squared >= 0.98}};
  return j.dump(2);
}

std::string radial_json(const RadialRun& run) {
  json j;
  j["n"] = run.n;
  j["alpha"] = run.alpha;
  j["beta"] = run.beta;
  j["operator"] = to_string(run.kind);
  j["in_range"] = run.in_range;
  json pts = json::array();
  for (const auto& p : run.points)
    pts.push_back({{"scale", p.scale}, {"output_norm", p.output_norm}, {"input_norm1", p.input_norm1},
                   {"input_norm2", p.input_norm2}, {"ratio", p.ratio}});
  j["points"] = pts;
  j["trend"] = fit_json(run.trend);
  j["pass"] = {{"trend_flat", std::abs(run.trend.slope) <= 0.2}};
  return j.dump(2);
}

std::string probe_json(const ProbeRun& run) {
  json j;
  j["cells"] = run.cells;
  j["values"] = run.values;
  j["through_origin"] = run.through_origin;
  j["strictly_increasing"] = run.strictly_increasing;
  j["growth"] = run.growth;
  j["last_change"] = run.last_change;
  j["pass"] = {{"diverging", run.strictly_increasing && run.growth >= 2.0},
               {"stable", run.last_change < 0.05}};
  return j.dump(2);
}

std::string comparison_json(const ComparisonReport& r) {
  json j;
  j["n"] = r.n;
  j["delta"] = r.delta;
  j["epsilon"] = r.epsilon;
  j["theorem_range"] = interval_json(r.theorem_range);
  json prods = json::array();
  for (std::size_t i = 0; i < r.alphas.size(); ++i)
    prods.push_back({{"alpha", r.alphas[i]}, {"range", interval_json(r.product_ranges[i])}});
  j["product_ranges"] = prods;
  j["product_hull"] = interval_json(r.product_hull);
  j["product_union_connected"] = r.product_union_connected;
  j["difference"] = interval_json(r.difference);
  auto case_two = [](const CaseTwoBounds& b) {
    return json{{"alpha_low", b.alpha_low}, {"alpha_high", b.alpha_high}, {"feasible", b.feasible()}};
  };
  j["lacunary_case_two"] = case_two(r.lacunary_case_two);
  j["full_case_two"] = case_two(r.full_case_two);
  j["family_range"] = interval_json(r.family_range);
  j["theorem_below_family"] = interval_json(r.theorem_below_family);
  j["pass"] = {{"difference_nonempty", !r.difference.empty()},
               {"case_two_infeasible", !r.lacunary_case_two.feasible()},
               {"below_family_nonempty", !r.theorem_below_family.empty()}};
  return j.dump(2);
}

} // namespace bisph
