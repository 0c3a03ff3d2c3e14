// SPDX-License-Identifier: Apache-2.0
#include "bisph/spherical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bisph/error.hpp"
#include "bisph/numeric.hpp"
#include "dyadic_internal.hpp"
#include "parallel.hpp"

namespace bisph {

namespace {

constexpr double kPi = std::numbers::pi;

inline double lerp(double a, double b, double t) { return a + t * (b - a); }

/// Per-radius interpolation stencil. The fractional offsets do not depend on
/// the evaluation cell, which makes whole-cell translations exact.
struct Stencil {
  int dim = 2;
  std::vector<std::array<int, 3>> base;
  std::vector<std::array<double, 3>> frac;
  std::vector<double> weight;
  Index lo{}, hi{};
};

Stencil make_stencil(int dim, double spacing, double radius, const SphereQuadrature& quad) {
  Stencil s;
  s.dim = dim;
  const std::size_t n = quad.nodes.size();
  s.base.resize(n);
  s.frac.resize(n);
  s.weight = quad.weights;
  for (int a = 0; a < dim; ++a) {
    s.lo[a] = 1 << 30;
    s.hi[a] = -(1 << 30);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (int a = 0; a < dim; ++a) {
      double d = -radius * quad.nodes[k][static_cast<std::size_t>(a)] / spacing;
      double b = std::floor(d);
      s.base[k][static_cast<std::size_t>(a)] = static_cast<int>(b);
      s.frac[k][static_cast<std::size_t>(a)] = d - b;
      s.lo[a] = std::min(s.lo[a], static_cast<int>(b));
      s.hi[a] = std::max(s.hi[a], static_cast<int>(b) + 1);
    }
  }
  return s;
}

/// Bounding box of the nonzero cell centers, widened by 1.5 cells.
struct SupportBox {
  bool any = false;
  Point lo{}, hi{};
};

SupportBox support_box(const GridFunction& f) {
  SupportBox box;
  const int n = f.dim();
  Index lo{}, hi{};
  for (int a = 0; a < n; ++a) {
    lo[a] = f.cells();
    hi[a] = -1;
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0.0) continue;
    Index idx = f.unravel(i);
    for (int a = 0; a < n; ++a) {
      lo[a] = std::min(lo[a], idx[a]);
      hi[a] = std::max(hi[a], idx[a]);
    }
    box.any = true;
  }
  const auto& g = f.geometry();
  for (int a = 0; a < n; ++a) {
    box.lo[a] = g.coordinate(a, lo[a]) - 1.5 * g.spacing();
    box.hi[a] = g.coordinate(a, hi[a]) + 1.5 * g.spacing();
  }
  return box;
}

/// True when the sphere of radius r around x misses the support box.
bool misses(const SupportBox& box, int dim, const Point& x, double r) {
  if (!box.any) return true;
  double near = 0.0, far = 0.0;
  for (int a = 0; a < dim; ++a) {
    double below = box.lo[a] - x[a];
    double above = x[a] - box.hi[a];
    double gap = std::max({below, above, 0.0});
    double reach = std::max(std::abs(x[a] - box.lo[a]), std::abs(x[a] - box.hi[a]));
    near += gap * gap;
    far += reach * reach;
  }
  return r * r < near || r * r > far;
}

class Averager {
public:
  explicit Averager(const GridFunction& f) : f_(f), box_(support_box(f)) {
    if (f.dim() != 2 && f.dim() != 3)
      fail(ErrorKind::Unsupported, "spherical averages need dimension 2 or 3");
  }

  const GridFunction& function() const { return f_; }

  double at(const Index& idx, const Point& x, double radius, const Stencil& s) const {
    if (misses(box_, f_.dim(), x, radius)) return 0.0;
    const int c = f_.cells();
    bool fast = true;
    for (int a = 0; a < s.dim; ++a)
      if (idx[a] + s.lo[a] < 0 || idx[a] + s.hi[a] >= c) fast = false;
    return s.dim == 2 ? (fast ? sum2<true>(idx, s) : sum2<false>(idx, s))
                      : (fast ? sum3<true>(idx, s) : sum3<false>(idx, s));
  }

private:
  template <bool Fast>
  double fetch2(int i, int j) const {
    const int c = f_.cells();
    if constexpr (!Fast)
      if (i < 0 || j < 0 || i >= c || j >= c) return 0.0;
    return f_.values()[static_cast<std::size_t>(i) * static_cast<std::size_t>(c) +
                       static_cast<std::size_t>(j)];
  }

  template <bool Fast>
  double fetch3(int i, int j, int k) const {
    const auto c = static_cast<std::size_t>(f_.cells());
    if constexpr (!Fast)
      if (i < 0 || j < 0 || k < 0 || i >= f_.cells() || j >= f_.cells() || k >= f_.cells())
        return 0.0;
    return f_.values()[(static_cast<std::size_t>(i) * c + static_cast<std::size_t>(j)) * c +
                       static_cast<std::size_t>(k)];
  }

  template <bool Fast>
  double sum2(const Index& idx, const Stencil& s) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < s.weight.size(); ++k) {
      const int i = idx[0] + s.base[k][0];
      const int j = idx[1] + s.base[k][1];
      const double fx = s.frac[k][0], fy = s.frac[k][1];
      double v0 = lerp(fetch2<Fast>(i, j), fetch2<Fast>(i, j + 1), fy);
      double v1 = lerp(fetch2<Fast>(i + 1, j), fetch2<Fast>(i + 1, j + 1), fy);
      acc += s.weight[k] * lerp(v0, v1, fx);
    }
    return acc;
  }

  template <bool Fast>
  double sum3(const Index& idx, const Stencil& s) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < s.weight.size(); ++k) {
      const int i = idx[0] + s.base[k][0];
      const int j = idx[1] + s.base[k][1];
      const int l = idx[2] + s.base[k][2];
      const double fx = s.frac[k][0], fy = s.frac[k][1], fz = s.frac[k][2];
      double v00 = lerp(fetch3<Fast>(i, j, l), fetch3<Fast>(i, j, l + 1), fz);
      double v01 = lerp(fetch3<Fast>(i, j + 1, l), fetch3<Fast>(i, j + 1, l + 1), fz);
      double v10 = lerp(fetch3<Fast>(i + 1, j, l), fetch3<Fast>(i + 1, j, l + 1), fz);
      double v11 = lerp(fetch3<Fast>(i + 1, j + 1, l), fetch3<Fast>(i + 1, j + 1, l + 1), fz);
      acc += s.weight[k] * lerp(lerp(v00, v01, fy), lerp(v10, v11, fy), fx);
    }
    return acc;
  }

  const GridFunction& f_;
  SupportBox box_;
};

void check_quadrature(const GridFunction& f, const SphereQuadrature& quad) {
  if (quad.ambient != f.dim() || quad.nodes.empty())
    fail(ErrorKind::Shape, "quadrature does not match the grid dimension");
}

template <class Body>
void for_points(const GridFunction& grid, const PointSet& points, Body&& body) {
  if (points.empty()) {
    detail::parallel_for(static_cast<std::ptrdiff_t>(grid.size()),
                         [&](std::ptrdiff_t i) { body(static_cast<std::size_t>(i)); });
  } else {
    detail::parallel_for(static_cast<std::ptrdiff_t>(points.size()),
                         [&](std::ptrdiff_t i) { body(points[static_cast<std::size_t>(i)]); });
  }
}

GridFunction absolute(const GridFunction& f) {
  GridFunction g = f;
  for (double& v : g.values()) v = std::abs(v);
  return g;
}

GridFunction bilinear_max_over(const GridFunction& f1, const GridFunction& f2,
                               const std::vector<double>& radii, const SphereQuadrature& quad,
                               const PointSet& points) {
  if (!(f1.geometry() == f2.geometry())) fail(ErrorKind::Shape, "operands need the same grid");
  check_quadrature(f1, quad);
  GridFunction a1 = absolute(f1), a2 = absolute(f2);
  Averager avg1(a1), avg2(a2);
  GridFunction out(f1.geometry());
  auto vals = out.values();
  for (double r : radii) {
    Stencil s = make_stencil(f1.dim(), f1.spacing(), r, quad);
    for_points(out, points, [&](std::size_t i) {
      Index idx = out.unravel(i);
      Point x = out.point(i);
      double u = avg1.at(idx, x, r, s);
      if (u == 0.0) return;
      double v = u * avg2.at(idx, x, r, s);
      if (v > vals[i]) vals[i] = v;
    });
  }
  return out;
}

GridFunction restrict_to_third(const GridFunction& f, const Cube& q) {
  Cube third = q.scaled(1.0 / 3.0);
  GridFunction g(f.geometry());
  for (std::size_t i = 0; i < f.size(); ++i)
    if (third.contains(f.point(i))) g[i] = f[i];
  return g;
}

PointSet points_in(const GridFunction& f, const Cube& q) {
  PointSet pts;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (q.contains(f.point(i))) pts.push_back(i);
  return pts;
}

} // namespace

std::size_t SphereQuadrature::size() const {
  if (circle) return ring_angles.size() * circle->size() * circle->size();
  return nodes.size();
}

SphereQuadrature SphereQuadrature::expanded() const {
  if (!circle) return *this;
  SphereQuadrature out;
  out.ambient = 4;
  for (std::size_t r = 0; r < ring_angles.size(); ++r) {
    const double ca = std::cos(ring_angles[r]), sa = std::sin(ring_angles[r]);
    for (std::size_t i = 0; i < circle->nodes.size(); ++i)
      for (std::size_t j = 0; j < circle->nodes.size(); ++j) {
        const auto& u = circle->nodes[i];
        const auto& v = circle->nodes[j];
        out.nodes.push_back({ca * u[0], ca * u[1], sa * v[0], sa * v[1]});
        out.weights.push_back(ring_weights[r] * circle->weights[i] * circle->weights[j]);
      }
  }
  return out;
}

SphereQuadrature sphere_quadrature(int ambient, int resolution, double phase) {
  if (resolution < 1) fail(ErrorKind::Domain, "quadrature resolution must be positive");
  SphereQuadrature q;
  q.ambient = ambient;
  if (ambient == 2) {
    const double w = 1.0 / resolution;
    for (int k = 0; k < resolution; ++k) {
      double th = 2.0 * kPi * (k + phase) / resolution;
      q.nodes.push_back({std::cos(th), std::sin(th), 0.0, 0.0});
      q.weights.push_back(w);
    }
  } else if (ambient == 3) {
    const int rings = resolution, lon = 2 * resolution;
    double total = 0.0;
    for (int i = 0; i < rings; ++i) total += lon * std::sin(kPi * (i + 0.5) / rings);
    for (int i = 0; i < rings; ++i) {
      const double ph = kPi * (i + 0.5) / rings;
      const double w = std::sin(ph) / total;
      for (int j = 0; j < lon; ++j) {
        const double la = 2.0 * kPi * (j + phase) / lon;
        q.nodes.push_back({std::sin(ph) * std::cos(la), std::sin(ph) * std::sin(la), std::cos(ph), 0.0});
        q.weights.push_back(w);
      }
    }
  } else if (ambient == 4) {
    q.circle = std::make_shared<const SphereQuadrature>(sphere_quadrature(2, 2 * resolution, phase));
    double total = 0.0;
    for (int i = 0; i < resolution; ++i) {
      const double al = 0.5 * kPi * (i + 0.5) / resolution;
      q.ring_angles.push_back(al);
      q.ring_weights.push_back(std::sin(al) * std::cos(al));
      total += q.ring_weights.back();
    }
    for (double& w : q.ring_weights) w /= total;
  } else {
    fail(ErrorKind::Unsupported, "sphere quadrature supports ambient dimensions 2, 3 and 4");
  }
  return q;
}

RadiusSet RadiusSet::dyadic(int j_min, int j_max) {
  RadiusSet s;
  s.kind = Kind::dyadic;
  s.j_min = j_min;
  s.j_max = j_max;
  return s;
}

RadiusSet RadiusSet::geometric(int j_min, int j_max, int steps_per_octave) {
  if (steps_per_octave < 1) fail(ErrorKind::Domain, "steps per octave must be positive");
  RadiusSet s = dyadic(j_min, j_max);
  s.kind = Kind::geometric;
  s.steps_per_octave = steps_per_octave;
  return s;
}

RadiusSet RadiusSet::interval(double a, double b, int steps_per_octave) {
  if (!(a > 0.0 && b >= a)) fail(ErrorKind::Domain, "radius interval needs 0 < a <= b");
  if (steps_per_octave < 1) fail(ErrorKind::Domain, "steps per octave must be positive");
  RadiusSet s;
  s.kind = Kind::interval;
  s.a = a;
  s.b = b;
  s.steps_per_octave = steps_per_octave;
  return s;
}

RadiusSet RadiusSet::list(std::vector<double> radii) {
  RadiusSet s;
  s.kind = Kind::list;
  s.values = std::move(radii);
  return s;
}

std::vector<double> RadiusSet::radii() const {
  std::vector<double> out;
  switch (kind) {
  case Kind::dyadic:
    for (int j = j_min; j <= j_max; ++j) out.push_back(std::ldexp(1.0, j));
    break;
  case Kind::geometric:
    for (int j = j_min; j < j_max; ++j)
      for (int k = 0; k < steps_per_octave; ++k)
        out.push_back(std::ldexp(std::exp2(static_cast<double>(k) / steps_per_octave), j));
    if (j_max >= j_min) out.push_back(std::ldexp(1.0, j_max));
    break;
  case Kind::interval:
    for (int k = 0;; ++k) {
      double r = a * std::exp2(static_cast<double>(k) / steps_per_octave);
      if (!(r < b)) break;
      out.push_back(r);
    }
    out.push_back(b);
    break;
  case Kind::list: out = values; break;
  }
  return out;
}

const char* to_string(OperatorKind kind) noexcept {
  switch (kind) {
  case OperatorKind::lacunary: return "lac";
  case OperatorKind::full: return "full";
  case OperatorKind::local: return "local";
  }
  return "?";
}

OperatorKind parse_operator_kind(const std::string& text) {
  if (text == "lac" || text == "lacunary") return OperatorKind::lacunary;
  if (text == "full") return OperatorKind::full;
  if (text == "local") return OperatorKind::local;
  fail(ErrorKind::Parse, "unknown operator kind '" + text + "' (lac, full, local)");
}

RadiusSet default_radii(OperatorKind kind, const GridGeometry& geometry, int steps_per_octave) {
  const int j_min = static_cast<int>(std::ceil(std::log2(4.0 * geometry.spacing())));
  const int j_max = static_cast<int>(std::floor(std::log2(geometry.diameter())));
  switch (kind) {
  case OperatorKind::lacunary: return RadiusSet::dyadic(j_min, j_max);
  case OperatorKind::full: return RadiusSet::geometric(j_min, j_max, steps_per_octave);
  case OperatorKind::local: return RadiusSet::interval(1.0, 2.0, steps_per_octave);
  }
  return RadiusSet::dyadic(j_min, j_max);
}

std::vector<double> truncate_radii(const std::vector<double>& radii, const GridGeometry& geometry) {
  std::vector<double> out;
  const double floor_r = 4.0 * geometry.spacing();
  for (double r : radii)
    if (r >= floor_r && r <= geometry.diameter()) out.push_back(r);
  if (out.empty())
    fail(ErrorKind::Resolution, "no radius lies in [4h, box diameter] = [" + format_real(floor_r) +
                                    ", " + format_real(geometry.diameter()) + "]");
  return out;
}

PointSet support_points(const GridFunction& g) {
  PointSet pts;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g[i] != 0.0) pts.push_back(i);
  return pts;
}

GridFunction spherical_average(const GridFunction& f, double radius, const SphereQuadrature& quad,
                               const PointSet& points) {
  if (!(radius > 0.0)) fail(ErrorKind::Domain, "radius must be positive");
  check_quadrature(f, quad);
  Averager avg(f);
  Stencil s = make_stencil(f.dim(), f.spacing(), radius, quad);
  GridFunction out(f.geometry());
  auto vals = out.values();
  for_points(out, points, [&](std::size_t i) {
    vals[i] = avg.at(out.unravel(i), out.point(i), radius, s);
  });
  return out;
}

double spherical_average_at(const GridFunction& f, double radius, const SphereQuadrature& quad,
                            const Point& x) {
  if (!(radius > 0.0)) fail(ErrorKind::Domain, "radius must be positive");
  check_quadrature(f, quad);
  const int n = f.dim();
  const int c = f.cells();
  const auto& g = f.geometry();
  const double h = g.spacing();
  auto fetch = [&](const Index& idx) {
    for (int a = 0; a < n; ++a)
      if (idx[a] < 0 || idx[a] >= c) return 0.0;
    return f[f.ravel(idx)];
  };
  double acc = 0.0;
  for (std::size_t k = 0; k < quad.nodes.size(); ++k) {
    Index base{};
    std::array<double, 3> t{};
    for (int a = 0; a < n; ++a) {
      double u = (x[a] - radius * quad.nodes[k][static_cast<std::size_t>(a)] - g.lower[a]) / h - 0.5;
      double b = std::floor(u);
      base[a] = static_cast<int>(b);
      t[static_cast<std::size_t>(a)] = u - b;
    }
    // Multilinear collapse, last axis first.
    double corner[8];
    for (int m = 0; m < (1 << n); ++m) {
      Index idx = base;
      for (int a = 0; a < n; ++a) idx[a] += (m >> (n - 1 - a)) & 1;
      corner[m] = fetch(idx);
    }
    for (int a = n - 1; a >= 0; --a) {
      const int half = 1 << a;
      for (int m = 0; m < half; ++m)
        corner[m] = lerp(corner[2 * m], corner[2 * m + 1], t[static_cast<std::size_t>(a)]);
    }
    acc += quad.weights[k] * corner[0];
  }
  return acc;
}

GridFunction linear_maximal(const GridFunction& f, const RadiusSet& radii,
                            const SphereQuadrature& quad, const PointSet& points) {
  check_quadrature(f, quad);
  auto rs = truncate_radii(radii.radii(), f.geometry());
  GridFunction a = absolute(f);
  Averager avg(a);
  GridFunction out(f.geometry());
  auto vals = out.values();
  for (double r : rs) {
    Stencil s = make_stencil(f.dim(), f.spacing(), r, quad);
    for_points(out, points, [&](std::size_t i) {
      double v = avg.at(out.unravel(i), out.point(i), r, s);
      if (v > vals[i]) vals[i] = v;
    });
  }
  return out;
}

GridFunction bilinear_maximal(const GridFunction& f1, const GridFunction& f2,
                              const RadiusSet& radii, const SphereQuadrature& quad,
                              const PointSet& points) {
  return bilinear_max_over(f1, f2, truncate_radii(radii.radii(), f1.geometry()), quad, points);
}

GridFunction hl_maximal(const GridFunction& f, const DyadicLattice& lattice) {
  return bilinear_hl(f, GridFunction(f.geometry(), std::vector<double>(f.size(), 1.0)), lattice);
}

GridFunction bilinear_hl(const GridFunction& f1, const GridFunction& f2,
                         const DyadicLattice& lattice) {
  if (!(f1.geometry() == f2.geometry())) fail(ErrorKind::Shape, "operands need the same grid");
  PowerPyramid p1(f1, lattice, 1.0), p2(f2, lattice, 1.0);
  auto fr = detail::cell_frame(f1.geometry(), lattice.origin);
  GridFunction out(f1.geometry());
  auto vals = out.values();
  const int n = f1.dim();
  detail::parallel_for(static_cast<std::ptrdiff_t>(out.size()), [&](std::ptrdiff_t i) {
    Index idx = out.unravel(static_cast<std::size_t>(i));
    DyadicCube cell;
    cell.dim = n;
    cell.level = fr.cell_level;
    for (int a = 0; a < n; ++a) cell.corner[a] = idx[a] - fr.offset[a];
    if (!lattice.root.contains(cell)) return;
    double best = 0.0;
    for (int d = 0; d <= lattice.max_depth; ++d) {
      DyadicCube q = cell;
      q.level = lattice.root.level - d;
      for (int a = 0; a < n; ++a) q.corner[a] = cell.corner[a] >> (q.level - fr.cell_level);
      best = std::max(best, p1.average(q) * p2.average(q));
    }
    vals[static_cast<std::size_t>(i)] = best;
  });
  return out;
}

GridFunction m_sph(const GridFunction& f1, const GridFunction& f2, const RadiusSet& radii,
                   const SphereQuadrature& quad, const PointSet& points) {
  if (f1.dim() != 2) fail(ErrorKind::Unsupported, "the S^3 operator is defined for n = 2 only");
  if (!(f1.geometry() == f2.geometry())) fail(ErrorKind::Shape, "operands need the same grid");
  if (!quad.circle) fail(ErrorKind::Shape, "the S^3 operator needs a product quadrature");
  auto rs = truncate_radii(radii.radii(), f1.geometry());
  GridFunction a1 = absolute(f1), a2 = absolute(f2);
  Averager avg1(a1), avg2(a2);
  GridFunction out(f1.geometry());
  auto vals = out.values();
  const std::size_t rings = quad.ring_angles.size();
  for (double t : rs) {
    std::vector<Stencil> s1, s2;
    std::vector<double> r1(rings), r2(rings);
    for (std::size_t k = 0; k < rings; ++k) {
      r1[k] = t * std::cos(quad.ring_angles[k]);
      r2[k] = t * std::sin(quad.ring_angles[k]);
      s1.push_back(make_stencil(2, f1.spacing(), r1[k], *quad.circle));
      s2.push_back(make_stencil(2, f1.spacing(), r2[k], *quad.circle));
    }
    for_points(out, points, [&](std::size_t i) {
      Index idx = out.unravel(i);
      Point x = out.point(i);
      double acc = 0.0;
      for (std::size_t k = 0; k < rings; ++k) {
        double u = avg1.at(idx, x, r1[k], s1[k]);
        if (u == 0.0) continue;
        acc += quad.ring_weights[k] * u * avg2.at(idx, x, r2[k], s2[k]);
      }
      if (acc > vals[i]) vals[i] = acc;
    });
  }
  return out;
}

GridFunction localized_average(const GridFunction& f, const DyadicCube& cube, const Point& origin,
                               const SphereQuadrature& quad) {
  const double radius = std::ldexp(1.0, cube.level - 2);
  if (radius < 4.0 * f.spacing())
    fail(ErrorKind::Resolution, "cube too small for the grid: radius " + format_real(radius) +
                                    " is below 4h");
  Cube q = cube.to_cube(origin);
  PointSet pts = points_in(f, q);
  if (pts.empty()) return GridFunction(f.geometry());
  return spherical_average(restrict_to_third(f, q), radius, quad, pts);
}

GridFunction local_maximal(const GridFunction& f1, const GridFunction& f2, const DyadicCube& cube,
                           const Point& origin, int steps_per_octave,
                           const SphereQuadrature& quad) {
  const double lo = std::ldexp(1.0, cube.level - 3);
  if (lo < 4.0 * f1.spacing())
    fail(ErrorKind::Resolution, "cube too small for the grid: radius " + format_real(lo) +
                                    " is below 4h");
  Cube q = cube.to_cube(origin);
  PointSet pts = points_in(f1, q);
  if (pts.empty()) return GridFunction(f1.geometry());
  auto radii = RadiusSet::interval(lo, 2.0 * lo, steps_per_octave).radii();
  return bilinear_max_over(restrict_to_third(f1, q), restrict_to_third(f2, q), radii, quad, pts);
}

} // namespace bisph
