// SPDX-License-Identifier: Apache-2.0
#include "bisph/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "bisph/error.hpp"
#include "bisph/numeric.hpp"
#include "parallel.hpp"

namespace bisph {

namespace {

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim)
    fail(ErrorKind::InvalidDimension, "grid dimension must be 1, 2 or 3");
}

double norm(int dim, const Point& x) {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) s += x[a] * x[a];
  return std::sqrt(s);
}

double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    fail(ErrorKind::Parse, "malformed number for '" + key + "': '" + text + "'");
  return v;
}

} // namespace

double Cube::measure() const { return std::pow(side, dim); }

Point Cube::center() const {
  Point c{};
  for (int a = 0; a < dim; ++a) c[a] = lower[a] + 0.5 * side;
  return c;
}

bool Cube::contains(const Point& x) const {
  for (int a = 0; a < dim; ++a)
    if (!(x[a] >= lower[a] && x[a] < lower[a] + side)) return false;
  return true;
}

Cube Cube::scaled(double factor) const {
  Cube c = *this;
  c.side = side * factor;
  for (int a = 0; a < dim; ++a) c.lower[a] = lower[a] + 0.5 * (side - c.side);
  return c;
}

GridGeometry GridGeometry::centered(int dim, double half_width, int cells) {
  check_dim(dim);
  GridGeometry g;
  g.dim = dim;
  g.side = 2.0 * half_width;
  g.cells = cells;
  for (int a = 0; a < dim; ++a) g.lower[a] = -half_width;
  return g;
}

double GridGeometry::cell_volume() const { return std::pow(spacing(), dim); }

double GridGeometry::diameter() const { return side * std::sqrt(static_cast<double>(dim)); }

std::size_t GridGeometry::size() const {
  std::size_t n = 1;
  for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(cells);
  return n;
}

GridFunction::GridFunction(GridGeometry geometry) : geom_(geometry) {
  check_dim(geom_.dim);
  if (geom_.cells < 1 || !(geom_.side > 0.0)) fail(ErrorKind::Domain, "grid needs positive cells and side");
  values_.assign(geom_.size(), 0.0);
}

GridFunction::GridFunction(GridGeometry geometry, std::vector<double> values)
    : GridFunction(geometry) {
  if (values.size() != values_.size()) fail(ErrorKind::Shape, "value count does not match grid size");
  values_ = std::move(values);
}

Index GridFunction::unravel(std::size_t flat) const {
  Index idx{};
  const auto c = static_cast<std::size_t>(geom_.cells);
  for (int a = geom_.dim - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % c);
    flat /= c;
  }
  return idx;
}

std::size_t GridFunction::ravel(const Index& idx) const {
  std::size_t flat = 0;
  for (int a = 0; a < geom_.dim; ++a) flat = flat * static_cast<std::size_t>(geom_.cells) + idx[a];
  return flat;
}

Point GridFunction::point(std::size_t flat) const {
  Index idx = unravel(flat);
  Point x{};
  for (int a = 0; a < geom_.dim; ++a) x[a] = geom_.coordinate(a, idx[a]);
  return x;
}

std::size_t GridFunction::locate(const Point& x) const {
  Index idx{};
  for (int a = 0; a < geom_.dim; ++a) {
    double u = (x[a] - geom_.lower[a]) / spacing();
    if (!(u >= 0.0 && u < geom_.cells)) return size();
    idx[a] = static_cast<int>(std::floor(u));
  }
  return ravel(idx);
}

double GridFunction::max_value() const {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : values_) m = std::max(m, v);
  return m;
}

bool GridFunction::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

TestFunctionSpec TestFunctionSpec::annulus(double delta, double radius) {
  TestFunctionSpec s;
  s.kind = FunctionKind::annulus;
  s.delta = delta;
  s.radius = radius;
  return s;
}

TestFunctionSpec TestFunctionSpec::ball(double radius, Point center, bool closed) {
  TestFunctionSpec s;
  s.kind = FunctionKind::ball;
  s.radius = radius;
  s.center = center;
  s.closed = closed;
  return s;
}

TestFunctionSpec TestFunctionSpec::knapp_r1(double delta, double c) {
  TestFunctionSpec s;
  s.kind = FunctionKind::knapp_box_r1;
  s.delta = delta;
  s.knapp_c = c;
  return s;
}

TestFunctionSpec TestFunctionSpec::knapp_r2(double delta) {
  TestFunctionSpec s;
  s.kind = FunctionKind::knapp_box_r2;
  s.delta = delta;
  return s;
}

TestFunctionSpec TestFunctionSpec::log_weight() {
  TestFunctionSpec s;
  s.kind = FunctionKind::log_weight;
  return s;
}

TestFunctionSpec TestFunctionSpec::box(int dim, Point lower, Point upper) {
  TestFunctionSpec s;
  s.kind = FunctionKind::indicator_box;
  s.lower = lower;
  s.upper = upper;
  for (int a = dim; a < kMaxDim; ++a) {
    s.lower[a] = 0.0;
    s.upper[a] = 0.0;
  }
  return s;
}

TestFunctionSpec TestFunctionSpec::power(double b) {
  TestFunctionSpec s;
  s.kind = FunctionKind::power;
  s.exponent = b;
  return s;
}

TestFunctionSpec TestFunctionSpec::constant(double c) {
  TestFunctionSpec s;
  s.kind = FunctionKind::constant;
  s.value = c;
  return s;
}

TestFunctionSpec TestFunctionSpec::parse(const std::string& text) {
  auto colon = text.find(':');
  std::string name = text.substr(0, colon);
  std::map<std::string, double> kv;
  if (colon != std::string::npos) {
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      if (item.empty()) continue;
      auto eq = item.find('=');
      if (eq == std::string::npos) fail(ErrorKind::Parse, "expected key=value in '" + item + "'");
      std::string key = item.substr(0, eq);
      kv[key] = parse_number(key, item.substr(eq + 1));
    }
  }
  auto take = [&](const std::string& key, double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    double v = it->second;
    kv.erase(it);
    return v;
  };
  TestFunctionSpec s;
  if (name == "annulus") {
    s = annulus(take("delta", 0.1), take("radius", 1.0));
    s.center = {take("cx", 0.0), take("cy", 0.0), take("cz", 0.0)};
  } else if (name == "ball") {
    s = ball(take("rho", 1.0), {take("cx", 0.0), take("cy", 0.0), take("cz", 0.0)},
             take("closed", 0.0) != 0.0);
  } else if (name == "r1" || name == "knapp_r1") {
    s = knapp_r1(take("delta", 0.1), take("c", 1.0));
  } else if (name == "r2" || name == "knapp_r2") {
    s = knapp_r2(take("delta", 0.1));
  } else if (name == "log" || name == "log_weight") {
    s = log_weight();
  } else if (name == "box") {
    s = box(kMaxDim, {take("x0", 0.0), take("y0", 0.0), take("z0", 0.0)},
            {take("x1", 1.0), take("y1", 1.0), take("z1", 1.0)});
  } else if (name == "power") {
    s = power(take("b", 0.0));
  } else if (name == "const" || name == "constant") {
    s = constant(take("c", 1.0));
  } else {
    fail(ErrorKind::Parse, "unknown function kind '" + name +
                               "' (annulus, ball, r1, r2, log, box, power, const)");
  }
  if (!kv.empty()) fail(ErrorKind::Parse, "unknown key '" + kv.begin()->first + "' for " + name);
  return s;
}

std::string TestFunctionSpec::str() const {
  switch (kind) {
  case FunctionKind::annulus:
    return "annulus:delta=" + format_real(delta) + ",radius=" + format_real(radius);
  case FunctionKind::ball:
    return "ball:rho=" + format_real(radius) + ",cx=" + format_real(center[0]) + ",cy=" +
           format_real(center[1]) + (closed ? ",closed=1" : "");
  case FunctionKind::knapp_box_r1:
    return "r1:delta=" + format_real(delta) + ",c=" + format_real(knapp_c);
  case FunctionKind::knapp_box_r2: return "r2:delta=" + format_real(delta);
  case FunctionKind::log_weight: return "log";
  case FunctionKind::indicator_box:
    return "box:x0=" + format_real(lower[0]) + ",x1=" + format_real(upper[0]) + ",y0=" +
           format_real(lower[1]) + ",y1=" + format_real(upper[1]);
  case FunctionKind::power: return "power:b=" + format_real(exponent);
  case FunctionKind::constant: return "const:c=" + format_real(value);
  }
  return "?";
}

double TestFunctionSpec::evaluate(int dim, const Point& x) const {
  switch (kind) {
  case FunctionKind::annulus: {
    Point y{};
    for (int a = 0; a < dim; ++a) y[a] = x[a] - center[a];
    return std::abs(norm(dim, y) - radius) < delta ? 1.0 : 0.0;
  }
  case FunctionKind::ball: {
    Point y{};
    for (int a = 0; a < dim; ++a) y[a] = x[a] - center[a];
    double r = norm(dim, y);
    return (closed ? r <= radius : r < radius) ? 1.0 : 0.0;
  }
  case FunctionKind::knapp_box_r1: {
    const double wide = knapp_c * std::sqrt(delta);
    for (int a = 0; a + 1 < dim; ++a)
      if (std::abs(x[a]) > wide) return 0.0;
    return std::abs(x[dim - 1]) <= knapp_c * delta ? 1.0 : 0.0;
  }
  case FunctionKind::knapp_box_r2: {
    const double wide = std::sqrt(delta);
    for (int a = 0; a + 1 < dim; ++a)
      if (std::abs(x[a]) > wide) return 0.0;
    return x[dim - 1] >= 4.0 / 3.0 && x[dim - 1] <= 5.0 / 3.0 ? 1.0 : 0.0;
  }
  case FunctionKind::log_weight: {
    double r = norm(dim, x);
    if (!(r < 0.75)) return 0.0;
    if (r == 0.0) return std::numeric_limits<double>::infinity();
    return std::pow(r, 1.0 - dim) / std::log(1.0 / r);
  }
  case FunctionKind::indicator_box:
    for (int a = 0; a < dim; ++a)
      if (!(x[a] >= lower[a] && x[a] < upper[a])) return 0.0;
    return 1.0;
  case FunctionKind::power: return std::pow(norm(dim, x), exponent);
  case FunctionKind::constant: return value;
  }
  return 0.0;
}

bool TestFunctionSpec::support_bounds(int dim, Point& lo, Point& hi) const {
  lo = {};
  hi = {};
  switch (kind) {
  case FunctionKind::annulus:
  case FunctionKind::ball: {
    double reach = kind == FunctionKind::annulus ? radius + delta : radius;
    for (int a = 0; a < dim; ++a) {
      lo[a] = center[a] - reach;
      hi[a] = center[a] + reach;
    }
    return true;
  }
  case FunctionKind::knapp_box_r1:
    for (int a = 0; a + 1 < dim; ++a) {
      lo[a] = -knapp_c * std::sqrt(delta);
      hi[a] = knapp_c * std::sqrt(delta);
    }
    lo[dim - 1] = -knapp_c * delta;
    hi[dim - 1] = knapp_c * delta;
    return true;
  case FunctionKind::knapp_box_r2:
    for (int a = 0; a + 1 < dim; ++a) {
      lo[a] = -std::sqrt(delta);
      hi[a] = std::sqrt(delta);
    }
    lo[dim - 1] = 4.0 / 3.0;
    hi[dim - 1] = 5.0 / 3.0;
    return true;
  case FunctionKind::log_weight:
    for (int a = 0; a < dim; ++a) {
      lo[a] = -0.75;
      hi[a] = 0.75;
    }
    return true;
  case FunctionKind::indicator_box:
    for (int a = 0; a < dim; ++a) {
      lo[a] = lower[a];
      hi[a] = upper[a];
    }
    return true;
  case FunctionKind::power:
  case FunctionKind::constant: return false;
  }
  return false;
}

GridFunction sample(const TestFunctionSpec& spec, const GridGeometry& geometry) {
  Point lo, hi;
  if (spec.support_bounds(geometry.dim, lo, hi)) {
    const double slack = 1e-12 * geometry.side;
    for (int a = 0; a < geometry.dim; ++a) {
      if (lo[a] < geometry.lower[a] - slack || hi[a] > geometry.lower[a] + geometry.side + slack)
        fail(ErrorKind::Domain, "support of " + spec.str() + " exceeds the grid box");
    }
  }
  GridFunction f(geometry);
  auto vals = f.values();
  detail::parallel_for(static_cast<std::ptrdiff_t>(f.size()), [&](std::ptrdiff_t i) {
    vals[static_cast<std::size_t>(i)] = spec.evaluate(geometry.dim, f.point(static_cast<std::size_t>(i)));
  });
  return f;
}

WeightSpec WeightSpec::power(double b, double scale) {
  WeightSpec w;
  w.exponent_ = b;
  w.scale_ = scale;
  return w;
}

WeightSpec WeightSpec::sampled(GridFunction samples) {
  WeightSpec w;
  w.samples_ = std::make_shared<const GridFunction>(std::move(samples));
  return w;
}

WeightSpec WeightSpec::pow(double e) const {
  if (is_power()) return power(exponent_ * e, std::pow(scale_, e));
  GridFunction g = *samples_;
  for (double& v : g.values()) v = std::pow(v, e);
  return sampled(std::move(g));
}

WeightSpec WeightSpec::times(const WeightSpec& other) const {
  if (is_power() && other.is_power()) return power(exponent_ + other.exponent_, scale_ * other.scale_);
  const GridFunction& base = is_power() ? *other.samples_ : *samples_;
  GridFunction g(base.geometry());
  for (std::size_t i = 0; i < g.size(); ++i)
    g[i] = at(base.geometry(), i) * other.at(base.geometry(), i);
  return sampled(std::move(g));
}

double WeightSpec::at(const GridGeometry& geometry, std::size_t flat) const {
  if (!is_power()) {
    if (!(samples_->geometry() == geometry)) fail(ErrorKind::Shape, "sampled weight geometry mismatch");
    return (*samples_)[flat];
  }
  if (exponent_ == 0.0) return scale_;
  Point x{};
  std::size_t rest = flat;
  const auto c = static_cast<std::size_t>(geometry.cells);
  for (int a = geometry.dim - 1; a >= 0; --a) {
    x[a] = geometry.coordinate(a, static_cast<int>(rest % c));
    rest /= c;
  }
  return at(geometry.dim, x);
}

double WeightSpec::at(int dim, const Point& x) const {
  if (!is_power()) {
    std::size_t i = samples_->locate(x);
    return i < samples_->size() ? (*samples_)[i] : 0.0;
  }
  if (exponent_ == 0.0) return scale_;
  return scale_ * std::pow(norm(dim, x), exponent_);
}

bool WeightSpec::locally_integrable(int n) const { return !is_power() || exponent_ > -n; }

double weighted_lp_norm(const GridFunction& f, double p, const WeightSpec& weight) {
  if (!(p > 0.0)) fail(ErrorKind::Domain, "norm exponent must be positive");
  if (!weight.locally_integrable(f.dim()))
    fail(ErrorKind::Domain, "power weight |x|^" + format_real(weight.exponent()) +
                                " is not locally integrable in dimension " + std::to_string(f.dim()));
  const auto& g = f.geometry();
  auto vals = f.values();
  double sum = detail::deterministic_sum(static_cast<std::ptrdiff_t>(f.size()), [&](std::ptrdiff_t i) {
    double v = std::abs(vals[static_cast<std::size_t>(i)]);
    if (v == 0.0) return 0.0;
    double vp = p == 1.0 ? v : p == 2.0 ? v * v : std::pow(v, p);
    return vp * weight.at(g, static_cast<std::size_t>(i));
  });
  sum *= g.cell_volume();
  return p == 1.0 ? sum : p == 2.0 ? std::sqrt(sum) : std::pow(sum, 1.0 / p);
}

double pairing(const GridFunction& F, const GridFunction& h) {
  if (!(F.geometry() == h.geometry())) fail(ErrorKind::Shape, "pairing needs matching grid geometry");
  auto a = F.values();
  auto b = h.values();
  double sum = detail::deterministic_sum(static_cast<std::ptrdiff_t>(F.size()), [&](std::ptrdiff_t i) {
    return a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
  });
  return sum * F.geometry().cell_volume();
}

GridFunction translate(const GridFunction& f, const Index& offset) {
  GridFunction out(f.geometry());
  const int c = f.cells();
  for (std::size_t i = 0; i < f.size(); ++i) {
    Index idx = f.unravel(i);
    bool inside = true;
    for (int a = 0; a < f.dim(); ++a) {
      idx[a] += offset[a];
      if (idx[a] < 0 || idx[a] >= c) inside = false;
    }
    if (inside) out[out.ravel(idx)] = f[i];
  }
  return out;
}

} // namespace bisph
