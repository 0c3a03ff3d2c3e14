// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace bisph {

inline constexpr int kMaxDim = 3;
using Point = std::array<double, kMaxDim>;
using Index = std::array<int, kMaxDim>;

/// Axis-aligned cube [lower, lower + side)^dim.
struct Cube {
  int dim = 2;
  Point lower{};
  double side = 1.0;

  double measure() const;
  Point center() const;
  bool contains(const Point& x) const;
  /// Cube with the same center and side scaled by factor.
  Cube scaled(double factor) const;
};

/// Uniform cell-centered grid over a cubic box.
struct GridGeometry {
  int dim = 2;
  Point lower{};
  double side = 8.0;
  int cells = 256;

  /// Box [-half_width, half_width]^dim.
  static GridGeometry centered(int dim, double half_width, int cells);

  double spacing() const { return side / cells; }
  double cell_volume() const;
  double diameter() const;
  std::size_t size() const;
  double coordinate(int axis, int index) const {
    return lower[static_cast<std::size_t>(axis)] + (index + 0.5) * spacing();
  }
  Cube box() const { return {dim, lower, side}; }
  bool operator==(const GridGeometry&) const = default;
};

class GridFunction {
public:
  GridFunction() = default;
  explicit GridFunction(GridGeometry geometry);
  GridFunction(GridGeometry geometry, std::vector<double> values);

  const GridGeometry& geometry() const { return geom_; }
  int dim() const { return geom_.dim; }
  int cells() const { return geom_.cells; }
  double spacing() const { return geom_.spacing(); }
  std::size_t size() const { return values_.size(); }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  Index unravel(std::size_t flat) const;
  std::size_t ravel(const Index& idx) const;
  Point point(std::size_t flat) const;
  /// Flat index of the cell containing x, or size() when x is outside.
  std::size_t locate(const Point& x) const;

  double max_value() const;
  bool is_zero() const;

private:
  GridGeometry geom_;
  std::vector<double> values_;
};

enum class FunctionKind {
  annulus,
  ball,
  knapp_box_r1,
  knapp_box_r2,
  log_weight,
  indicator_box,
  power,
  constant,
};

/// Catalogue entry for sampled test functions.
struct TestFunctionSpec {
  FunctionKind kind = FunctionKind::constant;
  double delta = 0.1;    ///< annulus half-width or Knapp scale
  double radius = 1.0;   ///< annulus mid radius or ball radius
  double knapp_c = 1.0;  ///< width constant of the thin Knapp box
  bool closed = false;   ///< ball includes its boundary sphere
  Point center{};        ///< ball or annulus center
  Point lower{}, upper{};///< indicator box [lower, upper)
  double exponent = 0.0; ///< power weight exponent
  double value = 1.0;    ///< constant value

  static TestFunctionSpec annulus(double delta, double radius = 1.0);
  static TestFunctionSpec ball(double radius, Point center = {}, bool closed = false);
  static TestFunctionSpec knapp_r1(double delta, double c = 1.0);
  static TestFunctionSpec knapp_r2(double delta);
  static TestFunctionSpec log_weight();
  static TestFunctionSpec box(int dim, Point lower, Point upper);
  static TestFunctionSpec power(double b);
  static TestFunctionSpec constant(double c);

  /// "kind:key=value,..." e.g. "ball:rho=1" or "annulus:delta=0.1,radius=2".
  static TestFunctionSpec parse(const std::string& text);
  std::string str() const;

  double evaluate(int dim, const Point& x) const;
  /// Bounding box of the support; false for unbounded kinds.
  bool support_bounds(int dim, Point& lo, Point& hi) const;
};

/// Samples at cell centers. Throws Domain when the support leaves the box.
GridFunction sample(const TestFunctionSpec& spec, const GridGeometry& geometry);

/// Weight given by a closed form c|x|^b or by samples on a grid.
class WeightSpec {
public:
  static WeightSpec power(double b, double scale = 1.0);
  static WeightSpec constant(double c) { return power(0.0, c); }
  static WeightSpec sampled(GridFunction samples);

  bool is_power() const { return !samples_; }
  double exponent() const { return exponent_; }
  double scale() const { return scale_; }
  const GridFunction* samples() const { return samples_.get(); }

  /// w^e.
  WeightSpec pow(double e) const;
  /// Pointwise product.
  WeightSpec times(const WeightSpec& other) const;
  /// Value at a cell center of the given geometry.
  double at(const GridGeometry& geometry, std::size_t flat) const;
  double at(int dim, const Point& x) const;
  /// False for power weights with b <= -n.
  bool locally_integrable(int n) const;

private:
  double exponent_ = 0.0;
  double scale_ = 1.0;
  std::shared_ptr<const GridFunction> samples_;
};

/// (sum |f|^p w h^n)^(1/p) by the midpoint rule.
double weighted_lp_norm(const GridFunction& f, double p, const WeightSpec& weight);
/// Midpoint-rule integral of F*h.
double pairing(const GridFunction& F, const GridFunction& h);
/// Shifts samples by whole cells, zero filling.
GridFunction translate(const GridFunction& f, const Index& offset);

void write_csv(const GridFunction& f, std::ostream& out);
void write_csv(const GridFunction& f, const std::string& path);
void write_raw(const GridFunction& f, const std::string& path);
GridFunction read_raw(const std::string& path);

} // namespace bisph
