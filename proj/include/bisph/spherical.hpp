// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <memory>
#include <vector>

#include "bisph/dyadic.hpp"
#include "bisph/grid.hpp"

namespace bisph {

/// Normalized node/weight set on S^1, S^2, or S^3 (the last in product form).
struct SphereQuadrature {
  int ambient = 2;
  std::vector<std::array<double, 4>> nodes;
  std::vector<double> weights;

  /// Product form on S^3: nodes (cos a * u, sin a * v) with u, v on circle.
  std::vector<double> ring_angles;
  std::vector<double> ring_weights;
  std::shared_ptr<const SphereQuadrature> circle;

  std::size_t size() const;
  /// Explicit node list; materializes every ring of a product quadrature.
  SphereQuadrature expanded() const;
};

/// ambient 2: `resolution` equally spaced angles, offset by phase * 2pi/N.
/// ambient 3: `resolution` polar rings times 2*resolution longitudes.
/// ambient 4: `resolution` rings times two circles of 2*resolution nodes.
SphereQuadrature sphere_quadrature(int ambient, int resolution, double phase = 0.5);

struct RadiusSet {
  enum class Kind { dyadic, geometric, interval, list };
  Kind kind = Kind::dyadic;
  int j_min = 0, j_max = 0;
  int steps_per_octave = 16;
  double a = 1.0, b = 2.0;
  std::vector<double> values;

  /// {2^j : j_min <= j <= j_max}.
  static RadiusSet dyadic(int j_min, int j_max);
  /// 2^(j + k/steps) from 2^j_min to 2^j_max; contains the dyadic set.
  static RadiusSet geometric(int j_min, int j_max, int steps_per_octave);
  /// a * 2^(k/steps) below b, then b itself.
  static RadiusSet interval(double a, double b, int steps_per_octave);
  static RadiusSet list(std::vector<double> radii);

  std::vector<double> radii() const;
};

enum class OperatorKind { lacunary, full, local };

const char* to_string(OperatorKind kind) noexcept;
OperatorKind parse_operator_kind(const std::string& text);

/// Radius set for an operator kind, covering [4h, box diameter] of the grid.
RadiusSet default_radii(OperatorKind kind, const GridGeometry& geometry, int steps_per_octave = 16);

/// Keeps radii in [4h, diameter]. Throws Resolution when nothing is left.
std::vector<double> truncate_radii(const std::vector<double>& radii, const GridGeometry& geometry);

/// Flat cell indices where an operator is evaluated; empty means all cells.
using PointSet = std::vector<std::size_t>;

/// Cells where g is nonzero.
PointSet support_points(const GridFunction& g);

/// A_r f at every cell (or at the cells in `points`), multilinear
/// interpolation, zero outside the box.
GridFunction spherical_average(const GridFunction& f, double radius, const SphereQuadrature& quad,
                               const PointSet& points = {});

/// A_r f at an arbitrary point, same interpolation as spherical_average.
double spherical_average_at(const GridFunction& f, double radius, const SphereQuadrature& quad,
                            const Point& x);

/// sup over the truncated radii of A_t f.
GridFunction linear_maximal(const GridFunction& f, const RadiusSet& radii,
                            const SphereQuadrature& quad, const PointSet& points = {});

/// sup over the truncated radii of A_t f1 * A_t f2.
GridFunction bilinear_maximal(const GridFunction& f1, const GridFunction& f2,
                              const RadiusSet& radii, const SphereQuadrature& quad,
                              const PointSet& points = {});

/// Dyadic maximal function over the lattice cubes containing each cell.
GridFunction hl_maximal(const GridFunction& f, const DyadicLattice& lattice);
/// sup over the same cubes of <f1>_Q <f2>_Q.
GridFunction bilinear_hl(const GridFunction& f1, const GridFunction& f2,
                         const DyadicLattice& lattice);

/// Bilinear average over S^3 in the plane, sup over the truncated radii.
/// The quadrature must be the product form.
GridFunction m_sph(const GridFunction& f1, const GridFunction& f2, const RadiusSet& radii,
                   const SphereQuadrature& quad, const PointSet& points = {});

/// Average at radius l_Q/4 of f restricted to the central third of Q,
/// zeroed outside Q.
GridFunction localized_average(const GridFunction& f, const DyadicCube& cube, const Point& origin,
                               const SphereQuadrature& quad);

/// sup over [l_Q/8, l_Q/4] (steps per octave) of the product of the two
/// restricted averages, zeroed outside Q.
GridFunction local_maximal(const GridFunction& f1, const GridFunction& f2, const DyadicCube& cube,
                           const Point& origin, int steps_per_octave,
                           const SphereQuadrature& quad);

} // namespace bisph
