// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bisph/exponents.hpp"
#include "bisph/grid.hpp"

namespace bisph {

/// Mean of c|x|^b over a cube. Infinite when the closed cube contains the
/// origin and b <= -n.
double power_cube_mean(const Cube& cube, double b, double scale = 1.0);

/// Mean of a weight over a cube: closed form or adaptive quadrature for
/// power weights, cell-center average for sampled ones.
double cube_mean(const WeightSpec& w, const Cube& cube);
double cube_esssup(const WeightSpec& w, const Cube& cube);
double cube_essinf(const WeightSpec& w, const Cube& cube);

/// Finite, reproducible set of cubes grouped into refinement levels. A
/// characteristic at level k is the maximum over levels 0..k.
struct CubeFamily {
  int dim = 2;
  std::string name;
  std::vector<std::vector<Cube>> levels;

  /// Level d holds the 2^(d n) dyadic subcubes of root at depth d.
  static CubeFamily dyadic_descendants(const Cube& root, int depth);
  /// Level k holds [-2^k, 2^k]^n for k = k_min..k_max.
  static CubeFamily nested_centered(int dim, int k_min, int k_max);
  /// One unit-free cube of the given side per offset.
  static CubeFamily translated(int dim, double side, const std::vector<Point>& lowers);
  /// Unit cubes [g, g+1] x [-1/2, 1/2]^(n-1) with g = ratio^-k, k = 0..count-1,
  /// approaching the origin from one side.
  static CubeFamily origin_approach(int dim, int count = 6, double ratio = 16.0);

  std::size_t cube_count() const;
};

struct ScanRow {
  int family_level = 0;
  std::size_t cube_id = 0;
  double local_value = 0.0;
  double running_max = 0.0;
};

/// Per-cube values and per-level running maxima of a characteristic.
struct CharacteristicScan {
  std::vector<ScanRow> rows;
  std::vector<double> level_max;

  double value() const;
  /// Relative change of the running maximum over the last refinement.
  double last_change() const;
  /// True when last_change() < tolerance.
  bool stable(double tolerance = 0.05) const;
  /// Last running maximum over the first.
  double growth() const;
};

void write_scan_csv(const CharacteristicScan& scan, std::ostream& out);

/// -n < b < n(p - 1); p must exceed 1.
bool ap_power_membership(double b, double p, int n);
/// -n < b <= 0.
bool a1_power_membership(double b, int n);

CharacteristicScan ap_characteristic(const WeightSpec& w, double p, const CubeFamily& family);
CharacteristicScan rh_characteristic(const WeightSpec& w, double s, const CubeFamily& family);

struct BilinearWeight {
  WeightSpec w1 = WeightSpec::constant(1.0);
  WeightSpec w2 = WeightSpec::constant(1.0);
  double p1 = 2.0;
  double p2 = 2.0;
  /// Auxiliary exponents r1, r2, r3 of the localized class.
  std::optional<std::array<double, 3>> r;

  double p() const { return 1.0 / (1.0 / p1 + 1.0 / p2); }
  /// w1^(p/p1) w2^(p/p2).
  WeightSpec composite() const;
};

/// Multilinear class with one composite weight and conjugate-power factors.
CharacteristicScan lerner_characteristic(const BilinearWeight& weights, const CubeFamily& family);
/// Localized class; requires weights.r.
CharacteristicScan lmo_characteristic(const BilinearWeight& weights, const CubeFamily& family);
/// Class of (u1, u2) with target exponents q and source exponents (p1, p2, s),
/// evaluated through the equivalent localized class of (u1^(1/q1), u2^(1/q2)).
CharacteristicScan nieraeth_characteristic(const WeightSpec& u1, const WeightSpec& u2, double q1,
                                           double q2, double p1, double p2, double s,
                                           const CubeFamily& family);

struct DerivedMembership {
  std::string label;
  double exponent = 0.0;   ///< power of |x| tested
  double class_index = 0.0;
  bool member = false;
};

struct WeightRelationReport {
  std::vector<DerivedMembership> derived;
  bool all_derived = false;
  CharacteristicScan scan;
  bool numeric_stable = false;
  bool agree = false;
};

/// Compares the localized-class characteristic on power weights with the
/// three derived classical memberships.
WeightRelationReport weightrelation_check(const BilinearWeight& weights, const LmoParameters& params,
                                          const CubeFamily& family);

enum class RadialFamily { closed_lower, open_lower };

/// closed_lower: 1-n <= b < (n-1)(p-1), n >= 2, p > 1.
/// open_lower: 1-n < b < (n-1)(p-1) - 1, n >= 3, p > n/(n-1).
bool radial_family_membership(double b, double p, int n, RadialFamily family);

} // namespace bisph
