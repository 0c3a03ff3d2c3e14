// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bisph/numeric.hpp"

namespace bisph {

enum class RegionKind { lacunary, full };

const char* to_string(RegionKind kind) noexcept;
RegionKind parse_region_kind(const std::string& text);

/// A point (1/r, 1/s) of the exponent square.
struct ExponentPoint {
  double inv_r = 0.0;
  double inv_s = 0.0;
};

struct RegionPolygon {
  RegionKind kind = RegionKind::lacunary;
  int n = 2;
  std::vector<ExponentPoint> vertices;
  std::vector<Rational> exact; ///< x0, y0, x1, y1, ... as exact fractions

  /// True when two listed vertices coincide.
  bool degenerate() const;
};

/// Triangle for the lacunary case, trapezium for the full case. n >= 2.
RegionPolygon region_polygon(RegionKind kind, int n);

/// Strict interior test with a 1e-12 slack on every edge.
bool is_interior(ExponentPoint point, const RegionPolygon& polygon);

/// Reciprocal of the boundary function: returns 1/s on the lower edge for a
/// given 1/r.
double phi(RegionKind kind, int n, double inv_r);

/// Individual linear pieces of phi, exposed for continuity checks.
namespace phi_branch {
double lacunary_left(int n, double inv_r);
double lacunary_right(int n, double inv_r);
double full_left(int n, double inv_r);
double full_right(int n, double inv_r);
double lacunary_breakpoint(int n);
double full_breakpoint(int n);
} // namespace phi_branch

/// t with 1/t = 1/s1 + 1/s2 - 1. Throws UndefinedExponent if 1/s1 + 1/s2 <= 1.
double holder_t(double s1, double s2);

struct ExponentConfig {
  int n = 2;
  double r1 = 2.0, s1 = 2.0, r2 = 2.0, s2 = 2.0;
  std::optional<double> q1, q2;

  static ExponentConfig from_points(int n, ExponentPoint first, ExponentPoint second);

  ExponentPoint point1() const { return {1.0 / r1, 1.0 / s1}; }
  ExponentPoint point2() const { return {1.0 / r2, 1.0 / s2}; }
  /// Empty when 1/s1 + 1/s2 <= 1.
  std::optional<double> inv_t() const;
  /// Throws UndefinedExponent when t is undefined.
  double t() const;
  std::optional<double> q() const;
};

struct NecessaryCondition {
  std::string name;
  double lhs = 0.0;
  double bound = 0.0;
  bool strict = false;
  bool holds = false;
};

struct NecessaryReport {
  RegionKind kind = RegionKind::lacunary;
  std::vector<NecessaryCondition> conditions;

  bool all_hold() const;
  const NecessaryCondition& find(const std::string& name) const;
};

NecessaryReport necessary_report(RegionKind kind, const ExponentConfig& config);

/// Exponent bundle for the bilinear weight class with three auxiliary
/// exponents. Reciprocals are stored; zero reciprocals mean unbounded.
struct LmoParameters {
  double inv_p1 = 0.0, inv_p2 = 0.0, inv_p = 0.0, inv_p3 = 0.0;
  std::array<double, 3> inv_r{};
  double inv_r_total = 0.0;
  std::array<double, 3> inv_delta{};
  std::array<double, 3> inv_theta{};

  ExtendedReal p() const { return ExtendedReal::from_reciprocal(inv_p); }
  ExtendedReal p3() const { return ExtendedReal::from_reciprocal(inv_p3); }
  ExtendedReal r() const { return ExtendedReal::from_reciprocal(inv_r_total); }
  ExtendedReal delta(int i) const { return ExtendedReal::from_reciprocal(inv_delta.at(i)); }
  ExtendedReal theta(int i) const { return ExtendedReal::from_reciprocal(inv_theta.at(i)); }
  /// The factor (1 - r)/r = 1/r - 1.
  double class_scale() const { return inv_r_total - 1.0; }
};

/// Throws ExponentOrder unless 1 <= r_i <= p_i, r3 >= 1 and r3' > p > 1.
LmoParameters lmo_params(double p1, double p2, double r1, double r2, double r3);

double theta_reciprocal(const LmoParameters& params, int i);

struct StepTwoExponents {
  double inv_t = 0.0;
  double inv_r = 0.0;
  double inv_theta1 = 0.0;
};

/// Closed forms for p_i = 2 + 2e, r_i = 2 + e, r3 = t on the lower lacunary edge.
StepTwoExponents step2_exponents(int n, double epsilon);
/// Same quantities routed through phi, holder_t and lmo_params.
StepTwoExponents step2_exponents_via_lmo(int n, double epsilon);

/// Growth exponent of the weighted bound. Throws Boundary at q_i = r_i or
/// q = t'; t_prime may be unbounded.
double sharpness_exponent(double r1, double r2, ExtendedReal t_prime, double q1, double q2);

struct RadialComparisonRanges {
  Interval theorem_range;
  Interval product_range;
  Interval in_theorem_only;
};

/// Power-weight exponent ranges for a radial pair compared with Hoelder
/// products of classical weights.
RadialComparisonRanges radial_comparison_ranges(int n, double delta, double epsilon, double alpha);

/// Bounds on alpha for the second branch of the comparison; infeasible when
/// the lower bound is not below the upper bound.
struct CaseTwoBounds {
  double alpha_low = 0.0;
  double alpha_high = 0.0;
  bool feasible() const { return alpha_low < alpha_high; }
};

CaseTwoBounds case_two_bounds(RegionKind kind, int n, double delta);

/// Power exponents admitted by the radial families at p = n + delta:
/// closed-lower family for the lacunary case, open family for the full case.
Interval radial_family_range(RegionKind kind, int n, double delta);

} // namespace bisph
