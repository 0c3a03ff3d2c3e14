// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <optional>
#include <utility>
#include <string>
#include <vector>

#include "bisph/dyadic.hpp"
#include "bisph/exponents.hpp"
#include "bisph/grid.hpp"
#include "bisph/numeric.hpp"
#include "bisph/spherical.hpp"

namespace bisph {

enum class KnappCase {
  lac_annulus_ball,
  lac_ball_annulus,
  lac_mixed_1,
  lac_mixed_2,
  full_knapp_boxes,
  full_knapp_one_box,
};

const char* to_string(KnappCase c) noexcept;
KnappCase parse_knapp_case(const std::string& text);
bool is_full_case(KnappCase c) noexcept;

struct KnappOptions {
  /// Grid cells per unit of delta when the grid follows delta. The spacing is
  /// the largest power of two not above delta / cells_per_delta.
  int cells_per_delta = 4;
  /// Fixed cells per axis instead of a delta-dependent grid.
  std::optional<int> fixed_cells;
  double c = 0.25;   ///< width constant of the small feature
  double C = 1.0;    ///< width constant of the thin box
  int nodes = 0;     ///< quadrature resolution; 0 picks one from delta
  int steps_per_octave = 0; ///< radius density for the full cases; 0 picks one
};

struct ScalingPoint {
  double delta = 0.0;
  double pairing = 0.0;
  double sparse_form = 0.0;
  double ratio = 0.0;
  int cells = 0;
  double spacing = 0.0;
};

struct ScalingRun {
  KnappCase which = KnappCase::lac_annulus_ball;
  int n = 2;
  ExponentConfig exponents;
  std::vector<ScalingPoint> points;
  LinearFit pairing_fit;
  LinearFit sparse_fit;
  /// Slopes predicted by the scaling of the three indicators.
  double expected_pairing_slope = 0.0;
  double expected_sparse_slope = 0.0;
};

/// Pairing exponent of a Knapp case in dimension n.
double knapp_pairing_slope(KnappCase c, int n);
/// Exponent of the single-cube sparse bound.
double knapp_sparse_slope(KnappCase c, int n, const ExponentConfig& exponents);

/// For each delta: pairing of the maximal operator with h, and the single-cube
/// bound |Q| <f1>_{Q,r1} <f2>_{Q,r2} <h>_{Q,t} on the grid box. Deltas must be
/// strictly decreasing, at least four. Throws Resolution when a delta spans
/// fewer than 8 cells across its feature.
ScalingRun knapp_run(KnappCase c, int n, const std::vector<double>& deltas,
                     const ExponentConfig& exponents, const KnappOptions& options = {});

/// Pairing slope not below the sparse slope minus 0.1.
bool slope_consistency(const ScalingRun& run);

struct DominationRatio {
  double pairing = 0.0;
  double form = 0.0;
  double ratio = 0.0;
  bool anomaly = false; ///< zero form with a nonzero pairing
  std::size_t cubes = 0;
};

/// Pairing of the maximal operator with h against the constructed sparse form
/// at exponents rho_i with 1/rho_i = 1/r_i - 0.01.
DominationRatio sparse_domination_ratio(const GridFunction& f1, const GridFunction& f2,
                                        const GridFunction& h, const ExponentConfig& exponents,
                                        const DyadicLattice& lattice,
                                        OperatorKind kind = OperatorKind::lacunary,
                                        int nodes = 512);

struct RadialOptions {
  OperatorKind kind = OperatorKind::lacunary;
  int cells = 256;
  int nodes = 512;
  double phase = 0.5;
  int steps_per_octave = 8;
  /// Unit-scale input, dilated by each scale.
  TestFunctionSpec profile = TestFunctionSpec::annulus(0.125, 1.0);
};

struct RadialPoint {
  double scale = 0.0;
  double output_norm = 0.0;
  double input_norm1 = 0.0;
  double input_norm2 = 0.0;
  double ratio = 0.0;
};

struct RadialRun {
  int n = 2;
  double alpha = 0.0, beta = 0.0;
  OperatorKind kind = OperatorKind::lacunary;
  bool in_range = false;
  std::vector<RadialPoint> points;
  LinearFit trend;
};

/// True when (alpha, beta) lies in the admissible range for the operator.
bool radial_admissible(OperatorKind kind, int n, double alpha, double beta);

/// Ratio |M(f, f)|_{L1(|x|^((a+b)/2))} / (|f|_{L2(|x|^a)} |f|_{L2(|x|^b)}) on
/// dilations of the profile; each scale uses the box [-4s, 4s]^n.
RadialRun radial_run(int n, double alpha, double beta, const std::vector<double>& scales,
                     const RadialOptions& options = {});

/// Moves a unit-scale function spec to scale s.
TestFunctionSpec dilate(const TestFunctionSpec& spec, double s);

struct ProbeOptions {
  /// Cells per axis; empty means 128, 256, 512 for n = 2 and 32, 64, 128 for n = 3.
  std::vector<int> cells;
  /// Use the bounded control input instead of the log-type singularity.
  bool control = false;
  /// Zero the second input.
  bool zero_second = false;
  int steps_per_octave = 16;
};

struct ProbeRun {
  std::vector<int> cells;
  std::vector<double> values;
  /// Product of the two averages on the circle through the origin, max over probes.
  std::vector<double> through_origin;
  bool strictly_increasing = false;
  double growth = 0.0;          ///< last over first
  double last_change = 0.0;     ///< relative change over the last refinement
};

/// Full bilinear maximal function of a log-type singular input and a unit
/// ball at points with |x| = 1/2, on successively finer grids over [-1, 1]^n.
ProbeRun unboundedness_probe(int n, const ProbeOptions& options = {});

struct PointwiseScan {
  int cells = 0;
  double max_ratio = 0.0;
};

/// Maximum over the corpus of the S^3 bilinear operator divided by
/// M_full(f1) M(f2), with M the dyadic maximal function. Grid [-4, 4]^2,
/// radii up to 2, ratios over the central cube [-2, 2]^2.
PointwiseScan jeole_ratio_scan(const std::vector<std::pair<TestFunctionSpec, TestFunctionSpec>>& corpus,
                               int cells = 64, int resolution = 24);

struct ComparisonReport {
  int n = 2;
  double delta = 0.0, epsilon = 0.0;
  Interval theorem_range;
  std::vector<double> alphas;
  std::vector<Interval> product_ranges;
  Interval product_hull;
  bool product_union_connected = true;
  Interval difference;
  CaseTwoBounds lacunary_case_two;
  CaseTwoBounds full_case_two;
  Interval family_range;
  /// Theorem values below the family range.
  Interval theorem_below_family;
};

ComparisonReport comparison_report(int n, double delta, double epsilon,
                                   const std::vector<double>& alphas);

/// Columns: parameter, pairing, sparse_form, ratio.
void write_scaling_csv(const ScalingRun& run, std::ostream& out);
void write_radial_csv(const RadialRun& run, std::ostream& out);

/// JSON summaries with slopes, residuals and pass flags.
std::string scaling_json(const ScalingRun& run);
std::string radial_json(const RadialRun& run);
std::string probe_json(const ProbeRun& run);
std::string comparison_json(const ComparisonReport& report);

} // namespace bisph
