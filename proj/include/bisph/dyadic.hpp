// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "bisph/grid.hpp"

namespace bisph {

/// Cube of side 2^level whose lower corner sits at origin + corner * 2^level.
struct DyadicCube {
  int level = 0;
  Index corner{};
  int dim = 1;

  double side() const;
  double measure() const;
  DyadicCube parent() const;
  /// 2^dim children, axis 0 most significant, so the order is lexicographic.
  std::vector<DyadicCube> children() const;
  /// True when other is this cube or one of its descendants.
  bool contains(const DyadicCube& other) const;
  Cube to_cube(const Point& origin) const;

  auto operator<=>(const DyadicCube&) const = default;
};

struct DyadicLattice {
  int dim = 1;
  Point origin{};
  DyadicCube root;
  int max_depth = 0;

  /// Lattice rooted at the grid box. The box side and the cell count must be
  /// powers of two. A negative depth selects the finest admissible depth,
  /// where the smallest cube still holds 2^dim grid cells.
  static DyadicLattice for_grid(const GridGeometry& geometry, int max_depth = -1);

  int finest_level() const { return root.level - max_depth; }
  /// Lattice with the same origin and finest level, rooted at a subcube.
  DyadicLattice rooted_at(const DyadicCube& cube) const;
  /// All 2^(depth * dim) cubes at the given depth, in lexicographic order.
  std::vector<DyadicCube> cubes_at_depth(int depth) const;
  /// Number of finest-level cubes inside a cube of this lattice.
  std::uint64_t finest_units(const DyadicCube& cube) const;
};

/// (|Q|^{-1} integral_Q |f|^p)^{1/p} by summation over the cells of Q.
double local_average(const GridFunction& f, const DyadicCube& cube, const Point& origin, double p);

/// Sums of |f|^p over every lattice cube, from the root down to the finest
/// depth. Sums follow the same child order as local_average, so both agree
/// bit for bit.
class PowerPyramid {
public:
  PowerPyramid(const GridFunction& f, const DyadicLattice& lattice, double p);

  double exponent() const { return p_; }
  double sum(const DyadicCube& cube) const;
  /// Mean of |f|^p over the cube.
  double mean_power(const DyadicCube& cube) const;
  /// The local p-average.
  double average(const DyadicCube& cube) const;

private:
  std::size_t slot(const DyadicCube& cube) const;

  DyadicLattice lattice_;
  int cell_level_ = 0;
  double p_ = 1.0;
  std::vector<std::vector<double>> levels_;
};

struct StoppingConfig {
  double c0 = 2.0;
  double r1 = 1.0;
  double r2 = 1.0;
  double t = 1.0;
};

/// Maximal proper subcubes of the lattice root on which one of the three
/// local averages exceeds c0 times its root value. Depth-first, lexicographic.
std::vector<DyadicCube> stopping_cubes(const GridFunction& f1, const GridFunction& f2,
                                       const GridFunction& h, const DyadicLattice& lattice,
                                       const StoppingConfig& config);

/// Smallest c0 on 1 + 2^-6 * 2^j whose stopping cubes cover less than half of
/// the root.
double choose_c0(const GridFunction& f1, const GridFunction& f2, const GridFunction& h,
                 const DyadicLattice& lattice, double r1, double r2, double t);

struct SparseFamily {
  int dim = 1;
  Point origin{};
  int finest_level = 0;
  std::vector<DyadicCube> cubes;
  /// witnesses[i] is a union of dyadic cubes inside cubes[i].
  std::vector<std::vector<DyadicCube>> witnesses;
  double eta = 0.5;

  std::uint64_t units(const DyadicCube& cube) const;
  std::uint64_t witness_units(std::size_t i) const;
};

/// Recursive stopping-time family. Every recursion level picks its own c0.
SparseFamily build_sparse_family(const GridFunction& f1, const GridFunction& f2,
                                 const GridFunction& h, const DyadicLattice& lattice,
                                 double r1, double r2, double t);

/// Exact check: witnesses inside their cubes, pairwise disjoint and with
/// |E_S| >= eta |S|.
bool verify_sparsity(const SparseFamily& family, double eta);

/// Sum over the family of |S| <f1>_{S,r1} <f2>_{S,r2} <h>_{S,t}.
double sparse_form(const SparseFamily& family, const GridFunction& f1, const GridFunction& f2,
                   const GridFunction& h, double r1, double r2, double t);

struct CzDecomposition {
  GridFunction good;
  std::map<int, GridFunction> bad_levels;
  std::vector<DyadicCube> stopping;
  double threshold = 0.0;
};

/// Splits f >= 0 at height 2 c0 <f>_{Q0,r}; bad parts are grouped by cube level.
CzDecomposition cz_decompose(const GridFunction& f, const DyadicLattice& lattice, double r,
                             double c0);

/// Columns: level, corner per axis, witness_measure, cube_measure.
void write_family_csv(const SparseFamily& family, std::ostream& out);

} // namespace bisph
