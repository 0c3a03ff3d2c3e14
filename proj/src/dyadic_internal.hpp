// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <vector>

#include "bisph/dyadic.hpp"

namespace bisph::detail {

inline double powp(double x, double p) {
  return p == 1.0 ? x : p == 2.0 ? x * x : std::pow(x, p);
}

int exact_log2(double x, const char* what);

/// Grid cells measured from a lattice origin.
struct CellFrame {
  int cell_level = 0;
  Index offset{};
};

CellFrame cell_frame(const GridGeometry& g, const Point& origin);
double block_power_sum(const GridFunction& f, const Index& start, int span, double p);
Index cube_start(const CellFrame& fr, const DyadicCube& cube, int& span);
void check_inside(const GridFunction& f, const Index& start, int span);

template <class Fn>
void for_each_cell(int dim, const Index& start, int span, Fn&& fn) {
  Index idx = start;
  if (dim == 1) {
    for (int i = 0; i < span; ++i) fn(Index{start[0] + i, 0, 0});
    return;
  }
  for (int i = 0; i < span; ++i) {
    idx[0] = start[0] + i;
    for (int j = 0; j < span; ++j) {
      idx[1] = start[1] + j;
      if (dim == 2) {
        fn(idx);
        continue;
      }
      for (int k = 0; k < span; ++k) {
        idx[2] = start[2] + k;
        fn(idx);
      }
    }
  }
}

/// Maximal proper subcubes where some pyramid's mean power exceeds factor
/// times its root mean power.
std::vector<DyadicCube> select_cubes(const std::vector<const PowerPyramid*>& pyramids,
                                     const std::vector<double>& factors,
                                     const DyadicLattice& lattice);

} // namespace bisph::detail
