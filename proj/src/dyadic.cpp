// SPDX-License-Identifier: Apache-2.0
#include "bisph/dyadic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <set>

#include "bisph/error.hpp"
#include "bisph/numeric.hpp"
#include "dyadic_internal.hpp"
#include "parallel.hpp"

namespace bisph {

namespace detail {

int exact_log2(double x, const char* what) {
  int e = std::ilogb(x);
  if (!(x > 0.0) || std::ldexp(1.0, e) != x)
    fail(ErrorKind::Shape, std::string(what) + " must be a power of two");
  return e;
}

CellFrame cell_frame(const GridGeometry& g, const Point& origin) {
  CellFrame fr;
  fr.cell_level = exact_log2(g.spacing(), "grid spacing");
  for (int a = 0; a < g.dim; ++a) {
    double u = (origin[a] - g.lower[a]) / g.spacing();
    if (u != std::floor(u)) fail(ErrorKind::Shape, "lattice origin is not on a cell boundary");
    fr.offset[a] = static_cast<int>(u);
  }
  return fr;
}

double block_power_sum(const GridFunction& f, const Index& start, int span, double p) {
  if (span == 1) return powp(std::abs(f[f.ravel(start)]), p);
  const int half = span / 2;
  const int n = f.dim();
  double s = 0.0;
  for (int mask = 0; mask < (1 << n); ++mask) {
    Index child = start;
    for (int a = 0; a < n; ++a)
      if ((mask >> (n - 1 - a)) & 1) child[a] += half;
    double part = block_power_sum(f, child, half, p);
    if (mask == 0)
      s = part;
    else
      s += part;
  }
  return s;
}

Index cube_start(const CellFrame& fr, const DyadicCube& cube, int& span) {
  const int shift = cube.level - fr.cell_level;
  if (shift < 0) fail(ErrorKind::Resolution, "dyadic cube is smaller than a grid cell");
  span = 1 << shift;
  Index start{};
  for (int a = 0; a < cube.dim; ++a) start[a] = fr.offset[a] + cube.corner[a] * span;
  return start;
}

void check_inside(const GridFunction& f, const Index& start, int span) {
  for (int a = 0; a < f.dim(); ++a)
    if (start[a] < 0 || start[a] + span > f.cells())
      fail(ErrorKind::Domain, "dyadic cube leaves the grid box");
}

} // namespace detail

using detail::powp;

double DyadicCube::side() const { return std::ldexp(1.0, level); }

double DyadicCube::measure() const { return std::ldexp(1.0, level * dim); }

DyadicCube DyadicCube::parent() const {
  DyadicCube p = *this;
  p.level = level + 1;
  for (int a = 0; a < dim; ++a) p.corner[a] = corner[a] >> 1;
  return p;
}

std::vector<DyadicCube> DyadicCube::children() const {
  std::vector<DyadicCube> out;
  out.reserve(std::size_t{1} << dim);
  for (int mask = 0; mask < (1 << dim); ++mask) {
    DyadicCube c = *this;
    c.level = level - 1;
    for (int a = 0; a < dim; ++a) c.corner[a] = 2 * corner[a] + ((mask >> (dim - 1 - a)) & 1);
    out.push_back(c);
  }
  return out;
}

bool DyadicCube::contains(const DyadicCube& other) const {
  if (other.dim != dim || other.level > level) return false;
  const int shift = level - other.level;
  for (int a = 0; a < dim; ++a)
    if ((other.corner[a] >> shift) != corner[a]) return false;
  return true;
}

Cube DyadicCube::to_cube(const Point& origin) const {
  Cube c;
  c.dim = dim;
  c.side = side();
  for (int a = 0; a < dim; ++a) c.lower[a] = origin[a] + corner[a] * c.side;
  return c;
}

DyadicLattice DyadicLattice::for_grid(const GridGeometry& geometry, int max_depth) {
  const int root_level = detail::exact_log2(geometry.side, "grid box side");
  const int depth_cells = detail::exact_log2(static_cast<double>(geometry.cells), "cells per axis");
  const int cap = depth_cells - 1;
  if (max_depth < 0) max_depth = std::max(cap, 0);
  if (max_depth > cap)
    fail(ErrorKind::Resolution, "lattice depth " + std::to_string(max_depth) +
                                    " leaves fewer than two grid cells per axis in the smallest cube");
  DyadicLattice lat;
  lat.dim = geometry.dim;
  lat.origin = geometry.lower;
  lat.root.dim = geometry.dim;
  lat.root.level = root_level;
  lat.max_depth = max_depth;
  return lat;
}

DyadicLattice DyadicLattice::rooted_at(const DyadicCube& cube) const {
  if (!root.contains(cube)) fail(ErrorKind::Domain, "subcube is outside the lattice root");
  DyadicLattice lat = *this;
  lat.root = cube;
  lat.max_depth = cube.level - finest_level();
  return lat;
}

std::vector<DyadicCube> DyadicLattice::cubes_at_depth(int depth) const {
  if (depth < 0 || depth > max_depth) fail(ErrorKind::Domain, "depth outside the lattice");
  std::vector<DyadicCube> level{root};
  for (int d = 0; d < depth; ++d) {
    std::vector<DyadicCube> next;
    next.reserve(level.size() << dim);
    for (const auto& c : level)
      for (const auto& k : c.children()) next.push_back(k);
    level = std::move(next);
  }
  std::sort(level.begin(), level.end(), [](const DyadicCube& a, const DyadicCube& b) {
    return a.corner < b.corner;
  });
  return level;
}

std::uint64_t DyadicLattice::finest_units(const DyadicCube& cube) const {
  return std::uint64_t{1} << ((cube.level - finest_level()) * dim);
}

double local_average(const GridFunction& f, const DyadicCube& cube, const Point& origin, double p) {
  if (!(p >= 1.0)) fail(ErrorKind::Domain, "local average exponent must be at least 1");
  if (cube.dim != f.dim()) fail(ErrorKind::Shape, "cube and grid dimensions differ");
  auto fr = detail::cell_frame(f.geometry(), origin);
  int span = 0;
  Index start = detail::cube_start(fr, cube, span);
  if (span < 2) fail(ErrorKind::Resolution, "local averages need at least two cells per axis");
  detail::check_inside(f, start, span);
  double count = std::ldexp(1.0, (cube.level - fr.cell_level) * f.dim());
  double mean = detail::block_power_sum(f, start, span, p) / count;
  return p == 1.0 ? mean : p == 2.0 ? std::sqrt(mean) : std::pow(mean, 1.0 / p);
}

PowerPyramid::PowerPyramid(const GridFunction& f, const DyadicLattice& lattice, double p)
    : lattice_(lattice), p_(p) {
  if (!(p >= 1.0)) fail(ErrorKind::Domain, "pyramid exponent must be at least 1");
  if (lattice.dim != f.dim()) fail(ErrorKind::Shape, "lattice and grid dimensions differ");
  auto fr = detail::cell_frame(f.geometry(), lattice.origin);
  cell_level_ = fr.cell_level;
  int root_span = 0;
  Index root_start = detail::cube_start(fr, lattice.root, root_span);
  detail::check_inside(f, root_start, root_span);
  if (lattice.finest_level() <= cell_level_)
    fail(ErrorKind::Resolution, "lattice finer than the grid allows");

  const int n = lattice.dim;
  const int depth = lattice.max_depth;
  levels_.resize(static_cast<std::size_t>(depth) + 1);
  {
    const int side_count = 1 << depth;
    const std::size_t count = std::size_t{1} << (depth * n);
    auto& finest = levels_[static_cast<std::size_t>(depth)];
    finest.assign(count, 0.0);
    const int span = root_span >> depth;
    detail::parallel_for(static_cast<std::ptrdiff_t>(count), [&](std::ptrdiff_t i) {
      Index start = root_start;
      std::size_t rest = static_cast<std::size_t>(i);
      for (int a = n - 1; a >= 0; --a) {
        start[a] += static_cast<int>(rest % side_count) * span;
        rest /= side_count;
      }
      finest[static_cast<std::size_t>(i)] = detail::block_power_sum(f, start, span, p);
    });
  }
  for (int d = depth - 1; d >= 0; --d) {
    const int side_count = 1 << d;
    const std::size_t count = std::size_t{1} << (d * n);
    const auto& below = levels_[static_cast<std::size_t>(d) + 1];
    auto& here = levels_[static_cast<std::size_t>(d)];
    here.assign(count, 0.0);
    detail::parallel_for(static_cast<std::ptrdiff_t>(count), [&](std::ptrdiff_t i) {
      Index idx{};
      std::size_t rest = static_cast<std::size_t>(i);
      for (int a = n - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(rest % side_count);
        rest /= side_count;
      }
      double s = 0.0;
      for (int mask = 0; mask < (1 << n); ++mask) {
        std::size_t child = 0;
        for (int a = 0; a < n; ++a)
          child = child * (static_cast<std::size_t>(side_count) * 2) +
                  static_cast<std::size_t>(2 * idx[a] + ((mask >> (n - 1 - a)) & 1));
        if (mask == 0)
          s = below[child];
        else
          s += below[child];
      }
      here[static_cast<std::size_t>(i)] = s;
    });
  }
}

std::size_t PowerPyramid::slot(const DyadicCube& cube) const {
  const int d = lattice_.root.level - cube.level;
  if (d < 0 || d > lattice_.max_depth || !lattice_.root.contains(cube))
    fail(ErrorKind::Domain, "cube outside the pyramid");
  const std::size_t side_count = std::size_t{1} << d;
  std::size_t flat = 0;
  for (int a = 0; a < lattice_.dim; ++a)
    flat = flat * side_count +
           static_cast<std::size_t>(cube.corner[a] - (lattice_.root.corner[a] << d));
  return flat;
}

double PowerPyramid::sum(const DyadicCube& cube) const {
  const int d = lattice_.root.level - cube.level;
  return levels_.at(static_cast<std::size_t>(std::max(d, 0)))[slot(cube)];
}

double PowerPyramid::mean_power(const DyadicCube& cube) const {
  return sum(cube) / std::ldexp(1.0, (cube.level - cell_level_) * lattice_.dim);
}

double PowerPyramid::average(const DyadicCube& cube) const {
  double m = mean_power(cube);
  return p_ == 1.0 ? m : p_ == 2.0 ? std::sqrt(m) : std::pow(m, 1.0 / p_);
}

namespace detail {

std::vector<DyadicCube> select_cubes(const std::vector<const PowerPyramid*>& pyramids,
                                     const std::vector<double>& factors,
                                     const DyadicLattice& lattice) {
  const std::size_t k = pyramids.size();
  std::vector<double> threshold(k);
  for (std::size_t j = 0; j < k; ++j)
    threshold[j] = factors[j] * pyramids[j]->mean_power(lattice.root);
  std::vector<DyadicCube> out;
  auto visit = [&](auto&& self, const DyadicCube& q, int depth) -> void {
    for (std::size_t j = 0; j < k; ++j) {
      if (pyramids[j]->mean_power(q) > threshold[j]) {
        out.push_back(q);
        return;
      }
    }
    if (depth < lattice.max_depth)
      for (const auto& c : q.children()) self(self, c, depth + 1);
  };
  if (lattice.max_depth > 0)
    for (const auto& c : lattice.root.children()) visit(visit, c, 1);
  return out;
}

} // namespace detail

namespace {

struct TriplePyramid {
  PowerPyramid f1, f2, h;

  std::vector<DyadicCube> select(const DyadicLattice& lattice, double c0) const {
    return detail::select_cubes({&f1, &f2, &h},
                                {std::pow(c0, f1.exponent()), std::pow(c0, f2.exponent()),
                                 std::pow(c0, h.exponent())},
                                lattice);
  }
};

constexpr int kC0Candidates = 64;

double c0_candidate(int j) { return 1.0 + std::ldexp(1.0, j - 6); }

std::uint64_t covered_units(const DyadicLattice& lattice, const std::vector<DyadicCube>& cubes) {
  std::uint64_t u = 0;
  for (const auto& c : cubes) u += lattice.finest_units(c);
  return u;
}

double choose_c0_with(const TriplePyramid& pyr, const DyadicLattice& lattice,
                      std::vector<DyadicCube>& selected) {
  const std::uint64_t root_units = lattice.finest_units(lattice.root);
  for (int j = 0; j < kC0Candidates; ++j) {
    double c0 = c0_candidate(j);
    selected = pyr.select(lattice, c0);
    if (2 * covered_units(lattice, selected) < root_units) return c0;
  }
  fail(ErrorKind::Domain, "no stopping constant halves the root cube");
}

void check_same_grid(const GridFunction& f1, const GridFunction& f2, const GridFunction& h) {
  if (!(f1.geometry() == f2.geometry()) || !(f1.geometry() == h.geometry()))
    fail(ErrorKind::Shape, "the three functions must share one grid");
}

std::vector<DyadicCube> witness_cubes(const DyadicCube& root, const std::vector<DyadicCube>& removed) {
  std::set<DyadicCube> gone(removed.begin(), removed.end());
  std::set<DyadicCube> ancestors;
  for (const auto& c : removed) {
    DyadicCube a = c;
    while (a.level < root.level) {
      a = a.parent();
      ancestors.insert(a);
    }
  }
  std::vector<DyadicCube> out;
  auto collect = [&](auto&& self, const DyadicCube& q) -> void {
    if (gone.count(q)) return;
    if (!ancestors.count(q)) {
      out.push_back(q);
      return;
    }
    for (const auto& c : q.children()) self(self, c);
  };
  collect(collect, root);
  return out;
}

} // namespace

std::vector<DyadicCube> stopping_cubes(const GridFunction& f1, const GridFunction& f2,
                                       const GridFunction& h, const DyadicLattice& lattice,
                                       const StoppingConfig& config) {
  if (!(config.c0 > 1.0)) fail(ErrorKind::Domain, "stopping constant must exceed 1");
  check_same_grid(f1, f2, h);
  TriplePyramid pyr{PowerPyramid(f1, lattice, config.r1), PowerPyramid(f2, lattice, config.r2),
                    PowerPyramid(h, lattice, config.t)};
  return pyr.select(lattice, config.c0);
}

double choose_c0(const GridFunction& f1, const GridFunction& f2, const GridFunction& h,
                 const DyadicLattice& lattice, double r1, double r2, double t) {
  check_same_grid(f1, f2, h);
  TriplePyramid pyr{PowerPyramid(f1, lattice, r1), PowerPyramid(f2, lattice, r2),
                    PowerPyramid(h, lattice, t)};
  std::vector<DyadicCube> selected;
  return choose_c0_with(pyr, lattice, selected);
}

std::uint64_t SparseFamily::units(const DyadicCube& cube) const {
  return std::uint64_t{1} << ((cube.level - finest_level) * dim);
}

std::uint64_t SparseFamily::witness_units(std::size_t i) const {
  std::uint64_t u = 0;
  for (const auto& c : witnesses.at(i)) u += units(c);
  return u;
}

SparseFamily build_sparse_family(const GridFunction& f1, const GridFunction& f2,
                                 const GridFunction& h, const DyadicLattice& lattice,
                                 double r1, double r2, double t) {
  check_same_grid(f1, f2, h);
  TriplePyramid pyr{PowerPyramid(f1, lattice, r1), PowerPyramid(f2, lattice, r2),
                    PowerPyramid(h, lattice, t)};
  SparseFamily fam;
  fam.dim = lattice.dim;
  fam.origin = lattice.origin;
  fam.finest_level = lattice.finest_level();
  fam.eta = 0.5;
  auto grow = [&](auto&& self, const DyadicLattice& sub) -> void {
    std::vector<DyadicCube> selected;
    choose_c0_with(pyr, sub, selected);
    fam.cubes.push_back(sub.root);
    fam.witnesses.push_back(witness_cubes(sub.root, selected));
    for (const auto& p : selected) self(self, sub.rooted_at(p));
  };
  grow(grow, lattice);
  return fam;
}

bool verify_sparsity(const SparseFamily& family, double eta) {
  if (family.witnesses.size() != family.cubes.size()) return false;
  std::set<DyadicCube> all;
  int top = family.finest_level;
  for (std::size_t i = 0; i < family.cubes.size(); ++i) {
    const auto& s = family.cubes[i];
    for (const auto& w : family.witnesses[i]) {
      if (!s.contains(w) || w.level < family.finest_level) return false;
      if (!all.insert(w).second) return false;
      top = std::max(top, w.level);
    }
    if (static_cast<double>(family.witness_units(i)) < eta * static_cast<double>(family.units(s)))
      return false;
  }
  for (const auto& w : all) {
    DyadicCube a = w;
    while (a.level < top) {
      a = a.parent();
      if (all.count(a)) return false;
    }
  }
  return true;
}

double sparse_form(const SparseFamily& family, const GridFunction& f1, const GridFunction& f2,
                   const GridFunction& h, double r1, double r2, double t) {
  check_same_grid(f1, f2, h);
  std::vector<double> terms(family.cubes.size());
  detail::parallel_for(static_cast<std::ptrdiff_t>(terms.size()), [&](std::ptrdiff_t i) {
    const auto& s = family.cubes[static_cast<std::size_t>(i)];
    double a = local_average(f1, s, family.origin, r1);
    double b = a == 0.0 ? 0.0 : local_average(f2, s, family.origin, r2);
    double c = b == 0.0 ? 0.0 : local_average(h, s, family.origin, t);
    terms[static_cast<std::size_t>(i)] = s.measure() * a * b * c;
  });
  return pairwise_sum(terms);
}

CzDecomposition cz_decompose(const GridFunction& f, const DyadicLattice& lattice, double r,
                             double c0) {
  for (double v : f.values())
    if (v < 0.0) fail(ErrorKind::Domain, "decomposition needs a nonnegative function");
  if (!(c0 >= 1.0)) fail(ErrorKind::Domain, "decomposition constant must be at least 1");
  PowerPyramid power(f, lattice, r);
  PowerPyramid mean(f, lattice, 1.0);
  CzDecomposition out;
  out.threshold = 2.0 * c0 * power.average(lattice.root);
  out.stopping = detail::select_cubes({&power}, {std::pow(2.0 * c0, r)}, lattice);
  out.good = f;
  auto fr = detail::cell_frame(f.geometry(), lattice.origin);
  for (const auto& p : out.stopping) {
    auto it = out.bad_levels.find(p.level);
    if (it == out.bad_levels.end()) it = out.bad_levels.emplace(p.level, GridFunction(f.geometry())).first;
    GridFunction& bad = it->second;
    const double m = mean.mean_power(p);
    int span = 0;
    Index start = detail::cube_start(fr, p, span);
    detail::for_each_cell(f.dim(), start, span, [&](const Index& idx) {
      std::size_t i = f.ravel(idx);
      bad[i] = f[i] - m;
      out.good[i] = m;
    });
  }
  return out;
}

void write_family_csv(const SparseFamily& family, std::ostream& out) {
  static const char* names[] = {"corner_x", "corner_y", "corner_z"};
  out << "level";
  for (int a = 0; a < family.dim; ++a) out << ',' << names[a];
  out << ",witness_measure,cube_measure\n";
  const double unit = std::ldexp(1.0, family.finest_level * family.dim);
  for (std::size_t i = 0; i < family.cubes.size(); ++i) {
    const auto& c = family.cubes[i];
    out << c.level;
    for (int a = 0; a < family.dim; ++a) out << ',' << c.corner[a];
    out << ',' << format_real(static_cast<double>(family.witness_units(i)) * unit) << ','
        << format_real(c.measure()) << '\n';
  }
}

} // namespace bisph
