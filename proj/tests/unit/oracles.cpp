// SPDX-License-Identifier: Apache-2.0
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oracle {

using bisph::DyadicCube;
using i128 = __int128;

double arc_fraction(double d, double r, double rho) {
  double c = (d * d + r * r - rho * rho) / (2.0 * d * r);
  c = std::clamp(c, -1.0, 1.0);
  return std::acos(c) / std::numbers::pi;
}

double cap_fraction(double d, double r, double rho) {
  double c = (rho * rho - d * d - r * r) / (2.0 * d * r);
  c = std::clamp(c, -1.0, 1.0);
  return (1.0 + c) / 2.0;
}

namespace {

void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(m), 0.0);
  w.assign(static_cast<std::size_t>(m), 0.0);
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= m; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = m * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[static_cast<std::size_t>(i)] = z;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

} // namespace

double power_mean_quadrature(int dim, const double* lo, const double* hi, double b, int panels) {
  std::vector<double> gx, gw;
  gauss_legendre(8, gx, gw);
  std::vector<std::vector<double>> nodes(static_cast<std::size_t>(dim)), weights(nodes.size());
  for (int a = 0; a < dim; ++a) {
    double h = (hi[a] - lo[a]) / panels;
    for (int p = 0; p < panels; ++p)
      for (std::size_t k = 0; k < gx.size(); ++k) {
        nodes[a].push_back(lo[a] + h * (p + 0.5 * (gx[k] + 1.0)));
        weights[a].push_back(0.5 * gw[k] / panels);
      }
  }
  double sum = 0.0;
  const std::size_t m = nodes[0].size();
  if (dim == 1) {
    for (std::size_t i = 0; i < m; ++i) sum += weights[0][i] * std::pow(std::abs(nodes[0][i]), b);
  } else if (dim == 2) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        sum += weights[0][i] * weights[1][j] *
               std::pow(std::hypot(nodes[0][i], nodes[1][j]), b);
  } else {
    throw std::invalid_argument("quadrature oracle supports one or two dimensions");
  }
  return sum;
}

std::int64_t StepFunction::at(const std::vector<int>& idx) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim; ++a) flat = (flat << depth) + static_cast<std::size_t>(idx[a]);
  return values[flat];
}

bisph::GridFunction StepFunction::to_grid() const {
  bisph::GridGeometry g;
  g.dim = dim;
  g.lower = {};
  g.side = 1.0;
  g.cells = 2 << depth;
  bisph::GridFunction f(g);
  std::vector<int> unit(static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto idx = f.unravel(i);
    for (int a = 0; a < dim; ++a) unit[a] = idx[a] / 2;
    f[i] = static_cast<double>(at(unit));
  }
  return f;
}

namespace {

StepFunction random_step(std::mt19937_64& rng, int dim, int depth) {
  StepFunction s;
  s.dim = dim;
  s.depth = depth;
  const std::size_t n = std::size_t{1} << (depth * dim);
  s.values.resize(n);
  switch (rng() % 4) {
  case 0:
    for (auto& v : s.values) v = static_cast<std::int64_t>(rng() % 16);
    break;
  case 1:
    for (auto& v : s.values) v = rng() % 10 == 0 ? static_cast<std::int64_t>(1 + rng() % 15) : 0;
    break;
  case 2:
    s.values[rng() % n] = 1 + static_cast<std::int64_t>(rng() % 15);
    break;
  default:
    for (auto& v : s.values) v = 1 + static_cast<std::int64_t>(rng() % 2);
    break;
  }
  return s;
}

std::int64_t ipow(std::int64_t x, int p) { return p == 1 ? x : x * x; }

i128 power_sum(const StepFunction& f, int p, const DyadicCube& q) {
  const int width = 1 << (q.level + f.depth);
  std::vector<int> idx(static_cast<std::size_t>(f.dim));
  std::vector<int> lo(static_cast<std::size_t>(f.dim));
  for (int a = 0; a < f.dim; ++a) lo[a] = q.corner[a] * width;
  i128 s = 0;
  const std::size_t count = std::size_t{1} << ((q.level + f.depth) * f.dim);
  for (std::size_t k = 0; k < count; ++k) {
    std::size_t rest = k;
    for (int a = f.dim - 1; a >= 0; --a) {
      idx[a] = lo[a] + static_cast<int>(rest % static_cast<std::size_t>(width));
      rest /= static_cast<std::size_t>(width);
    }
    s += ipow(f.at(idx), p);
  }
  return s;
}

i128 units(const DyadicCube& q, int depth) { return i128{1} << ((q.level + depth) * q.dim); }

std::uint64_t morton(const DyadicCube& q, int depth) {
  const int shift = q.level + depth;
  std::uint64_t key = 0;
  for (int b = depth - 1; b >= 0; --b)
    for (int a = 0; a < q.dim; ++a)
      key = (key << 1) | ((static_cast<std::uint64_t>(q.corner[a]) << shift >> b) & 1u);
  return key;
}

std::vector<DyadicCube> subcubes(const DyadicCube& root, int depth) {
  std::vector<DyadicCube> out;
  for (int level = root.level - 1; level >= -depth; --level) {
    const int per_axis = 1 << (root.level - level);
    const std::size_t count = std::size_t{1} << ((root.level - level) * root.dim);
    for (std::size_t k = 0; k < count; ++k) {
      DyadicCube q;
      q.dim = root.dim;
      q.level = level;
      std::size_t rest = k;
      for (int a = root.dim - 1; a >= 0; --a) {
        q.corner[a] = root.corner[a] * per_axis + static_cast<int>(rest % static_cast<std::size_t>(per_axis));
        rest /= static_cast<std::size_t>(per_axis);
      }
      out.push_back(q);
    }
  }
  return out;
}

} // namespace

std::vector<StepTriple> step_corpus(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<StepTriple> out;
  for (std::size_t i = 0; i < count; ++i) {
    const int dim = i % 2 == 0 ? 1 : 2;
    const int depth = 1 + static_cast<int>(rng() % (dim == 1 ? 6u : 4u));
    StepTriple t;
    t.f1 = random_step(rng, dim, depth);
    t.f2 = random_step(rng, dim, depth);
    t.h = random_step(rng, dim, depth);
    t.p1 = 1 + static_cast<int>(rng() % 2);
    t.p2 = 1 + static_cast<int>(rng() % 2);
    t.pt = 1 + static_cast<int>(rng() % 2);
    out.push_back(std::move(t));
  }
  return out;
}

Ratio exact_ratio(double x) {
  Ratio r{0, 1};
  double scaled = x;
  while (scaled != std::floor(scaled)) {
    scaled *= 2.0;
    r.den *= 2;
    if (r.den > (std::int64_t{1} << 40)) throw std::domain_error("not a short dyadic rational");
  }
  r.num = static_cast<std::int64_t>(scaled);
  return r;
}

DyadicCube unit_root(int dim) {
  DyadicCube q;
  q.dim = dim;
  q.level = 0;
  return q;
}

std::vector<DyadicCube> maximal_exceeding(const std::vector<const StepFunction*>& fs,
                                          const std::vector<int>& exps, Ratio factor,
                                          const DyadicCube& root) {
  const int depth = fs.front()->depth;
  std::vector<i128> root_sum;
  for (std::size_t j = 0; j < fs.size(); ++j) root_sum.push_back(power_sum(*fs[j], exps[j], root));
  const i128 root_units = units(root, depth);
  std::vector<DyadicCube> exceed;
  for (const auto& q : subcubes(root, depth)) {
    const i128 q_units = units(q, depth);
    for (std::size_t j = 0; j < fs.size(); ++j) {
      const int p = exps[j];
      const i128 lhs = power_sum(*fs[j], p, q) * root_units * ipow(factor.den, p);
      const i128 rhs = i128{ipow(factor.num, p)} * root_sum[j] * q_units;
      if (lhs > rhs) {
        exceed.push_back(q);
        break;
      }
    }
  }
  std::vector<DyadicCube> out;
  for (const auto& q : exceed) {
    bool covered = false;
    for (const auto& a : exceed)
      if (a.level > q.level && a.contains(q)) covered = true;
    if (!covered) out.push_back(q);
  }
  std::sort(out.begin(), out.end(), [depth](const DyadicCube& a, const DyadicCube& b) {
    return morton(a, depth) < morton(b, depth);
  });
  return out;
}

Ratio smallest_halving_c0(const StepTriple& t, const DyadicCube& root) {
  const int depth = t.f1.depth;
  for (int j = 0; j < 40; ++j) {
    Ratio c{64 + (std::int64_t{1} << j), 64};
    auto sel = maximal_exceeding({&t.f1, &t.f2, &t.h}, {t.p1, t.p2, t.pt}, c, root);
    i128 covered = 0;
    for (const auto& q : sel) covered += units(q, depth);
    if (2 * covered < units(root, depth)) return c;
  }
  throw std::domain_error("no halving constant below 2^34");
}

std::vector<DyadicCube> sparse_family(const StepTriple& t) {
  std::vector<DyadicCube> out;
  auto grow = [&](auto&& self, const DyadicCube& root) -> void {
    out.push_back(root);
    Ratio c = smallest_halving_c0(t, root);
    for (const auto& q : maximal_exceeding({&t.f1, &t.f2, &t.h}, {t.p1, t.p2, t.pt}, c, root))
      self(self, q);
  };
  grow(grow, unit_root(t.f1.dim));
  return out;
}

std::vector<double> dyadic_maximal(const bisph::GridFunction& f, int depth) {
  const int n = f.dim();
  const int cells = f.cells();
  std::vector<double> best(f.size(), 0.0);
  for (int d = 0; d <= depth; ++d) {
    const int per_axis = 1 << d;
    const int span = cells / per_axis;
    const std::size_t cubes = std::size_t{1} << (d * n);
    for (std::size_t k = 0; k < cubes; ++k) {
      bisph::Index start{};
      std::size_t rest = k;
      for (int a = n - 1; a >= 0; --a) {
        start[a] = static_cast<int>(rest % static_cast<std::size_t>(per_axis)) * span;
        rest /= static_cast<std::size_t>(per_axis);
      }
      std::vector<std::size_t> members;
      double sum = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) {
        auto idx = f.unravel(i);
        bool inside = true;
        for (int a = 0; a < n; ++a) inside = inside && idx[a] >= start[a] && idx[a] < start[a] + span;
        if (inside) {
          members.push_back(i);
          sum += std::abs(f[i]);
        }
      }
      const double mean = sum / static_cast<double>(members.size());
      for (auto i : members) best[i] = std::max(best[i], mean);
    }
  }
  return best;
}

std::vector<std::pair<Frac, Frac>> lacunary_vertices(int n) {
  return {{{0, 1}, {1, 1}}, {{1, 1}, {0, 1}}, {{n, n + 1}, {n, n + 1}}};
}

std::vector<std::pair<Frac, Frac>> full_vertices(int n) {
  const std::int64_t m = n;
  return {{{0, 1}, {1, 1}},
          {{m - 1, m}, {1, m}},
          {{m - 1, m}, {m - 1, m}},
          {{m * m - m, m * m + 1}, {m * m - m + 2, m * m + 1}}};
}

} // namespace oracle
