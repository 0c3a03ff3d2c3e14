// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "bisph/spherical.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace bisph;
using testing::error_of;

namespace {

GridGeometry plane(int cells = 256) { return GridGeometry::centered(2, 4.0, cells); }

double weight_sum(const SphereQuadrature& q) {
  auto e = q.expanded();
  return static_cast<double>(std::accumulate(e.weights.begin(), e.weights.end(), 0.0L));
}

// Nonnegative test functions for the operator lattice.
std::vector<GridFunction> lattice_corpus(const GridGeometry& g) {
  std::vector<GridFunction> out;
  out.push_back(sample(TestFunctionSpec::ball(1.0), g));
  out.push_back(sample(TestFunctionSpec::annulus(0.25), g));
  out.push_back(sample(TestFunctionSpec::ball(0.5, {1.0, -0.5, 0.0}), g));
  out.push_back(sample(TestFunctionSpec::box(2, {-2, 0, 0}, {-1, 3, 0}), g));
  out.push_back(sample(TestFunctionSpec::knapp_r2(0.1), g));
  out.push_back(sample(TestFunctionSpec::knapp_r1(0.1), g));
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 4; ++k) {
    GridFunction f(g);
    for (double& v : f.values()) v = u(rng) < 0.2 ? u(rng) * (k + 1) : 0.0;
    out.push_back(std::move(f));
  }
  return out;
}

} // namespace

TEST_SUITE("spherical") {

TEST_CASE("quadrature weights") {
  auto c = sphere_quadrature(2, 512);
  REQUIRE(c.size() == 512u);
  for (double w : c.weights) CHECK(w == 1.0 / 512.0);
  for (int ambient = 2; ambient <= 4; ++ambient)
    CHECK(weight_sum(sphere_quadrature(ambient, 24)) == doctest::Approx(1.0).epsilon(1e-13));

  auto s2 = sphere_quadrature(3, 32);
  double zmoment = 0.0, z2 = 0.0;
  for (std::size_t k = 0; k < s2.size(); ++k) {
    zmoment += s2.weights[k] * s2.nodes[k][2];
    z2 += s2.weights[k] * s2.nodes[k][2] * s2.nodes[k][2];
  }
  CHECK(std::abs(zmoment) <= 1e-12);
  CHECK(z2 == doctest::Approx(1.0 / 3.0).epsilon(1e-3));

  auto s3 = sphere_quadrature(4, 16).expanded();
  for (int a = 0; a < 4; ++a) {
    double m2 = 0.0;
    for (std::size_t k = 0; k < s3.size(); ++k) m2 += s3.weights[k] * s3.nodes[k][a] * s3.nodes[k][a];
    CHECK(m2 == doctest::Approx(0.25).epsilon(1e-3));
  }
  for (const auto& x : s3.nodes)
    CHECK(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3] == doctest::Approx(1.0).epsilon(1e-14));

  CHECK(error_of([] { sphere_quadrature(5, 8); }) == ErrorKind::Unsupported);
  CHECK(error_of([] { sphere_quadrature(2, 0); }) == ErrorKind::Domain);
}

TEST_CASE("constants are fixed by small averages") {
  auto g = plane(64);
  auto one = sample(TestFunctionSpec::constant(1.0), g);
  auto q = sphere_quadrature(2, 128);
  auto a = spherical_average(one, 0.5, q);
  CHECK(a[a.locate({0.1, 0.2, 0.0})] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(spherical_average_at(one, 1.0, q, {0.0, 0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(error_of([&] { spherical_average(one, 0.0, q); }) == ErrorKind::Domain);
}

TEST_CASE("circle averages of a disk match the arc length") {
  auto g = plane(256);
  auto disk = sample(TestFunctionSpec::ball(1.0), g);
  auto q = sphere_quadrature(2, 512);
  CHECK(std::abs(spherical_average_at(disk, 1.0, q, {1.0, 0.0, 0.0}) - 1.0 / 3.0) <= 1e-3);
  const double pts[][3] = {{0.5, 1.0, 1.0}, {1.5, 1.0, 1.0}, {0.8, 0.5, 1.0}, {1.2, 0.75, 1.5}};
  for (const auto& p : pts) {
    double ref = oracle::arc_fraction(p[0], p[1], p[2]);
    auto f = p[2] == 1.0 ? disk : sample(TestFunctionSpec::ball(p[2]), g);
    CHECK(std::abs(spherical_average_at(f, p[1], q, {p[0], 0.0, 0.0}) - ref) <= 5e-3);
  }
}

TEST_CASE("sphere averages of a ball match the cap area") {
  auto g = GridGeometry::centered(3, 2.0, 64);
  auto ball = sample(TestFunctionSpec::ball(1.0), g);
  auto q = sphere_quadrature(3, 48);
  for (double d : {0.5, 1.0, 1.25}) {
    double ref = oracle::cap_fraction(d, 0.75, 1.0);
    CHECK(std::abs(spherical_average_at(ball, 0.75, q, {d, 0.0, 0.0}) - ref) <= 1e-2);
  }
}

TEST_CASE("a half plane averages to one half on its edge") {
  auto g = plane(256);
  auto half = sample(TestFunctionSpec::box(2, {0, -4, 0}, {4, 4, 0}), g);
  auto q = sphere_quadrature(2, 512);
  CHECK(std::abs(spherical_average_at(half, 1.0, q, {0.0, 0.0, 0.0}) - 0.5) <= 1e-12);
  CHECK(std::abs(spherical_average_at(half, 0.5, q, {0.0, 1.0, 0.0}) - 0.5) <= 1e-12);
}

TEST_CASE("radius sets") {
  auto d = RadiusSet::dyadic(-1, 2).radii();
  CHECK(d == std::vector<double>{0.5, 1.0, 2.0, 4.0});
  auto geo = RadiusSet::geometric(-1, 2, 4).radii();
  CHECK(geo.size() == 13u);
  for (double r : d) CHECK(std::find(geo.begin(), geo.end(), r) != geo.end());
  auto iv = RadiusSet::interval(1.0, 2.0, 8).radii();
  CHECK(iv.front() == 1.0);
  CHECK(iv.back() == 2.0);
  CHECK(iv.size() == 9u);
  CHECK(std::is_sorted(iv.begin(), iv.end()));

  auto g = plane(64);
  auto lac = default_radii(OperatorKind::lacunary, g).radii();
  CHECK(lac.front() == 0.5);
  CHECK(lac.back() == 8.0);
  CHECK(truncate_radii({0.1, 0.5, 20.0}, g) == std::vector<double>{0.5});
  CHECK(error_of([&] { truncate_radii({0.1, 0.2}, g); }) == ErrorKind::Resolution);
  CHECK(parse_operator_kind("lacunary") == OperatorKind::lacunary);
  CHECK(error_of([] { parse_operator_kind("sph"); }) == ErrorKind::Parse);
}

TEST_CASE("maximal operators on a disk") {
  auto g = plane(64);
  auto disk = sample(TestFunctionSpec::ball(1.0), g);
  auto q = sphere_quadrature(2, 128);
  auto lac = linear_maximal(disk, default_radii(OperatorKind::lacunary, g), q);
  auto full = linear_maximal(disk, default_radii(OperatorKind::full, g, 4), q);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(lac[i] <= full[i]);
    CHECK(full[i] <= 1.0 + 1e-12);
  }
  auto far = full[full.locate({3.9, 3.9, 0.0})];
  CHECK(far > 0.0);
  CHECK(far < 0.5);
  auto pts = support_points(disk);
  auto partial = linear_maximal(disk, default_radii(OperatorKind::lacunary, g), q, pts);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(partial[i] == (disk[i] != 0.0 ? lac[i] : 0.0));
}

TEST_CASE("operator lattice holds on a corpus") {
  auto g = plane(64);
  auto fs = lattice_corpus(g);
  auto q = sphere_quadrature(2, 128);
  auto lac = default_radii(OperatorKind::lacunary, g);
  auto full = default_radii(OperatorKind::full, g, 4);
  auto lat = DyadicLattice::for_grid(g);
  std::vector<GridFunction> lin, hl;
  for (const auto& f : fs) {
    lin.push_back(linear_maximal(f, full, q));
    hl.push_back(hl_maximal(f, lat));
    auto ref = oracle::dyadic_maximal(f, lat.max_depth);
    for (std::size_t i = 0; i < g.size(); ++i)
      CHECK(std::abs(hl.back()[i] - ref[i]) <= 1e-12 * std::max(1.0, ref[i]));
  }
  for (std::size_t a = 0; a < fs.size(); a += 2) {
    const std::size_t b = (a + 3) % fs.size();
    auto bl = bilinear_maximal(fs[a], fs[b], lac, q);
    auto bf = bilinear_maximal(fs[a], fs[b], full, q);
    auto bh = bilinear_hl(fs[a], fs[b], lat);
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(bl[i] <= bf[i]);
      CHECK(bf[i] <= lin[a][i] * lin[b][i]);
      CHECK(bh[i] <= hl[a][i] * hl[b][i]);
    }
  }
}

TEST_CASE("bilinear operators check their operands") {
  auto g = plane(64);
  GridFunction f(g), other(plane(32));
  auto q = sphere_quadrature(2, 64);
  auto lat = DyadicLattice::for_grid(g);
  CHECK(error_of([&] { bilinear_maximal(f, other, default_radii(OperatorKind::lacunary, g), q); }) ==
        ErrorKind::Shape);
  CHECK(error_of([&] { bilinear_hl(f, other, lat); }) == ErrorKind::Shape);
}

TEST_CASE("the three-sphere operator") {
  auto g = plane(64);
  auto one = sample(TestFunctionSpec::constant(1.0), g);
  auto half = sample(TestFunctionSpec::box(2, {0, -4, 0}, {4, 4, 0}), g);
  GridFunction zero(g);
  auto q = sphere_quadrature(4, 24);
  auto radii = RadiusSet::list({0.5, 1.0});
  PointSet centre{one.locate({0.05, 0.05, 0.0}), one.locate({-0.05, 0.05, 0.0})};
  auto m1 = m_sph(one, one, radii, q, centre);
  CHECK(m1[centre[0]] == doctest::Approx(1.0).epsilon(1e-13));
  auto mh = m_sph(half, one, radii, q, centre);
  CHECK(mh[centre[0]] >= 0.5 - 1e-12);
  CHECK(mh[centre[0]] <= 1.0 + 1e-12);
  CHECK(mh[centre[1]] <= 0.5 + 1e-12);
  auto mz = m_sph(one, zero, radii, q, centre);
  CHECK(mz[centre[0]] == 0.0);

  CHECK(error_of([&] { m_sph(one, one, radii, sphere_quadrature(2, 24), centre); }) == ErrorKind::Shape);
  auto cube = sample(TestFunctionSpec::constant(1.0), GridGeometry::centered(3, 2.0, 16));
  CHECK(error_of([&] { m_sph(cube, cube, radii, q); }) == ErrorKind::Unsupported);
}

TEST_CASE("localized operators vanish outside their cube") {
  auto g = plane(64);
  auto one = sample(TestFunctionSpec::constant(1.0), g);
  auto lat = DyadicLattice::for_grid(g);
  auto q = sphere_quadrature(2, 128);
  DyadicCube small{1, {2, 2, 0}, 2};
  DyadicCube big{2, {1, 1, 0}, 2};
  auto loc = localized_average(one, small, lat.origin, q);
  auto box = small.to_cube(lat.origin);
  bool any = false;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!box.contains(loc.point(i))) CHECK(loc[i] == 0.0);
    any = any || loc[i] > 0.0;
    CHECK(loc[i] <= 1.0 + 1e-12);
  }
  CHECK(any);
  auto lm = local_maximal(one, one, big, lat.origin, 4, q);
  auto bbox = big.to_cube(lat.origin);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!bbox.contains(lm.point(i))) CHECK(lm[i] == 0.0);
  CHECK(*std::max_element(lm.values().begin(), lm.values().end()) > 0.0);
  DyadicCube tiny{0, {4, 4, 0}, 2};
  CHECK(error_of([&] { localized_average(one, tiny, lat.origin, q); }) == ErrorKind::Resolution);
  CHECK(error_of([&] { local_maximal(one, one, small, lat.origin, 4, q); }) == ErrorKind::Resolution);
}

}
