// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "bisph/exponents.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace bisph;
using testing::error_of;

namespace {

void check_vertices(const RegionPolygon& poly, const std::vector<std::pair<oracle::Frac, oracle::Frac>>& ref) {
  REQUIRE(poly.vertices.size() == ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    CHECK(poly.exact[2 * i].num * ref[i].first.den == ref[i].first.num * poly.exact[2 * i].den);
    CHECK(poly.exact[2 * i + 1].num * ref[i].second.den == ref[i].second.num * poly.exact[2 * i + 1].den);
    CHECK(poly.vertices[i].inv_r == ref[i].first.value());
    CHECK(poly.vertices[i].inv_s == ref[i].second.value());
  }
}

} // namespace

TEST_SUITE("exponents") {

TEST_CASE("region vertices match the rational formulas") {
  for (int n = 2; n <= 8; ++n) {
    check_vertices(region_polygon(RegionKind::lacunary, n), oracle::lacunary_vertices(n));
    check_vertices(region_polygon(RegionKind::full, n), oracle::full_vertices(n));
  }
  CHECK(region_polygon(RegionKind::full, 2).degenerate());
  CHECK_FALSE(region_polygon(RegionKind::full, 3).degenerate());
  CHECK_FALSE(region_polygon(RegionKind::lacunary, 2).degenerate());
  auto f3 = region_polygon(RegionKind::full, 3);
  CHECK(f3.vertices[3].inv_r == doctest::Approx(0.6));
  CHECK(f3.vertices[3].inv_s == doctest::Approx(0.8));
  CHECK(error_of([] { region_polygon(RegionKind::lacunary, 1); }) == ErrorKind::InvalidDimension);
}

TEST_CASE("interior test on the planar lacunary triangle") {
  auto l2 = region_polygon(RegionKind::lacunary, 2);
  CHECK_FALSE(is_interior({0.0, 1.0}, l2));
  CHECK(is_interior({0.5, 0.6}, l2));
  CHECK_FALSE(is_interior({0.5, 0.4}, l2));
  CHECK(is_interior({0.45, 0.65}, l2));
  CHECK_FALSE(is_interior({0.45, 0.65}, region_polygon(RegionKind::full, 2)));
}

TEST_CASE("interior test does not depend on vertex order") {
  std::mt19937_64 rng(5);
  for (int n = 2; n <= 5; ++n)
    for (auto kind : {RegionKind::lacunary, RegionKind::full}) {
      auto poly = region_polygon(kind, n);
      for (int trial = 0; trial < 20; ++trial) {
        auto shuffled = poly;
        std::shuffle(shuffled.vertices.begin(), shuffled.vertices.end(), rng);
        for (int k = 0; k < 50; ++k) {
          ExponentPoint p{static_cast<double>(rng() % 1000) / 1000.0,
                          static_cast<double>(rng() % 1000) / 1000.0};
          CHECK(is_interior(p, poly) == is_interior(p, shuffled));
        }
      }
    }
}

TEST_CASE("phi values and domain") {
  CHECK(phi(RegionKind::lacunary, 2, 2.0 / 3.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(phi(RegionKind::lacunary, 3, 0.9) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(phi(RegionKind::full, 2, 0.4) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(error_of([] { phi(RegionKind::lacunary, 2, 1.0); }) == ErrorKind::Domain);
  CHECK(error_of([] { phi(RegionKind::full, 2, 0.5); }) == ErrorKind::Domain);
  CHECK(error_of([] { phi(RegionKind::full, 3, 0.0); }) == ErrorKind::Domain);
}

TEST_CASE("phi branches meet at the breakpoint and reach the endpoint limits") {
  using namespace phi_branch;
  for (int n = 2; n <= 8; ++n) {
    double bl = lacunary_breakpoint(n);
    CHECK(std::abs(lacunary_left(n, bl) - lacunary_right(n, bl)) <= 1e-12);
    double bf = full_breakpoint(n);
    CHECK(std::abs(full_left(n, bf) - full_right(n, bf)) <= 1e-12);
    CHECK(phi(RegionKind::lacunary, n, 1e-12) == doctest::Approx(1.0));
    CHECK(phi(RegionKind::lacunary, n, 1.0 - 1e-12) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(phi(RegionKind::full, n, 1e-12) == doctest::Approx(1.0));
    const double cap = (n - 1.0) / n;
    CHECK(phi(RegionKind::full, n, cap - 1e-12) == doctest::Approx(cap));
  }
}

TEST_CASE("phi traces the upper edge of each region") {
  for (int n = 2; n <= 6; ++n) {
    for (auto kind : {RegionKind::lacunary, RegionKind::full}) {
      if (kind == RegionKind::full && n == 2) continue;
      auto poly = region_polygon(kind, n);
      const double cap = kind == RegionKind::lacunary ? 1.0 : (n - 1.0) / n;
      for (int k = 1; k < 8; ++k) {
        double r = cap * (0.1 + 0.1 * k);
        double s = phi(kind, n, r);
        CHECK(is_interior({r, s - 1e-6}, poly));
        CHECK_FALSE(is_interior({r, s + 1e-6}, poly));
      }
    }
  }
}

TEST_CASE("holder_t") {
  CHECK(holder_t(1.5, 1.5) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(holder_t(5.0 / 3.0, 5.0 / 3.0) == doctest::Approx(5.0).epsilon(1e-13));
  CHECK(error_of([] { holder_t(2.0, 2.0); }) == ErrorKind::UndefinedExponent);
  ExponentConfig c;
  c.s1 = c.s2 = 2.0;
  CHECK_FALSE(c.inv_t().has_value());
}

TEST_CASE("necessary conditions") {
  auto interior = ExponentConfig::from_points(2, {0.45, 0.65}, {0.45, 0.65});
  CHECK(interior.t() == doctest::Approx(10.0 / 3.0).epsilon(1e-12));
  auto lac = necessary_report(RegionKind::lacunary, interior);
  CHECK(lac.all_hold());

  auto bad = ExponentConfig::from_points(2, {0.9, 0.9}, {0.9, 0.9});
  auto rep = necessary_report(RegionKind::lacunary, bad);
  const auto& c = rep.find("annulus_ball");
  CHECK(c.lhs == doctest::Approx(5.4));
  CHECK(c.bound == 4.0);
  CHECK_FALSE(c.holds);

  auto wide = ExponentConfig::from_points(2, {0.6, 0.6}, {0.3, 0.6});
  auto full = necessary_report(RegionKind::full, wide);
  CHECK_FALSE(full.find("r1_below_cap").holds);
  CHECK(full.find("r2_below_cap").holds);
  CHECK(error_of([&] { (void)full.find("nothing"); }) == ErrorKind::Domain);
}

TEST_CASE("bilinear class exponents at the worked planar values") {
  auto m = lmo_params(4, 4, 3, 3, 1.5);
  CHECK(m.inv_r_total == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(m.delta(0).value() == doctest::Approx(12.0).epsilon(1e-13));
  CHECK(m.theta(0).value() == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(m.delta(2).value() == doctest::Approx(6.0).epsilon(1e-13));
  CHECK(m.inv_r[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(theta_reciprocal(m, 0) == m.inv_theta[0]);

  auto endpoint = lmo_params(3, 5, 3, 5, 2);
  CHECK(endpoint.delta(0).is_unbounded());
  CHECK(endpoint.delta(1).is_unbounded());

  CHECK(error_of([] { lmo_params(2, 2, 3, 1, 2); }) == ErrorKind::ExponentOrder);
  CHECK(error_of([] { lmo_params(2, 2, 0.5, 1, 2); }) == ErrorKind::ExponentOrder);
}

TEST_CASE("step-two closed forms agree with the routed computation") {
  auto a = step2_exponents(2, 1.0);
  CHECK(a.inv_t == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(a.inv_r == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(1.0 / a.inv_theta1 == doctest::Approx(4.0).epsilon(1e-13));
  for (int n = 2; n <= 6; ++n)
    for (double e : {0.25, 0.5, 1.0, 2.0}) {
      auto x = step2_exponents(n, e);
      auto y = step2_exponents_via_lmo(n, e);
      CHECK(x.inv_t == doctest::Approx(y.inv_t).epsilon(1e-12));
      CHECK(x.inv_r == doctest::Approx(y.inv_r).epsilon(1e-12));
      CHECK(x.inv_theta1 == doctest::Approx(y.inv_theta1).epsilon(1e-12));
    }
}

TEST_CASE("sharpness exponent") {
  CHECK(sharpness_exponent(2, 2, ExtendedReal::finite(4), 4, 4) == doctest::Approx(3.0));
  CHECK(sharpness_exponent(2, 2, ExtendedReal::unbounded(), 4, 4) == doctest::Approx(2.0));
  CHECK(error_of([] { sharpness_exponent(2, 2, ExtendedReal::finite(4), 2, 4); }) == ErrorKind::Boundary);
}

TEST_CASE("radial comparison at n = 2, delta = 2, epsilon = 1") {
  auto r = radial_comparison_ranges(2, 2.0, 1.0, 1.0);
  CHECK(r.theorem_range.lo == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(r.theorem_range.hi == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(r.product_range.lo == doctest::Approx(-2.0 / 3.0).epsilon(1e-15));
  CHECK(r.product_range.hi == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK_FALSE(r.in_theorem_only.empty());
  CHECK(r.in_theorem_only.lo == doctest::Approx(-2.0));
  CHECK(r.in_theorem_only.hi == doctest::Approx(-2.0 / 3.0));
  CHECK(r.in_theorem_only.hi_closed);
  CHECK(error_of([] { radial_comparison_ranges(2, 0.5, 1.0, 1.0); }) == ErrorKind::Domain);
  CHECK(error_of([] { radial_comparison_ranges(2, 2.0, 1.0, 5.0); }) == ErrorKind::Domain);
}

TEST_CASE("second comparison branch and radial families") {
  CHECK_FALSE(case_two_bounds(RegionKind::lacunary, 2, 2.0).feasible());
  auto fam = radial_family_range(RegionKind::lacunary, 2, 2.0);
  CHECK(fam.lo == -1.0);
  CHECK(fam.lo_closed);
  CHECK(fam.hi == 3.0);
  CHECK_FALSE(fam.hi_closed);
  auto open = radial_family_range(RegionKind::full, 3, 2.0);
  CHECK_FALSE(open.lo_closed);
  CHECK(open.hi == 7.0);
}

TEST_CASE("region kind parsing") {
  CHECK(parse_region_kind("lac") == RegionKind::lacunary);
  CHECK(parse_region_kind("full") == RegionKind::full);
  CHECK(error_of([] { parse_region_kind("sph"); }) == ErrorKind::Parse);
}

}
