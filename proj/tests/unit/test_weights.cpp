// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "bisph/weights.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace bisph;
using testing::error_of;
using testing::rel_diff;

namespace {

Cube square(double x0, double y0, double side) { return Cube{2, {x0, y0, 0.0}, side}; }

double oracle_mean(const Cube& q, double b) {
  double lo[3], hi[3];
  for (int a = 0; a < q.dim; ++a) {
    lo[a] = q.lower[a];
    hi[a] = q.lower[a] + q.side;
  }
  return oracle::power_mean_quadrature(q.dim, lo, hi, b);
}

BilinearWeight pair_of(double a, double p1, double p2) {
  BilinearWeight bw;
  bw.w1 = WeightSpec::power(a);
  bw.w2 = WeightSpec::power(a);
  bw.p1 = p1;
  bw.p2 = p2;
  return bw;
}

} // namespace

TEST_SUITE("weights") {

TEST_CASE("power means agree with tensor quadrature") {
  const Cube cubes[] = {square(1, 1, 1), square(0.25, -2, 0.5), square(-3, 2, 2), square(0.5, 0.0, 1)};
  for (const auto& q : cubes)
    for (double b : {-1.5, -0.5, 0.5, 1.0, 2.2})
      CHECK(rel_diff(power_cube_mean(q, b), oracle_mean(q, b)) <= 1e-9);
  Cube line{1, {0.5, 0, 0}, 1.5};
  CHECK(rel_diff(power_cube_mean(line, -0.75), oracle_mean(line, -0.75)) <= 1e-9);
  CHECK(power_cube_mean(square(0, 0, 1), 2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(power_cube_mean(square(-1, -1, 2), 2.0, 3.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::isinf(power_cube_mean(square(-1, -1, 2), -2.0)));
  CHECK(std::isfinite(power_cube_mean(square(-1, -1, 2), -1.9)));
}

TEST_CASE("extremes of power weights over a cube") {
  auto w = WeightSpec::power(1.0);
  CHECK(cube_esssup(w, square(3, 4, 1)) == doctest::Approx(std::sqrt(16.0 + 25.0)));
  CHECK(cube_essinf(w, square(3, 4, 1)) == doctest::Approx(5.0));
  CHECK(std::isinf(cube_esssup(WeightSpec::power(-1.0), square(-1, -1, 2))));
  CHECK(cube_essinf(WeightSpec::constant(2.0), square(0, 0, 1)) == 2.0);
}

TEST_CASE("classical power memberships") {
  for (int n = 1; n <= 4; ++n)
    for (double p : {1.5, 2.0, 4.0}) CHECK(ap_power_membership(0.0, p, n));
  CHECK(ap_power_membership(1.0, 2.0, 2));
  CHECK_FALSE(ap_power_membership(2.0, 2.0, 2));
  CHECK_FALSE(ap_power_membership(-2.0, 2.0, 2));
  CHECK(error_of([] { ap_power_membership(0.0, 1.0, 2); }) == ErrorKind::Unsupported);
  CHECK(a1_power_membership(0.0, 2));
  CHECK(a1_power_membership(-1.9, 2));
  CHECK_FALSE(a1_power_membership(0.1, 2));
  CHECK_FALSE(a1_power_membership(-2.0, 2));
}

TEST_CASE("cube families") {
  auto d = CubeFamily::dyadic_descendants(square(0, 0, 1), 3);
  CHECK(d.levels.size() == 4u);
  CHECK(d.levels[3].size() == 64u);
  CHECK(d.cube_count() == 85u);
  CHECK(d.levels[3][1].lower[1] == 0.125);
  CHECK(d.levels[3][8].lower[0] == 0.125);
  auto c = CubeFamily::nested_centered(2, -2, 3);
  CHECK(c.levels.size() == 6u);
  CHECK(c.levels[0][0].side == 0.5);
  CHECK(c.levels[0][0].lower[0] == -0.25);
  auto o = CubeFamily::origin_approach(2, 4, 16.0);
  CHECK(o.levels[3][0].lower[0] == 1.0 / 4096.0);
  CHECK(o.levels[3][0].lower[1] == -0.5);
  CHECK(error_of([] { CubeFamily::dyadic_descendants(square(0, 0, 1), -1); }) == ErrorKind::Domain);
}

TEST_CASE("muckenhoupt characteristic scans") {
  auto fam = CubeFamily::origin_approach(2);
  auto flat = ap_characteristic(WeightSpec::constant(1.0), 2.0, fam);
  CHECK(flat.value() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(flat.stable());

  auto in = ap_characteristic(WeightSpec::power(1.0), 2.0, fam);
  CHECK(std::isfinite(in.value()));
  CHECK(in.stable());
  auto out = ap_characteristic(WeightSpec::power(2.2), 2.0, fam);
  CHECK(out.growth() >= 10.0);
  CHECK_FALSE(out.stable());

  auto centred = CubeFamily::nested_centered(2, -3, 3);
  auto scale_free = ap_characteristic(WeightSpec::power(1.0), 2.0, centred);
  for (double v : scale_free.level_max) CHECK(v == doctest::Approx(scale_free.value()).epsilon(1e-12));
  CHECK(std::isinf(ap_characteristic(WeightSpec::power(2.2), 2.0, centred).value()));
  CHECK(error_of([&] { ap_characteristic(WeightSpec::power(1.0), 1.0, fam); }) == ErrorKind::Unsupported);
}

TEST_CASE("reverse hoelder scans") {
  CHECK(rh_characteristic(WeightSpec::constant(1.0), 2.0, CubeFamily::origin_approach(2)).value() ==
        doctest::Approx(1.0).epsilon(1e-14));
  auto away = CubeFamily::translated(2, 1.0, {{2, 2, 0}, {1, 0, 0}, {0.5, 0.5, 0}, {0.25, 0.25, 0}});
  auto fine = rh_characteristic(WeightSpec::power(1.0), 2.0, away);
  CHECK(std::isfinite(fine.value()));
  CHECK(fine.value() >= 1.0);
  auto blow = rh_characteristic(WeightSpec::power(-1.5), 2.0, CubeFamily::nested_centered(2, -2, 2));
  CHECK(std::isinf(blow.value()));
  CHECK_FALSE(blow.stable());
  CHECK(error_of([&] { rh_characteristic(WeightSpec::power(1.0), 1.0, away); }) == ErrorKind::Domain);
}

TEST_CASE("bilinear class with equal factors reduces to the linear class") {
  auto fam = CubeFamily::origin_approach(2, 5);
  CHECK(lerner_characteristic(pair_of(0.0, 2.0, 3.0), fam).value() == doctest::Approx(1.0).epsilon(1e-14));
  for (double a : {-1.0, 0.5, 1.5})
    for (double p : {2.0, 3.0}) {
      auto lhs = lerner_characteristic(pair_of(a, p, p), fam);
      auto rhs = ap_characteristic(WeightSpec::power(a), p, fam);
      CHECK(rel_diff(lhs.value(), rhs.value()) <= 1e-10);
    }
}

TEST_CASE("bilinear class on a single cube is the integrand") {
  auto q = square(0.5, -0.25, 1.0);
  auto one = CubeFamily::translated(2, 1.0, {q.lower});
  BilinearWeight bw;
  bw.w1 = WeightSpec::power(0.5);
  bw.w2 = WeightSpec::power(-0.4);
  bw.p1 = 2.0;
  bw.p2 = 4.0;
  const double p = bw.p();
  const double expect = cube_mean(bw.composite(), q) *
                        std::pow(cube_mean(bw.w1.pow(-1.0), q), p / 2.0) *
                        std::pow(cube_mean(bw.w2.pow(-1.0 / 3.0), q), p * 3.0 / 4.0);
  CHECK(rel_diff(lerner_characteristic(bw, one).value(), expect) <= 1e-12);
}

TEST_CASE("localized class") {
  auto fam = CubeFamily::origin_approach(2, 5);
  auto flat = pair_of(0.0, 4.0, 4.0);
  flat.r = {{3.0, 3.0, 1.5}};
  CHECK(lmo_characteristic(flat, fam).value() == doctest::Approx(1.0).epsilon(1e-13));

  for (double a : {-0.5, 0.25, 1.0}) {
    BilinearWeight bw;
    bw.w1 = WeightSpec::power(a);
    bw.w2 = WeightSpec::power(-0.5 * a);
    bw.p1 = 2.0;
    bw.p2 = 3.0;
    bw.r = {{1.0, 1.0, 1.0}};
    const double l = lerner_characteristic(bw, fam).value();
    const double m = lmo_characteristic(bw, fam).value();
    CHECK(rel_diff(std::pow(m, bw.p()), l) <= 1e-10);
  }

  auto q = square(0.5, 0.5, 1.0);
  auto one = CubeFamily::translated(2, 1.0, {q.lower});
  BilinearWeight edge;
  edge.w1 = WeightSpec::power(1.0);
  edge.w2 = WeightSpec::power(0.5);
  edge.p1 = edge.p2 = 4.0;
  edge.r = {{4.0, 4.0, 1.0}};
  const double expect = std::sqrt(cube_mean(edge.composite(), q)) * cube_esssup(edge.w1.pow(-0.25), q) *
                        cube_esssup(edge.w2.pow(-0.25), q);
  CHECK(rel_diff(lmo_characteristic(edge, one).value(), expect) <= 1e-12);

  auto missing = pair_of(0.0, 2.0, 2.0);
  CHECK(error_of([&] { lmo_characteristic(missing, fam); }) == ErrorKind::Domain);
  missing.r = {{3.0, 1.0, 1.0}};
  CHECK(error_of([&] { lmo_characteristic(missing, fam); }) == ErrorKind::ExponentOrder);
}

TEST_CASE("localized class against derived classical memberships") {
  auto params = lmo_params(4, 4, 3, 3, 1.5);
  auto fam = CubeFamily::origin_approach(2);
  auto make = [](double a) {
    auto bw = pair_of(a, 4.0, 4.0);
    bw.r = {{3.0, 3.0, 1.5}};
    return bw;
  };
  auto flat = weightrelation_check(make(0.0), params, fam);
  CHECK(flat.all_derived);
  CHECK(flat.numeric_stable);
  CHECK(flat.agree);
  // First factor alone: (-2, 2/3). Composite factor: (-2/3, 2/3).
  for (double a : {-2.1, -1.9, -1.0, -0.6, 0.3, 0.65, 0.7, 1.0}) {
    auto rep = weightrelation_check(make(a), params, fam);
    REQUIRE(rep.derived.size() == 3u);
    CHECK(rep.derived[0].member == (a > -2.0 && a < 2.0 / 3.0));
    CHECK(rep.all_derived == (a > -2.0 / 3.0 && a < 2.0 / 3.0));
    CHECK(rep.agree);
  }
  auto outside = weightrelation_check(make(-2.5), params, fam);
  CHECK_FALSE(outside.all_derived);
  CHECK_FALSE(outside.numeric_stable);
  CHECK(outside.agree);
}

TEST_CASE("radial families") {
  CHECK(radial_family_membership(-1.0, 2.0, 2, RadialFamily::closed_lower));
  CHECK_FALSE(radial_family_membership(1.0, 2.0, 2, RadialFamily::closed_lower));
  CHECK_FALSE(radial_family_membership(-2.0, 2.0, 3, RadialFamily::open_lower));
  CHECK(radial_family_membership(-1.5, 2.0, 3, RadialFamily::open_lower));
  CHECK_FALSE(radial_family_membership(1.0, 2.0, 3, RadialFamily::open_lower));
  CHECK(error_of([] { radial_family_membership(0.0, 1.0, 2, RadialFamily::closed_lower); }) == ErrorKind::Domain);
  CHECK(error_of([] { radial_family_membership(0.0, 2.0, 2, RadialFamily::open_lower); }) == ErrorKind::Domain);
  CHECK(error_of([] { radial_family_membership(0.0, 1.4, 3, RadialFamily::open_lower); }) == ErrorKind::Domain);
}

TEST_CASE("scan csv layout") {
  auto scan = ap_characteristic(WeightSpec::constant(1.0), 2.0, CubeFamily::nested_centered(1, 0, 1));
  std::ostringstream os;
  write_scan_csv(scan, os);
  CHECK(os.str() == "family_level,cube_id,local_value,running_max\n0,0,1,1\n1,1,1,1\n");
}

}
