#include <doctest.h>

#include <cmath>

#include "fraczeta/errors.hpp"
#include "fraczeta/zeta.hpp"
#include "helpers.hpp"

using namespace fraczeta;
using namespace fraczeta::zeta;
using builders::cantor_ifs;
using builders::cantor_ifs_scaled3;
using builders::cantor_string_scaled3;

namespace {

geometry::WeightMeasure atom_at(double x, double w) {
  return {geometry::FiniteAtoms{{{x}}, {w}}};
}

}  // namespace

TEST_CASE("direct zeta on atoms") {
  auto dist = geometry::make_distance_oracle(cantor_ifs());
  geometry::GridScheme scheme;

  // atom at x = 2, distance 1, weight 0.7
  auto z = zeta_direct(dist, atom_at(2.0, 0.7), Complex(1.8, 0.4), 1, 0.631,
                       scheme);
  CHECK(rel_err(z.value, 0.7 * real_pow(1.0, Complex(0.8, 0.4))) < 1e-12);

  // atom at x = 1/2, distance 1/6
  Complex s(2.3, -1.0);
  auto z2 = zeta_direct(dist, atom_at(0.5, 1.0), s, 1, 0.631, scheme);
  CHECK(rel_err(z2.value, real_pow(1.0 / 6.0, s - 1.0)) < 1e-9);

  // s = d: total mass
  auto z3 = zeta_direct(dist, atom_at(0.5, 2.5), Complex(1.0, 0.0), 1, 0.631,
                        scheme);
  CHECK(z3.value == Complex(2.5, 0.0));
}

TEST_CASE("direct zeta refuses the divergent half-plane") {
  auto dist = geometry::make_distance_oracle(cantor_ifs());
  CHECK_THROWS_AS(zeta_direct(dist, atom_at(2.0, 1.0), Complex(0.5, 0.0), 1,
                              0.631, geometry::GridScheme{}),
                  DivergentAbscissaError);
}

TEST_CASE("direct quadrature matches the exact string") {
  auto str = cantor_string_scaled3(0.5);
  auto dist = geometry::make_distance_oracle(cantor_ifs_scaled3());
  geometry::WeightMeasure w{geometry::UniformBox{{{-0.5}, {3.5}}, 1.0}};
  for (Complex s : {Complex(1.2, 0.0), Complex(2.0, 0.5)}) {
    Complex exact = strings::string_zeta_exact(str, s, str.natural_mass());
    auto z = zeta_direct(dist, w, s, 1, str.dimension(),
                         geometry::GridScheme{2048, 4});
    CHECK(rel_err(z.value, exact) < 1e-3);
  }
}

TEST_CASE("tube route agrees with the exact string") {
  auto str = cantor_string_scaled3(0.5);
  auto tube = [&](double t) { return strings::string_tube_volume(str, t); };
  OscQuadParams params;
  params.breakpoints = string_kinks(str, str.cover_radius());
  for (Complex s : {Complex(0.7, 0.0), Complex(1.3, 3.0), Complex(2.8, -11.0),
                    Complex(1.0, 5.0)}) {
    Complex exact = strings::string_zeta_exact(str, s, str.natural_mass());
    auto zt = zeta_via_tube(tube, str.natural_mass(), s, 1, str.dimension(),
                            str.cover_radius(), params);
    CHECK(rel_err(zt.value, exact) < 1e-9);
  }

  // s = d: the (s-d) factor kills the integral term
  auto zd = zeta_via_tube(tube, str.natural_mass(), Complex(1.0, 0.0), 1,
                          str.dimension(), str.cover_radius(), params);
  CHECK(zd.value == Complex(str.natural_mass(), 0.0));
}

TEST_CASE("two collars differ by the explicit integrable term") {
  auto str = cantor_string_scaled3(1.0);  // collar covers both radii below
  const double d1 = 1.0 / 12.0, d2 = 1.0 / 6.0;
  auto restricted = [&](double cap) {
    return [&str, cap](double t) {
      return strings::string_tube_volume(str, std::min(t, cap));
    };
  };
  OscQuadParams params;
  params.breakpoints = string_kinks(str, 1.0);
  params.breakpoints.push_back(d1);
  params.breakpoints.push_back(d2);

  for (Complex s : {Complex(0.9, 0.0), Complex(1.7, 4.0)}) {
    auto z1 = zeta_via_tube(restricted(d1),
                            strings::string_tube_volume(str, d1), s, 1,
                            str.dimension(), d1, params);
    auto z2 = zeta_via_tube(restricted(d2),
                            strings::string_tube_volume(str, d2), s, 1,
                            str.dimension(), d2, params);
    Complex lhs = z2.value - z1.value;
    Complex rhs =
        real_pow(d2, s - 1.0) * strings::string_tube_volume(str, d2) -
        real_pow(d1, s - 1.0) * strings::string_tube_volume(str, d1) -
        (s - 1.0) * strings::string_tube_power_integral(str, s - 2.0, d1, d2);
    CHECK(rel_err(lhs, rhs) < 1e-10);
  }
}

TEST_CASE("derivative formula on atoms and against finite differences") {
  auto dist = geometry::make_distance_oracle(cantor_ifs());
  geometry::GridScheme scheme;

  // atom at distance 1: log 1 = 0
  auto z1 = zeta_derivative(dist, atom_at(2.0, 1.0), Complex(1.5, 0.0), 1,
                            0.631, scheme);
  CHECK(std::abs(z1.value) < 1e-14);

  // atom at distance rho: w rho^{s-d} log rho
  Complex s(1.9, 0.8);
  auto z2 = zeta_derivative(dist, atom_at(0.5, 0.4), s, 1, 0.631, scheme);
  Complex expected =
      0.4 * real_pow(1.0 / 6.0, s - 1.0) * std::log(1.0 / 6.0);
  CHECK(rel_err(z2.value, expected) < 1e-9);

  // Cantor scene: central finite difference of the direct route
  geometry::WeightMeasure w{geometry::UniformBox{{{-0.5}, {1.5}}, 1.0}};
  geometry::GridScheme fine{1024, 4};
  Complex s0(1.6, 0.0);
  const double h = 1e-4;
  auto at = [&](Complex ss) {
    return zeta_direct(dist, w, ss, 1, 0.631, fine).value;
  };
  Complex fd = (at(s0 + h) - at(s0 - h)) / (2.0 * h);
  auto dz = zeta_derivative(dist, w, s0, 1, 0.631, fine);
  CHECK(rel_err(dz.value, fd) < 1e-4);
}

TEST_CASE("sup-norm zeta") {
  auto sys = cantor_ifs();
  auto de = geometry::make_distance_oracle(sys, 1e-10);
  auto ds = geometry::make_distance_oracle(sys, 1e-10,
                                           geometry::Metric::sup);
  geometry::GridScheme scheme{512, 4};
  geometry::WeightMeasure w{geometry::UniformBox{{{-0.5}, {1.5}}, 1.0}};
  Complex s(1.4, 0.7);
  auto a = zeta_direct(de, w, s, 1, 0.631, scheme);
  auto b = zeta_direct_sup(ds, w, s, 1, 0.631, scheme);
  CHECK(rel_err(a.value, b.value) < 1e-10);  // metrics coincide in 1D

  // 2D sandwich on atom scenes, real s > d
  geometry::IfsSystem sq;
  sq.ambient_dim = 2;
  for (double tx : {0.0, 2.0 / 3.0})
    for (double ty : {0.0, 2.0 / 3.0})
      sq.maps.push_back({1.0 / 3.0, {}, {tx, ty}});
  sq.bounding_box = {{0.0, 0.0}, {1.0, 1.0}};
  auto de2 = geometry::make_distance_oracle(sq, 1e-11);
  auto ds2 = geometry::make_distance_oracle(sq, 1e-11,
                                            geometry::Metric::sup);
  CounterRng rng(31);
  for (int i = 0; i < 10; ++i) {
    geometry::FiniteAtoms atoms;
    for (int k = 0; k < 4; ++k) {
      atoms.points.push_back({rng.uniform(i, 2 * k, -1.0, 2.0),
                              rng.uniform(i, 2 * k + 1, -1.0, 2.0)});
      atoms.weights.push_back(0.25);
    }
    geometry::WeightMeasure wa{atoms};
    double sr = rng.uniform(i, 30, 2.2, 3.5);
    double ze = zeta_direct(de2, wa, Complex(sr, 0.0), 2, 1.27,
                            geometry::GridScheme{})
                    .value.real();
    double zs = zeta_direct_sup(ds2, wa, Complex(sr, 0.0), 2, 1.27,
                                geometry::GridScheme{})
                    .value.real();
    double f = std::pow(2.0, (sr - 2.0) / 2.0);
    CHECK(zs <= f * ze * (1.0 + 1e-9) + 1e-12);
    CHECK(zs >= ze / f * (1.0 - 1e-9) - 1e-12);
  }
}

TEST_CASE("scaling covariance of the direct route") {
  const double k = 3.0;
  auto sys = cantor_ifs();
  geometry::IfsSystem scaled = sys;
  for (auto& m : scaled.maps) m.translation[0] *= k;
  scaled.bounding_box = {{0.0}, {k}};
  // the integrand d^{s-d} amplifies absolute distance error near the
  // attractor, so the oracles run well below the 1e-6 gate
  auto d0 = geometry::make_distance_oracle(sys, 1e-14);
  auto d1 = geometry::make_distance_oracle(scaled, 1e-14);
  geometry::WeightMeasure w0{geometry::UniformBox{{{-0.5}, {1.5}}, 1.0}};
  // pushforward of Lebesgue under x -> kx carries density 1/k
  geometry::WeightMeasure w1{
      geometry::UniformBox{{{-0.5 * k}, {1.5 * k}}, 1.0 / k}};
  geometry::GridScheme scheme{512, 4};
  for (Complex s : {Complex(1.2, 0.0), Complex(1.9, 2.0)}) {
    auto z0 = zeta_direct(d0, w0, s, 1, 0.631, scheme);
    auto z1 = zeta_direct(d1, w1, s, 1, 0.631, scheme);
    CHECK(rel_err(z1.value, real_pow(k, s - 1.0) * z0.value) < 1e-6);
  }
}

TEST_CASE("interval product identity") {
  // the weight-factor binomial at k = 1, b - a = 1 reproduces 2t + 1
  for (double t : {0.1, 0.5, 1.0}) {
    double expanded = 0.0;
    for (int l = 0; l <= 1; ++l)
      expanded += binomial(1, l) * std::pow(2.0 * t, 1 - l) * std::pow(1.0, l);
    CHECK(expanded == doctest::Approx(2.0 * t + 1.0));
  }

  auto str = builders::cantor_string(0.5);
  auto id = interval_product_identity(str, 0.0, 1.0, -1.0, 2.0, 1, 2.5);
  CHECK(rel_err(id.lhs, id.rhs) < 1e-10);

  auto id2 = interval_product_identity(str, 0.25, 0.75, -1.0, 2.0, 2, 3.3);
  CHECK(rel_err(id2.lhs, id2.rhs) < 1e-9);

  // degenerate b - a = 0 keeps only the l = 0 term
  auto deg = interval_product_identity(str, 0.5, 0.5, -1.0, 2.0, 1, 2.5);
  Complex delta = std::min(0.5 - (-1.0), 2.0 - 0.5);
  Complex l0 = -(1.0 / 3.0) * 2.0 *
               strings::string_tube_power_integral(str, Complex(0.5, 0.0),
                                                   0.0, delta.real());
  CHECK(rel_err(deg.rhs, l0) < 1e-12);
  CHECK(rel_err(deg.lhs, deg.rhs) < 1e-9);

  CHECK_THROWS_AS(interval_product_identity(str, 1.0, 0.0, -1.0, 2.0, 1, 2.5),
                  InvalidInputError);
  CHECK_THROWS_AS(interval_product_identity(str, 0.0, 1.0, -1.0, 2.0, 1, 1.2),
                  DivergentAbscissaError);
}
