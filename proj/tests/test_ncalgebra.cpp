#include <doctest.h>

#include <cmath>

#include "fraczeta/errors.hpp"
#include "fraczeta/ncalgebra.hpp"
#include "helpers.hpp"

using namespace fraczeta;
using namespace fraczeta::nc;
using builders::cantor_ifs;
using builders::example2_state;
using builders::sym2;

namespace {

MatrixTuple tuple1(const Mat& m, double bound = 0.0) {
  MatrixTuple x;
  x.n = m.dim();
  x.d = 1;
  x.entries = {m};
  x.norm_bound = bound;
  return x;
}

NcState atom_state(std::vector<Mat> points, int n) {
  NcState tau;
  tau.n = n;
  tau.d = 1;
  std::vector<NcAtom> atoms;
  for (auto& p : points) {
    NcAtom a;
    a.point = tuple1(p);
    a.xi = TraceState{};
    a.weight = 1.0 / points.size();
    atoms.push_back(std::move(a));
  }
  tau.components = {{1.0, std::move(atoms)}};
  return tau;
}

}  // namespace

TEST_CASE("energy polynomial") {
  // d = 1, X = [[0,1],[1,0]]: X^2 = I
  Mat x = sym2(0, 1, 0);
  Mat e = energy(tuple1(x));
  CHECK(e(0, 0) == doctest::Approx(1.0));
  CHECK(e(1, 1) == doctest::Approx(1.0));
  CHECK(e(0, 1) == doctest::Approx(0.0));

  Mat zero(2);
  CHECK(energy(tuple1(zero)).max_abs() == 0.0);

  // d = 2 random pair against a naive loop product-sum
  CounterRng rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    MatrixTuple x2;
    x2.n = 2;
    x2.d = 2;
    x2.entries = {sym2(rng.uniform(trial, 0, -1, 1), rng.uniform(trial, 1, -1, 1),
                       rng.uniform(trial, 2, -1, 1)),
                  sym2(rng.uniform(trial, 3, -1, 1), rng.uniform(trial, 4, -1, 1),
                       rng.uniform(trial, 5, -1, 1))};
    Mat naive(2);
    for (const auto& m : x2.entries)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k) naive(i, j) += m(i, k) * m(k, j);
    Mat e2 = energy(x2);
    double gap = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) gap = std::max(gap, std::abs(e2(i, j) - naive(i, j)));
    CHECK(gap <= 1e-14);
    // positive semidefinite
    CHECK(sym_eigs(e2).front() >= -1e-12 * std::max(1.0, e2.max_abs()));
  }
}

TEST_CASE("symmetric eigenvalues") {
  Mat diag = sym2(3, 0, 1);
  auto e1 = sym_eigs(diag);
  CHECK(e1[0] == doctest::Approx(1.0));
  CHECK(e1[1] == doctest::Approx(3.0));

  auto e2 = sym_eigs(sym2(0, 1, 0));
  CHECK(e2[0] == doctest::Approx(-1.0));
  CHECK(e2[1] == doctest::Approx(1.0));

  // closed form against characteristic-polynomial roots
  CounterRng rng(13);
  for (int i = 0; i < 50; ++i) {
    double a = rng.uniform(i, 0, -3, 3), b = rng.uniform(i, 1, -3, 3),
           c = rng.uniform(i, 2, -3, 3);
    auto e = sym_eigs(sym2(a, b, c));
    double tr = a + c, det = a * c - b * b;
    double disc = std::sqrt(tr * tr / 4.0 - det);
    CHECK(std::abs(e[0] - (tr / 2.0 - disc)) < 1e-12);
    CHECK(std::abs(e[1] - (tr / 2.0 + disc)) < 1e-12);
  }

  // Jacobi path for larger n against known spectrum
  Mat m(4);
  for (int i = 0; i < 4; ++i) m(i, i) = 2.0;
  for (int i = 0; i + 1 < 4; ++i) m(i, i + 1) = m(i + 1, i) = -1.0;
  auto eigs = sym_eigs(m);
  for (int k = 1; k <= 4; ++k)
    CHECK(eigs[k - 1] ==
          doctest::Approx(2.0 - 2.0 * std::cos(k * M_PI / 5.0)).epsilon(1e-12));

  Mat asym(2);
  asym(0, 1) = 1.0;
  CHECK_THROWS_AS(sym_eigs(asym), InvalidInputError);
}

TEST_CASE("spectral support minima") {
  Mat m = sym2(1, 0, 4);
  PureVector e1{{1.0, 0.0}}, e2{{0.0, 1.0}};
  CHECK(spectral_support_min(m, e1) == doctest::Approx(1.0));
  CHECK(spectral_support_min(m, e2) == doctest::Approx(4.0));
  CHECK(spectral_support_min(m, TraceState{}) == doctest::Approx(1.0));

  // all projection weights below eps
  CHECK_THROWS_AS(spectral_support_min(m, e1, 2.0), EmptySupportError);
}

TEST_CASE("polynomial evaluation and the norm bound") {
  NcPolynomial one = NcPolynomial::one();
  MatrixTuple x = tuple1(sym2(0.3, -0.7, 1.1));
  CMat ev = nc_poly_eval(one, x);
  CHECK(ev.re(0, 0) == doctest::Approx(1.0));
  CHECK(ev.re(0, 1) == doctest::Approx(0.0));

  // X1 X2 at ([[0,1],[1,0]], [[1,0],[0,-1]]) = [[0,-1],[1,0]]
  MatrixTuple pair;
  pair.n = 2;
  pair.d = 2;
  pair.entries = {sym2(0, 1, 0), sym2(1, 0, -1)};
  NcPolynomial g;
  g.terms.push_back({Complex(1.0, 0.0), {0, 1}});
  CMat prod = nc_poly_eval(g, pair);
  CHECK(prod.re(0, 0) == doctest::Approx(0.0));
  CHECK(prod.re(0, 1) == doctest::Approx(-1.0));
  CHECK(prod.re(1, 0) == doctest::Approx(1.0));

  NcPolynomial bad;
  bad.terms.push_back({Complex(1.0, 0.0), {5}});
  CHECK_THROWS_AS(nc_poly_eval(bad, pair), InvalidInputError);

  // |g(T)| <= |g|_R over random polynomials and tuples with |T_i| <= R
  CounterRng rng(19);
  const double R = 1.5;
  for (int trial = 0; trial < 100; ++trial) {
    NcPolynomial rg;
    int terms = 1 + int(rng.uniform01(trial, 100) * 3);
    for (int t = 0; t < terms; ++t) {
      NcPolynomial::Term term;
      term.coeff = {rng.uniform(trial, 10 + 4 * t, -1, 1),
                    rng.uniform(trial, 11 + 4 * t, -1, 1)};
      int len = int(rng.uniform01(trial, 12 + 4 * t) * 4);
      for (int l = 0; l < len; ++l)
        term.word.push_back(
            int(rng.uniform01(trial, 13 + 4 * t + 17 * l) * 2));
      rg.terms.push_back(std::move(term));
    }
    MatrixTuple T;
    T.n = 2;
    T.d = 2;
    for (int i = 0; i < 2; ++i) {
      Mat m = sym2(rng.uniform(trial, 50 + 3 * i, -1, 1),
                   rng.uniform(trial, 51 + 3 * i, -1, 1),
                   rng.uniform(trial, 52 + 3 * i, -1, 1));
      double nrm = operator_norm(m);
      if (nrm > R) m = m * (R / nrm * 0.999);
      T.entries.push_back(m);
    }
    CHECK(operator_norm(nc_poly_eval(rg, T)) <= rg.norm_R(R) + 1e-10);
  }
}

TEST_CASE("trace and pure-vector expectations") {
  Mat m = sym2(2, 1, 4);
  CHECK(vector_expectation(TraceState{}, m) == doctest::Approx(3.0));
  PureVector v{{std::sqrt(0.5), std::sqrt(0.5)}};
  CHECK(vector_expectation(v, m) == doctest::Approx(0.5 * (2 + 1 + 1 + 4)));
}

TEST_CASE("distance to atom states") {
  // tau = trace x delta_{Y0} with X - Y0 = [[0,1],[1,0]]: distance 1
  Mat y0 = sym2(0.5, 0.0, -0.5);
  Mat x = y0 + sym2(0, 1, 0);
  auto tau = atom_state({y0}, 2);
  CHECK(nc_distance(tuple1(x), tau, 1e-12) == doctest::Approx(1.0));

  // pure xi = e2 with X - Y = diag(1, 2): energy diag(1,4), support min 4
  NcState pure = atom_state({sym2(0, 0, 0)}, 2);
  std::get<std::vector<NcAtom>>(pure.components[0].support)[0].xi =
      PureVector{{0.0, 1.0}};
  CHECK(nc_distance(tuple1(sym2(1, 0, 2)), pure, 1e-12) ==
        doctest::Approx(2.0));

  // distance vanishes on the support atoms
  CounterRng rng(23);
  for (int i = 0; i < 10; ++i) {
    std::vector<Mat> pts;
    for (int a = 0; a < 3; ++a)
      pts.push_back(sym2(rng.uniform(i, 3 * a, -1, 1),
                         rng.uniform(i, 3 * a + 1, -1, 1),
                         rng.uniform(i, 3 * a + 2, -1, 1)));
    auto tau2 = atom_state(pts, 2);
    for (const auto& p : pts)
      CHECK(nc_distance(tuple1(p), tau2, 1e-12) <= 1e-10);
  }
}

TEST_CASE("2x2 closed-form identity for the minimal eigenvalue magnitude") {
  CounterRng rng(29);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    double a = rng.uniform(i, 0, -2, 2), bp = rng.uniform(i, 1, -2, 2),
           c = rng.uniform(i, 2, -2, 2);
    auto eigs = sym_eigs(sym2(a, bp, c));
    double direct = std::min(std::abs(eigs[0]), std::abs(eigs[1]));
    double closed = std::abs(std::abs((a + c) / 2.0) -
                             std::sqrt((a - c) * (a - c) / 4.0 + bp * bp));
    worst = std::max(worst, std::abs(direct - closed));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("distance to the matrix Cantor family") {
  auto tau = example2_state(8.0);
  // depth-K cell endpoints are genuine Cantor points; the closed form is
  // 1-Lipschitz in p, so the endpoint minimum is within 3^-K of the truth
  const int K = 14;
  std::vector<double> endpoints;
  const double width = std::pow(3.0, -K);
  for (std::uint32_t mask = 0; mask < (1u << K); ++mask) {
    double lo = 0.0, w = 1.0;
    for (int j = 0; j < K; ++j) {
      w /= 3.0;
      if (mask & (1u << j)) lo += 2.0 * w;
    }
    endpoints.push_back(lo);
    endpoints.push_back(lo + width);
  }
  CounterRng rng(37);
  double worst = 0.0;
  for (int i = 0; i < 60; ++i) {
    double a = rng.uniform(i, 0, -2, 2), b = rng.uniform(i, 1, -2, 2),
           c = rng.uniform(i, 2, -2, 2);
    double got = nc_distance(tuple1(sym2(a, b, c)), tau, 1e-12);
    double best = 1e300;
    for (double p : endpoints)
      best = std::min(best, std::abs(std::abs((a + c) / 2.0) -
                                     std::sqrt((a - c) * (a - c) / 4.0 +
                                               (b - p) * (b - p))));
    worst = std::max(worst, std::abs(got - best));
  }
  CHECK(worst <= 3.0 * width);
}

TEST_CASE("distance is bounded by R on the norm ball") {
  auto tau = example2_state(2.0);
  CounterRng rng(43);
  for (int i = 0; i < 50; ++i) {
    Mat m = sym2(rng.uniform(i, 0, -1, 1), rng.uniform(i, 1, -1, 1),
                 rng.uniform(i, 2, -1, 1));
    double nrm = operator_norm(m);
    const double R = 2.0;
    if (nrm > R) m = m * (R / nrm);
    CHECK(nc_distance(tuple1(m), tau, 1e-10) <= R + 1e-9);
  }
}

TEST_CASE("scalar reduction of the distance") {
  // n = 1: distance equals the 1D attractor distance
  NcState tau;
  tau.n = 1;
  tau.d = 1;
  ParamFamily fam;
  fam.n = 1;
  fam.d = 1;
  fam.factors = {Ifs1D{cantor_ifs()}};
  Mat zero(1), one(1);
  one(0, 0) = 1.0;
  fam.base = {zero};
  fam.coeffs = {{one}};
  fam.xi = TraceState{};
  tau.components = {{1.0, std::move(fam)}};

  auto sys = cantor_ifs();
  CounterRng rng(47);
  for (int i = 0; i < 30; ++i) {
    double x = rng.uniform(i, 0, -1.0, 2.0);
    Mat xm(1);
    xm(0, 0) = x;
    double dn = nc_distance(tuple1(xm), tau, 1e-11);
    double dc = geometry::attractor_distance(sys, std::span(&x, 1), 1e-11);
    CHECK(std::abs(dn - dc) <= 1e-10);
  }
}

TEST_CASE("tensor distances") {
  Mat y = sym2(0, 0, 0);
  auto tau = atom_state({y}, 2);
  // factors at distances 1 and 1: sqrt(2); sup variant: 1
  MatrixTuple x1 = tuple1(sym2(0, 1, 0));
  std::vector<MatrixTuple> xs{x1, x1};
  std::vector<NcState> taus{tau, tau};
  CHECK(tensor_distance(xs, taus, 1e-12) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(tensor_distance_sup(xs, taus, 1e-12) == doctest::Approx(1.0));

  // one factor at distance 0
  std::vector<MatrixTuple> xs2{tuple1(y), tuple1(sym2(1, 0, 1) + y)};
  CHECK(tensor_distance(xs2, taus, 1e-12) == doctest::Approx(1.0));
  CHECK(tensor_distance_sup(xs2, taus, 1e-12) == doctest::Approx(1.0));

  // per-factor (0, 2): sup variant picks 2
  std::vector<MatrixTuple> xs3{tuple1(y), tuple1(sym2(2, 0, 2) + y)};
  CHECK(tensor_distance_sup(xs3, taus, 1e-12) == doctest::Approx(2.0));
}
