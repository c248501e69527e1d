#include <doctest.h>

#include <cmath>

#include "fraczeta/complexdims.hpp"
#include "fraczeta/errors.hpp"
#include "fraczeta/minkowski.hpp"
#include "helpers.hpp"

using namespace fraczeta;
using namespace fraczeta::minkowski;
using builders::cantor_string;

namespace {

TubeSamples cantor_samples(double tmin, double tmax, int points) {
  auto str = cantor_string(0.5);
  auto grid = log_grid(tmin, tmax, points, std::log(3.0));
  return sample_tube(
      [&](double t) { return strings::string_tube_volume(str, t); }, grid, 1,
      std::log(3.0));
}

}  // namespace

TEST_CASE("tube sampling hits the string oracle") {
  auto str = cantor_string(0.5);
  std::vector<double> grid{1.0 / 18.0, 1.0 / 6.0};
  auto samples = sample_tube(
      [&](double t) { return strings::string_tube_volume(str, t); }, grid, 1);
  CHECK(samples.pairs[0].second == doctest::Approx(8.0 / 9.0));
  CHECK(samples.pairs[1].second == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("Cantor dimension estimate brackets log2/log3") {
  auto est = estimate_dims(cantor_samples(1e-6, 1e-1, 120));
  CHECK(est.lower_dim >= 0.61);
  CHECK(est.upper_dim <= 0.65);
  CHECK(est.lower_dim <= strings::cantor_dimension() + 0.01);
  CHECK(est.upper_dim >= strings::cantor_dimension() - 0.01);
  // Minkowski nondegeneracy: contents positive and finite
  CHECK(est.lower_content > 0.0);
  CHECK(est.upper_content >= est.lower_content);
  CHECK(std::isfinite(est.upper_content));
  CHECK_FALSE(est.strip_violation);
}

TEST_CASE("estimates bracket the Moran root as the window shrinks") {
  const double moran = complexdims::real_root({{{2.0, 1.0 / 3.0, 0.0}}, ""});
  for (double tmax : {1e-1, 5e-2, 2.5e-2}) {
    auto est = estimate_dims(cantor_samples(1e-6, tmax, 120));
    CHECK(est.lower_dim <= moran + 0.01);
    CHECK(est.upper_dim >= moran - 0.01);
    CHECK(est.upper_dim - est.lower_dim <= 0.04);
  }
}

TEST_CASE("point and interval scenes") {
  // point attractor with nu Lebesgue on [-1, 1]: V(t) = 2t
  auto grid = log_grid(1e-6, 1e-1, 80);
  auto point = sample_tube([](double t) { return 2.0 * t; }, grid, 1);
  auto est = estimate_dims(point);
  CHECK(est.lower_dim == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(est.upper_dim == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(est.lower_content == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(est.upper_content == doctest::Approx(2.0).epsilon(1e-9));

  // full interval with collar: V(t) = 1 + 2t
  auto iv = sample_tube([](double t) { return 1.0 + 2.0 * t; }, grid, 1);
  auto est2 = estimate_dims(iv);
  CHECK(est2.lower_dim == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(est2.upper_dim == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(est2.lower_content == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("dimension ordering and bounds") {
  auto est = estimate_dims(cantor_samples(1e-5, 1e-1, 90));
  CHECK(est.lower_dim <= est.upper_dim);
  CHECK(est.lower_dim >= 0.0);
  CHECK(est.upper_dim <= 1.0);
}

TEST_CASE("input validation") {
  auto grid = log_grid(1e-3, 1e-1, 6);
  auto s = sample_tube([](double t) { return t; }, grid, 1);
  CHECK_THROWS_AS(estimate_dims(s), InvalidInputError);  // too few samples

  auto narrow = log_grid(1e-2, 1e-1, 20);
  auto s2 = sample_tube([](double t) { return t; }, narrow, 1);
  CHECK_THROWS_AS(estimate_dims(s2), InvalidInputError);  // under 2 decades

  CHECK_THROWS_AS(log_grid(0.0, 1.0, 10), InvalidInputError);
}

TEST_CASE("period-aligned grids") {
  auto grid = log_grid(1e-4, 1e-1, 50, std::log(3.0));
  // steps divide the period
  double step = std::log(grid[1] / grid[0]);
  double per = std::log(3.0) / step;
  CHECK(per == doctest::Approx(std::round(per)).epsilon(1e-9));
}
