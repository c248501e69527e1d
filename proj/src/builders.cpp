#include "fraczeta/builders.hpp"

namespace fraczeta::builders {

geometry::IfsSystem cantor_ifs() {
  geometry::IfsSystem sys;
  sys.ambient_dim = 1;
  sys.maps = {{1.0 / 3.0, {}, {0.0}}, {1.0 / 3.0, {}, {2.0 / 3.0}}};
  sys.bounding_box = {{0.0}, {1.0}};
  return sys;
}

geometry::IfsSystem cantor_ifs_scaled3() {
  geometry::IfsSystem sys;
  sys.ambient_dim = 1;
  sys.maps = {{1.0 / 3.0, {}, {0.0}}, {1.0 / 3.0, {}, {2.0}}};
  sys.bounding_box = {{0.0}, {3.0}};
  return sys;
}

strings::FractalString cantor_string(double collar) {
  strings::FractalString str;
  str.family = strings::GeometricFamily{1.0 / 3.0, 1.0 / 3.0, 2};
  str.collar = collar;
  str.span = 1.0;
  return str;
}

strings::FractalString cantor_string_scaled3(double collar) {
  strings::FractalString str;
  str.family = strings::GeometricFamily{1.0, 1.0 / 3.0, 2};
  str.collar = collar;
  str.span = 3.0;
  return str;
}

nc::Mat sym2(double a, double b, double c) {
  nc::Mat m(2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = b;
  m(1, 1) = c;
  return m;
}

namespace {

nc::NcState family_state(nc::ParamFamily fam, double R) {
  nc::NcState state;
  state.n = fam.n;
  state.d = fam.d;
  state.norm_bound = R;
  state.components.push_back({1.0, std::move(fam)});
  return state;
}

}  // namespace

nc::NcState example2_state(double R) {
  nc::ParamFamily fam;
  fam.n = 2;
  fam.d = 1;
  fam.factors = {nc::Ifs1D{cantor_ifs()}};
  fam.base = {sym2(0, 0, 0)};
  fam.coeffs = {{sym2(0, 1, 0)}};
  fam.xi = nc::TraceState{};
  return family_state(std::move(fam), R);
}

nc::NcState example3_state(double R) {
  nc::ParamFamily fam;
  fam.n = 2;
  fam.d = 1;
  fam.factors = {nc::Ifs1D{cantor_ifs()}, nc::Ifs1D{cantor_ifs()}};
  fam.base = {sym2(0, 0, 0)};
  fam.coeffs = {{sym2(0, 1, 0)}, {sym2(1, 0, 1)}};
  fam.xi = nc::TraceState{};
  return family_state(std::move(fam), R);
}

nc::NcState example4_state(double R) {
  nc::ParamFamily fam;
  fam.n = 2;
  fam.d = 1;
  fam.factors = {nc::Ifs1D{cantor_ifs()}, nc::Interval1D{-0.5, 0.5},
                 nc::Interval1D{-0.5, 0.5}};
  fam.base = {sym2(0, 0, 0)};
  fam.coeffs = {{sym2(0, 1, 0)}, {sym2(1, 0, 0)}, {sym2(0, 0, 1)}};
  fam.xi = nc::TraceState{};
  return family_state(std::move(fam), R);
}

nc::NcWeight abc_gaussian_weight(double alpha, double half) {
  nc::WeightBoxFamily fam;
  fam.n = 2;
  fam.d = 1;
  fam.box = {{-half, -half, -half}, {half, half, half}};
  fam.base = {sym2(0, 0, 0)};
  fam.coeffs = {{sym2(1, 0, 0)}, {sym2(0, 1, 0)}, {sym2(0, 0, 1)}};
  fam.xi = nc::TraceState{};
  fam.density = nc::GaussianDensity{alpha};
  nc::NcWeight weight;
  weight.n = 2;
  weight.d = 1;
  weight.components.push_back({1.0, std::move(fam)});
  return weight;
}

namespace {

nc::NcScene example_scene(nc::NcState tau, double alpha, double half,
                          std::uint64_t seed, double hint) {
  nc::NcScene scene;
  scene.n = 2;
  scene.d = 1;
  scene.R = 2.0 * half;
  scene.tau = std::move(tau);
  scene.tau.norm_bound = scene.R;
  scene.nu = abc_gaussian_weight(alpha, half);
  scene.seed = seed;
  scene.abscissa_hint = hint;
  return scene;
}

}  // namespace

nc::NcScene example2_scene(double alpha, double half, std::uint64_t seed) {
  return example_scene(example2_state(2.0 * half), alpha, half, seed,
                       strings::cantor_dimension());
}

nc::NcScene example3_scene(double alpha, double half, std::uint64_t seed) {
  return example_scene(example3_state(2.0 * half), alpha, half, seed,
                       strings::cantor_dimension());
}

nc::NcScene example4_scene(double alpha, double half, std::uint64_t seed) {
  // the zero set of d(., tau) meets the weight support in positive measure,
  // so the relative dimension saturates at d
  return example_scene(example4_state(2.0 * half), alpha, half, seed, 1.0);
}

}  // namespace fraczeta::builders
