#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "fraczeta/ncalgebra.hpp"
#include "fraczeta/zeta.hpp"

namespace fraczeta::nc {

struct UniformDensity {};
struct GaussianDensity {
  double alpha = 1.0;  // density exp(-alpha * |theta|^2)
};
using Density = std::variant<UniformDensity, GaussianDensity>;

// Weight supported on an affinely embedded parameter box with a density on
// the parameters: nu(f) = scale * integral <xi, f(X(theta)) xi>
// density(theta) dtheta.
struct WeightBoxFamily {
  int n = 2, d = 1;
  geometry::Box box;  // 1..3 parameters
  std::vector<Mat> base;
  std::vector<std::vector<Mat>> coeffs;  // [param][entry]
  VectorPart xi;
  Density density;
  double scale = 1.0;

  MatrixTuple at(std::span<const double> theta) const;
  double density_at(std::span<const double> theta) const;
  double mass() const;  // closed form (erf products for Gaussian)
  void validate() const;
};

struct WeightComponent {
  double weight = 1.0;
  std::variant<std::vector<NcAtom>, WeightBoxFamily> v;
};

struct NcWeight {
  int n = 1, d = 1;
  std::vector<WeightComponent> components;
  double mass() const;
  void validate() const;
};

struct NcScene {
  NcState tau;
  NcWeight nu;
  NcPolynomial g = NcPolynomial::one();
  int n = 1, d = 1;
  double R = 1.0;
  std::uint64_t seed = 1;
  double abscissa_hint = 0.0;
  // Samples with distance <= floor are excluded; left of Re s = d a zero
  // distance without a declared floor is refused.
  double distance_floor = 0.0;

  void validate() const;
};

struct NcGrid {
  int panels = 24;
  int order = 2;
};
struct NcMc {
  std::uint64_t samples = 100000;
};
using NcScheme = std::variant<NcGrid, NcMc>;

struct TubeRouteParams {
  int t_points = 160;
  double decades = 5.0;  // sampled range below delta in log10
  NcScheme scheme = NcGrid{};
};

// Evaluates the scene's zeta functional. Distances on quadrature lattices
// are the dominant cost and are cached keyed by lattice, so grids over many
// s values reuse them.
class Evaluator {
 public:
  explicit Evaluator(NcScene scene, double dist_tol = 1e-10);

  const NcScene& scene() const { return scene_; }

  // [zeta_tau(s, nu)](g) = nu( d(., tau)^{s-d} g(.) )
  zeta::ZetaValue zeta(Complex s, const NcScheme& scheme) const;
  // weight the integrand by log d(., tau)
  zeta::ZetaValue zeta_derivative(Complex s, const NcScheme& scheme) const;
  // nu^{tau,t}(g)
  geometry::Integral tube(double t, const NcScheme& scheme) const;
  // delta^{s-d} nu(g) - (s-d) integral_0^delta t^{s-d-1} nu^{tau,t}(g) dt
  // with the tube functional sampled on a log grid and interpolated
  // piecewise-linearly before the Mellin integral.
  zeta::ZetaValue zeta_via_tube(Complex s, double delta,
                                const TubeRouteParams& params) const;

  geometry::Integral nu_of_g(const NcScheme& scheme) const;
  double nu_mass() const { return scene_.nu.mass(); }
  // max d(X, tau) over the weight's quadrature support; informs delta
  double max_support_distance(const NcScheme& scheme) const;

 private:
  struct Lattice {
    std::vector<double> wdens;  // quadrature weight * density * scale
    std::vector<double> dist;
    std::vector<Complex> gexp;  // <xi, g(X) xi>
  };
  const Lattice& lattice(std::size_t comp, const NcScheme& scheme,
                         bool coarse) const;
  template <typename Kernel>
  geometry::Integral accumulate(const NcScheme& scheme, Kernel k) const;

  NcScene scene_;
  double dist_tol_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, Lattice> cache_;
};

struct Translate {
  MatrixTuple offset;  // X -> X - offset
};
struct Scale {
  double k = 1.0;  // X -> k X
};
struct Rotate {
  std::vector<double> o;  // d x d special orthogonal, row-major
};
struct Conjugate {
  Mat u;  // n x n orthogonal; needs a tracial tau
};
using Transform = std::variant<Translate, Scale, Rotate, Conjugate>;

// Pushes tau and nu forward; g is pulled back where the polynomial algebra
// allows it (Scale, Rotate) so evaluations at g = 1 compare directly.
NcScene transform_scene(const NcScene& scene, const Transform& op);

struct DecompositionSplit {
  double a1 = 0.5, a2 = 0.5;
  NcState tau1, tau2;
};

struct DecompositionReport {
  double linearity_gap = 0.0, linearity_tol = 0.0;
  std::vector<Complex> s_grid;
  std::vector<Complex> h_values;  // zeta_tau - zeta_tau1 per grid point
  std::vector<double> h_bounds;   // truncated-integral bound per grid point
  bool h_within_bounds = true;
  double min_distance_to_tau2 = 0.0;
  bool separation_ok = false;
  double max_tube_tau2_below_eps = 0.0;
  double epsilon = 0.0, delta = 0.0;
};

// Verifies the decomposition rules: linearity in nu, the remainder
// h = zeta_tau - zeta_tau1 on the grid, and (when separation_eps > 0) the
// support separation with its truncated-integral bound. Throws
// SeparationViolatedError with a witness when the claimed separation fails.
DecompositionReport decomposition_check(const NcScene& scene,
                                        const DecompositionSplit& split,
                                        std::span<const Complex> s_grid,
                                        double separation_eps,
                                        const NcScheme& scheme);

}  // namespace fraczeta::nc
