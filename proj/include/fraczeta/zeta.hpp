#pragma once

#include <functional>
#include <string>

#include "fraczeta/geometry.hpp"
#include "fraczeta/numeric.hpp"
#include "fraczeta/strings.hpp"

namespace fraczeta::zeta {

enum class Method { direct, tube, exact_string, closed_form };

std::string method_name(Method m);

struct ZetaValue {
  Complex value;
  double err = 0.0;
  Method method = Method::direct;
  Complex s;
  double abscissa_hint = 0.0;
};

// Evaluators refuse Re s <= hint + kAbscissaGuard rather than silently
// diverge; s == d exactly is the total-mass identity and always allowed.
inline constexpr double kAbscissaGuard = 0.01;

// nu( d(x)^{s-d} ) by quadrature against the weight measure. Points with
// d(x) == 0 contribute nothing (they carry no mass right of the abscissa).
ZetaValue zeta_direct(const geometry::DistanceFn& dist,
                      const geometry::WeightMeasure& nu, Complex s,
                      int ambient_dim, double abscissa_hint,
                      const geometry::Scheme& scheme);

// Same contract under the sup-norm distance oracle.
ZetaValue zeta_direct_sup(const geometry::DistanceFn& dist_sup,
                          const geometry::WeightMeasure& nu, Complex s,
                          int ambient_dim, double abscissa_hint,
                          const geometry::Scheme& scheme);

// nu( d(x)^{s-d} log d(x) ).
ZetaValue zeta_derivative(const geometry::DistanceFn& dist,
                          const geometry::WeightMeasure& nu, Complex s,
                          int ambient_dim, double abscissa_hint,
                          const geometry::Scheme& scheme);

using TubeFn = std::function<double(double)>;

struct OscQuadParams {
  int order = 16;           // Gauss nodes per panel
  double max_panel = 0.5;   // cap on panel width in u = log t
  double tail_rel = 1e-13;  // truncation target relative to the total
  int max_panels = 200000;
  // known kinks of the tube function; panels are aligned to them so each
  // panel sees a smooth integrand
  std::vector<double> breakpoints;
};

// the kinks of a string tube volume inside (0, t_max]
std::vector<double> string_kinks(const strings::FractalString& str,
                                 double t_max, int limit = 240);

// delta^{s-d} nu(1) - (s-d) * integral_0^delta t^{s-d-1} V(t) dt with the
// integral done in u = log t; panel width is capped by
// pi / (2 (1 + |Im s|)) so the phase turns slowly per panel.
ZetaValue zeta_via_tube(const TubeFn& tube, double nu_mass, Complex s,
                        int ambient_dim, double abscissa_hint, double delta,
                        const OscQuadParams& params = {});

double binomial(int n, int k);

struct ProductIdentity {
  Complex lhs;  // from the (k+1)-dimensional sup-norm tube integral
  Complex rhs;  // from the binomial combination of shifted 1D evaluations
};

// Shift-property identity for mu (x) uniform-[a,b]^k against
// nu (x) uniform-[p,q]^k in the sup metric, with mu/nu the string scene.
// Both sides equal -(q-p)^{-k} integral_0^delta t^{s-d-k-1} V(t)
// (2t + b - a)^k dt, computed along the two different routes.
ProductIdentity interval_product_identity(const strings::FractalString& str,
                                          double a, double b, double p,
                                          double q, int k, double s);

}  // namespace fraczeta::zeta
