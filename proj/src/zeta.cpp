#include "fraczeta/zeta.hpp"

#include <algorithm>
#include <cmath>

#include "fraczeta/errors.hpp"

namespace fraczeta::zeta {

std::string method_name(Method m) {
  switch (m) {
    case Method::direct: return "direct";
    case Method::tube: return "tube";
    case Method::exact_string: return "exact-string";
    case Method::closed_form: return "closed-form";
  }
  return "?";
}

namespace {

void check_abscissa(Complex s, int d, double hint) {
  if (s == Complex(double(d), 0.0)) return;  // total-mass identity
  if (s.real() <= hint + kAbscissaGuard)
    throw DivergentAbscissaError(
        "Re s is at or left of the estimated abscissa", hint);
}

ZetaValue integrate_kernel(const geometry::DistanceFn& dist,
                           const geometry::WeightMeasure& nu, Complex s,
                           int d, double hint,
                           const geometry::Scheme& scheme, bool log_weight) {
  check_abscissa(s, d, hint);
  const Complex expo = s - double(d);
  geometry::Integral r = geometry::measure_integrate(
      nu,
      [&](std::span<const double> x) -> Complex {
        double t = dist(x);
        if (t <= 0.0) {
          // zero-distance points sit on a nu-null set; at s == d the
          // exponent vanishes and they carry their full weight
          if (!log_weight && expo == Complex(0.0, 0.0)) return {1.0, 0.0};
          return {0.0, 0.0};
        }
        Complex v = real_pow(t, expo);
        return log_weight ? v * std::log(t) : v;
      },
      scheme);
  return {r.value, r.err, Method::direct, s, hint};
}

}  // namespace

ZetaValue zeta_direct(const geometry::DistanceFn& dist,
                      const geometry::WeightMeasure& nu, Complex s,
                      int ambient_dim, double abscissa_hint,
                      const geometry::Scheme& scheme) {
  return integrate_kernel(dist, nu, s, ambient_dim, abscissa_hint, scheme,
                          false);
}

ZetaValue zeta_direct_sup(const geometry::DistanceFn& dist_sup,
                          const geometry::WeightMeasure& nu, Complex s,
                          int ambient_dim, double abscissa_hint,
                          const geometry::Scheme& scheme) {
  return integrate_kernel(dist_sup, nu, s, ambient_dim, abscissa_hint, scheme,
                          false);
}

ZetaValue zeta_derivative(const geometry::DistanceFn& dist,
                          const geometry::WeightMeasure& nu, Complex s,
                          int ambient_dim, double abscissa_hint,
                          const geometry::Scheme& scheme) {
  return integrate_kernel(dist, nu, s, ambient_dim, abscissa_hint, scheme,
                          true);
}

std::vector<double> string_kinks(const strings::FractalString& str,
                                 double t_max, int limit) {
  std::vector<double> out;
  auto push = [&](double t) {
    if (t > 0.0 && t < t_max) out.push_back(t);
  };
  push(str.collar);
  if (const auto* e = std::get_if<strings::ExplicitLengths>(&str.family)) {
    for (double l : e->lengths) push(l / 2.0);
  } else {
    const auto& g = std::get<strings::GeometricFamily>(str.family);
    double m = g.base_length / 2.0;
    for (int i = 0; i < limit && m > 1e-280; ++i, m *= g.ratio) push(m);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ZetaValue zeta_via_tube(const TubeFn& tube, double nu_mass, Complex s,
                        int ambient_dim, double abscissa_hint, double delta,
                        const OscQuadParams& params) {
  if (!(delta > 0.0)) throw InvalidInputError("delta must be positive");
  check_abscissa(s, ambient_dim, abscissa_hint);
  const Complex expo = s - double(ambient_dim);
  if (expo == Complex(0.0, 0.0))
    return {Complex(nu_mass, 0.0), 0.0, Method::tube, s, abscissa_hint};

  // integral_0^delta t^{s-d-1} V(t) dt = integral e^{u (s-d)} V(e^u) du
  const double width =
      std::min(params.max_panel, M_PI / (2.0 * (1.0 + std::abs(s.imag()))));
  const auto& fine = gauss_legendre(params.order);
  const auto& coarse = gauss_legendre(std::max(2, params.order / 2));
  const double decay = std::max(0.05, s.real() - abscissa_hint);

  std::vector<double> breaks;  // in u, descending
  for (double t : params.breakpoints)
    if (t > 0.0 && t < delta) breaks.push_back(std::log(t));
  std::sort(breaks.begin(), breaks.end(), std::greater<>());
  std::size_t next_break = 0;

  Complex acc = 0.0;
  double err = 0.0;
  double u_hi = std::log(delta);
  int quiet = 0;
  int panels = 0;
  for (; panels < params.max_panels; ++panels) {
    while (next_break < breaks.size() && breaks[next_break] >= u_hi - 1e-14)
      ++next_break;
    double u_lo = u_hi - width;
    if (next_break < breaks.size() && breaks[next_break] > u_lo)
      u_lo = breaks[next_break];
    const double w = u_hi - u_lo;
    Complex cf = 0.0, cc = 0.0;
    for (int j = 0; j < params.order; ++j) {
      double u = u_lo + 0.5 * w * (1.0 + fine.nodes[j]);
      cf += 0.5 * w * fine.weights[j] * std::exp(u * expo) *
            tube(std::exp(u));
    }
    for (std::size_t j = 0; j < coarse.nodes.size(); ++j) {
      double u = u_lo + 0.5 * w * (1.0 + coarse.nodes[j]);
      cc += 0.5 * w * coarse.weights[j] * std::exp(u * expo) *
            tube(std::exp(u));
    }
    acc += cf;
    err += std::abs(cf - cc);
    u_hi = u_lo;
    // The integrand decays at least like e^{u decay}; once panel
    // contributions are negligible the geometric remainder is too.
    double scale = std::max(std::abs(acc), 1e-300);
    double rem = std::abs(cf) * std::exp(-decay * width) /
                 (1.0 - std::exp(-decay * width));
    if (std::abs(cf) < params.tail_rel * scale && rem < params.tail_rel * scale) {
      if (++quiet >= 3) {
        err += rem;
        break;
      }
    } else {
      quiet = 0;
    }
  }
  if (panels >= params.max_panels)
    throw AccuracyError("tube quadrature did not converge", err);

  Complex value = real_pow(delta, expo) * nu_mass - expo * acc;
  return {value, std::abs(expo) * err, Method::tube, s, abscissa_hint};
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double out = 1.0;
  for (int i = 0; i < k; ++i) out = out * (n - i) / (i + 1);
  return out;
}

ProductIdentity interval_product_identity(const strings::FractalString& str,
                                          double a, double b, double p,
                                          double q, int k, double s) {
  str.validate();
  if (!(p < a && a <= b && b < q))
    throw InvalidInputError("need p < a <= b < q");
  if (k < 1) throw InvalidInputError("k must be >= 1");
  const double dim = str.dimension();
  if (!(s > dim + k))
    throw DivergentAbscissaError("need s > dim + k", dim + k);

  const int d = 1;
  const double delta = std::min(a - p, q - b);
  const double c = b - a;
  const double qp = q - p;

  // rhs: binomial combination of shifted 1D tube-power integrals,
  // geometric tails in closed form.
  Complex rhs = 0.0;
  for (int l = 0; l <= k; ++l) {
    Complex shifted = strings::string_tube_power_integral(
        str, Complex(s - l - d - 1.0, 0.0), 0.0, delta);
    rhs += binomial(k, l) * std::pow(2.0, k - l) * std::pow(c, l) * shifted;
  }
  rhs *= -std::pow(qp, -k);

  // lhs: numerical integral of the (k+1)-dimensional sup-norm tube volume
  //   V(t) (2t + c)^k / (q-p)^k
  // in u = log t with panels aligned to the kinks of V.
  const auto& rule = gauss_legendre(16);
  auto integrand = [&](double t) {
    return std::pow(t, s - d - k - 1) * strings::string_tube_volume(str, t) *
           std::pow(2.0 * t + c, k);
  };
  // collect kink locations (gap half-lengths and the collar) within (0, delta]
  std::vector<double> kinks{delta};
  auto push = [&](double t) {
    if (t > 0.0 && t < delta) kinks.push_back(t);
  };
  push(str.collar);
  if (const auto* e = std::get_if<strings::ExplicitLengths>(&str.family)) {
    for (double l : e->lengths) push(l / 2.0);
  } else {
    const auto& g = std::get<strings::GeometricFamily>(str.family);
    double m = g.base_length / 2.0;
    for (int i = 0; i < 400 && m > 1e-280; ++i, m *= g.ratio) push(m);
  }
  std::sort(kinks.begin(), kinks.end(), std::greater<>());
  kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());

  // one smooth segment [lo, hi], Gauss-16 in u = log t, subdivided to 0.25
  auto segment = [&](double lo, double hi) {
    double u_hi = std::log(hi), u_lo = std::log(lo);
    int sub = std::max(1, static_cast<int>(std::ceil((u_hi - u_lo) / 0.25)));
    double h = (u_hi - u_lo) / sub;
    double piece = 0.0;
    for (int m = 0; m < sub; ++m) {
      for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        double u = u_lo + m * h + 0.5 * h * (1.0 + rule.nodes[j]);
        double t = std::exp(u);
        piece += 0.5 * h * rule.weights[j] * t * integrand(t);
      }
    }
    return piece;
  };

  const double decay = s - d - k - dim;  // integrand mass below t is O(t^decay)
  double lhs_acc = 0.0;
  double hi = delta;
  for (std::size_t seg = 1; seg < kinks.size(); ++seg) {
    lhs_acc += segment(kinks[seg], hi);
    hi = kinks[seg];
    if (std::pow(hi, decay) < 1e-16 * std::abs(lhs_acc)) break;
  }
  // below the last resolved kink the integrand is smooth per octave
  while (hi > 1e-280 &&
         std::pow(hi, decay) > 1e-16 * std::max(1e-300, std::abs(lhs_acc))) {
    lhs_acc += segment(hi * 0.5, hi);
    hi *= 0.5;
  }
  Complex lhs = -std::pow(qp, -k) * lhs_acc;
  return {lhs, rhs};
}

}  // namespace fraczeta::zeta
