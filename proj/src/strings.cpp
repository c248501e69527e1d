#include "fraczeta/strings.hpp"

#include <algorithm>
#include <cmath>

#include "fraczeta/errors.hpp"

namespace fraczeta::strings {

namespace {

// sum_{i >= i0} N^i m_i^z with m_i = m0 r^i; |N r^{Re z}| < 1 required.
Complex geometric_power_tail(double m0, double r, int mult, Complex z,
                             double i0) {
  Complex q = double(mult) * real_pow(r, z);
  if (std::abs(q) >= 1.0)
    throw DivergentAbscissaError("geometric tail diverges",
                                 std::log(double(mult)) / std::log(1.0 / r));
  Complex qi0 = std::pow(double(mult), i0) * std::exp(z * (i0 * std::log(r)));
  return real_pow(m0, z) * qi0 / (1.0 - q);
}

double head_count(int mult, int upto) {  // sum_{i < upto} mult^i
  if (upto <= 0) return 0.0;
  if (mult == 1) return upto;
  return (std::pow(double(mult), upto) - 1.0) / (mult - 1);
}

// smallest i >= 0 with m0 r^i < x (strictly below x)
int first_below(double m0, double r, double x) {
  if (m0 < x) return 0;
  double i = std::log(m0 / x) / std::log(1.0 / r);
  int k = static_cast<int>(std::floor(i));
  while (m0 * std::pow(r, k) >= x) ++k;
  return k;
}

// smallest i >= 0 with m0 r^i <= x
int first_at_or_below(double m0, double r, double x) {
  if (m0 <= x) return 0;
  double i = std::log(m0 / x) / std::log(1.0 / r);
  int k = static_cast<int>(std::floor(i));
  while (m0 * std::pow(r, k) > x) ++k;
  return k;
}

}  // namespace

void FractalString::validate() const {
  if (!(collar > 0.0)) throw InvalidInputError("string collar must be > 0");
  if (const auto* e = std::get_if<ExplicitLengths>(&family)) {
    for (double l : e->lengths)
      if (!(l > 0.0)) throw InvalidInputError("gap lengths must be positive");
  } else {
    const auto& g = std::get<GeometricFamily>(family);
    if (!(g.base_length > 0.0))
      throw InvalidInputError("base gap length must be positive");
    if (!(g.ratio > 0.0 && g.ratio < 1.0))
      throw InvalidInputError("gap ratio must lie in (0,1)");
    if (g.multiplicity < 1)
      throw InvalidInputError("gap multiplicity must be >= 1");
    if (!(g.multiplicity * g.ratio < 1.0))
      throw InvalidInputError("gap lengths must be summable (N r < 1)");
  }
  if (span >= 0.0 && span < gap_total() - 1e-9 * std::max(1.0, gap_total()))
    throw InvalidInputError("host span is smaller than the gap total");
}

double FractalString::gap_total() const {
  if (const auto* e = std::get_if<ExplicitLengths>(&family)) {
    double s = 0.0;
    for (double l : e->lengths) s += l;
    return s;
  }
  const auto& g = std::get<GeometricFamily>(family);
  return g.base_length / (1.0 - g.multiplicity * g.ratio);
}

double FractalString::host_span() const {
  return span >= 0.0 ? span : gap_total();
}

double FractalString::largest_gap() const {
  if (const auto* e = std::get_if<ExplicitLengths>(&family)) {
    double m = 0.0;
    for (double l : e->lengths) m = std::max(m, l);
    return m;
  }
  return std::get<GeometricFamily>(family).base_length;
}

double FractalString::cover_radius() const {
  return std::max(largest_gap() / 2.0, collar);
}

double FractalString::dimension() const {
  double dim_gaps = 0.0;
  if (const auto* g = std::get_if<GeometricFamily>(&family))
    dim_gaps = std::log(double(g->multiplicity)) / std::log(1.0 / g->ratio);
  if (attractor_mass() > 1e-12 * std::max(1.0, host_span()))
    return std::max(dim_gaps, 1.0);
  return dim_gaps;
}

double string_tube_volume(const FractalString& str, double t) {
  if (t < 0.0) throw InvalidInputError("tube radius must be nonnegative");
  double v = str.attractor_mass() + 2.0 * std::min(t, str.collar);
  if (t == 0.0) return v;
  if (const auto* e = std::get_if<ExplicitLengths>(&str.family)) {
    for (double l : e->lengths) v += std::min(2.0 * t, l);
    return v;
  }
  const auto& g = std::get<GeometricFamily>(str.family);
  int i_sat = first_at_or_below(g.base_length, g.ratio, 2.0 * t);
  v += 2.0 * t * head_count(g.multiplicity, i_sat);
  // saturated tail sum_{i >= i_sat} N^i l0 r^i
  v += g.base_length * std::pow(double(g.multiplicity) * g.ratio, i_sat) /
       (1.0 - g.multiplicity * g.ratio);
  return v;
}

Complex string_tube_power_integral(const FractalString& str, Complex w,
                                   double lo, double hi) {
  if (lo < 0.0 || hi <= lo)
    throw InvalidInputError("integration range must satisfy 0 <= lo < hi");
  const double dim_gaps =
      std::holds_alternative<GeometricFamily>(str.family)
          ? std::log(double(std::get<GeometricFamily>(str.family).multiplicity)) /
                std::log(1.0 / std::get<GeometricFamily>(str.family).ratio)
          : 0.0;
  if (lo == 0.0) {
    if (w.real() + 2.0 <= dim_gaps)
      throw DivergentAbscissaError("tube power integral diverges at 0",
                                   dim_gaps);
    if (str.attractor_mass() > 0.0 && w.real() + 1.0 <= 0.0)
      throw DivergentAbscissaError("attractor mass term diverges at 0", 1.0);
  }

  Complex out = 0.0;
  if (str.attractor_mass() > 0.0)
    out += str.attractor_mass() * pow_diff_over(lo, hi, w + 1.0);

  // One plateaued-ramp term: integral of t^w min(2t, 2m) over [lo, hi].
  auto gap_like = [&](double m, double count) -> Complex {
    double a = std::clamp(m, lo, hi);
    Complex piece = 0.0;
    if (a > lo) piece += 2.0 * pow_diff_over(lo, a, w + 2.0);
    if (hi > a) piece += 2.0 * m * pow_diff_over(a, hi, w + 1.0);
    return count * piece;
  };

  out += gap_like(str.collar, 1.0);

  if (const auto* e = std::get_if<ExplicitLengths>(&str.family)) {
    for (double l : e->lengths) out += gap_like(l / 2.0, 1.0);
    return out;
  }

  const auto& g = std::get<GeometricFamily>(str.family);
  const double m0 = g.base_length / 2.0;
  const double r = g.ratio;
  const int N = g.multiplicity;

  // Gaps with m_i >= hi stay on the 2t ramp over the whole range.
  const int i_hi = first_below(m0, r, hi);
  out += head_count(N, i_hi) * 2.0 * pow_diff_over(lo, hi, w + 2.0);

  if (lo > 0.0) {
    const int i_lo = first_at_or_below(m0, r, lo);
    for (int i = i_hi; i < i_lo; ++i)
      out += gap_like(m0 * std::pow(r, i), std::pow(double(N), i));
    // Fully plateaued tail: sum_{i >= i_lo} N^i 2 m_i * integral t^w.
    out += 2.0 * geometric_power_tail(m0, r, N, 1.0, i_lo).real() *
           pow_diff_over(lo, hi, w + 1.0);
    return out;
  }

  // lo == 0: the remaining infinitely many gaps, in closed form.
  const Complex s_pow = geometric_power_tail(m0, r, N, w + 2.0, i_hi);
  const double s_lin = geometric_power_tail(m0, r, N, 1.0, i_hi).real();
  out += 2.0 * s_pow / (w + 2.0);
  const Complex z = w + 1.0;
  if (std::abs(z) >= 1e-8) {
    out += 2.0 * (real_pow(hi, z) * s_lin - s_pow) / z;
  } else {
    // Limit branch: sum N^i 2 m_i log(hi / m_i), with
    // sum_{i >= i0} N^i m_i log m_i in arithmetico-geometric closed form.
    const double q = N * r;
    const double mi0 = m0 * std::pow(r, i_hi);
    const double s1 =
        std::pow(q, i_hi) * m0 *
        (std::log(mi0) / (1.0 - q) +
         std::log(r) * q / ((1.0 - q) * (1.0 - q)));
    out += 2.0 * (std::log(hi) * s_lin - s1);
  }
  return out;
}

Complex string_zeta_exact(const FractalString& str, Complex s,
                          double nu_mass) {
  str.validate();
  if (!(nu_mass > 0.0)) throw InvalidInputError("nu mass must be positive");
  if (s == Complex(1.0, 0.0)) return nu_mass;
  const double dim = str.dimension();
  if (s.real() <= dim)
    throw DivergentAbscissaError("string zeta needs Re s > dimension", dim);

  const double c = nu_mass / str.natural_mass();
  const double delta = str.cover_radius();
  const Complex p = string_tube_power_integral(str, s - 2.0, 0.0, delta);
  return c * (real_pow(delta, s - 1.0) * str.natural_mass() - (s - 1.0) * p);
}

Complex string_series_closed(const FractalString& str, Complex s) {
  const auto* g = std::get_if<GeometricFamily>(&str.family);
  if (!g)
    throw InvalidInputError("series closed form needs a geometric family");
  const double period = 2.0 * M_PI / std::log(1.0 / g->ratio);
  const double dim =
      std::log(double(g->multiplicity)) / std::log(1.0 / g->ratio);
  if (std::abs(s) < 1e-12)
    throw NearPoleError("s is at the pole s = 0", Complex(0.0, 0.0));
  Complex denom = 1.0 - double(g->multiplicity) * real_pow(g->ratio, s);
  if (std::abs(denom) < 1e-12) {
    double k = std::round(s.imag() / period);
    throw NearPoleError("s is on the pole lattice",
                        Complex(dim, k * period));
  }
  return 2.0 * real_pow(g->base_length / 2.0, s) / (s * denom);
}

Complex cantor_zeta_closed(Complex s) {
  const double D = cantor_dimension();
  const double period = 2.0 * M_PI / std::log(3.0);
  double k = std::round(s.imag() / period);
  Complex nearest(D, k * period);
  if (std::abs(s) < 1e-12)
    throw NearPoleError("within 1e-12 of the pole s = 0", Complex(0.0, 0.0));
  if (std::abs(s - nearest) < 1e-12)
    throw NearPoleError("within 1e-12 of a lattice pole", nearest);
  Complex p3 = real_pow(3.0, s);
  return real_pow(2.0, 1.0 - s) * p3 / (s * (p3 - 2.0));
}

}  // namespace fraczeta::strings
