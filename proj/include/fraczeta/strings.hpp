#pragma once

#include <variant>
#include <vector>

#include "fraczeta/numeric.hpp"

namespace fraczeta::strings {

struct ExplicitLengths {
  std::vector<double> lengths;  // positive, any order
};

// Gap lengths base_length * ratio^i with multiplicity multiplicity^i.
struct GeometricFamily {
  double base_length = 1.0;
  double ratio = 0.5;
  int multiplicity = 1;
};

// A fractal string: complementary intervals of a compact subset of a host
// interval, plus a collar of width `collar` on both ends. The reference
// weight is unit-density Lebesgue measure on host + collar.
struct FractalString {
  std::variant<ExplicitLengths, GeometricFamily> family;
  double collar = 0.0;  // outer radius on both sides
  double span = -1.0;   // host interval length; < 0 means sum of gaps

  void validate() const;
  double gap_total() const;
  double host_span() const;  // span if given, else gap_total()
  double attractor_mass() const {
    double m = host_span() - gap_total();
    return m <= 1e-12 * std::max(1.0, host_span()) ? 0.0 : m;
  }
  double largest_gap() const;
  // Smallest radius whose tube covers host + collar.
  double cover_radius() const;
  // Upper box dimension of the string relative to its Lebesgue collar.
  double dimension() const;
  // Mass of the unit-density reference weight.
  double natural_mass() const { return host_span() + 2.0 * collar; }
};

// Exact tube volume V(t) = attractor mass + sum_j min(2t, l_j)
//                          + 2 min(t, collar).
double string_tube_volume(const FractalString& str, double t);

// Exact integral of t^w V(t) dt over [lo, hi], geometric tails summed in
// closed form. Needs Re w + 2 > dimension when lo == 0.
Complex string_tube_power_integral(const FractalString& str, Complex w,
                                   double lo, double hi);

// Zeta value through the tube representation
//   delta^{s-1} nu(1) - (s-1) * integral_0^delta t^{s-2} V(t) dt
// with the integral evaluated piecewise-exactly. nu_mass rescales the
// uniform density (pass natural_mass() for unit density). Exact at s = 1
// where the value is nu_mass.
Complex string_zeta_exact(const FractalString& str, Complex s,
                          double nu_mass);

// Direct geometric-series closed form for the gap (series) part of a
// geometric family: 2^{1-s} l0^s / (s (1 - N r^s)). The collar contributes
// an additive 2 collar^s / s on top; this function returns only the series.
Complex string_series_closed(const FractalString& str, Complex s);

// The Cantor-string series part 2^{1-s} 3^s / (s (3^s - 2)). Throws
// NearPoleError within 1e-12 of a pole (s = 0 or the lattice
// log2/log3 + 2 pi i n / log 3).
Complex cantor_zeta_closed(Complex s);

inline double cantor_dimension() { return std::log(2.0) / std::log(3.0); }

}  // namespace fraczeta::strings
