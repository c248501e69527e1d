#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fraczeta {

using Complex = std::complex<double>;

// t^z for t > 0 on the principal real-log branch exp(z ln t).
// t == 0 maps to 0 for Re z > 0, 1 for z == 0 (measure-theoretic 0^0).
Complex real_pow(double t, Complex z);

// (hi^z - lo^z) / z for 0 <= lo < hi, stable for |z| -> 0 where it tends
// to log(hi/lo) (lo > 0). lo == 0 requires Re z > 0.
Complex pow_diff_over(double lo, double hi, Complex z);

// Deterministic pairwise summation; result independent of how the values
// were produced (thread count, batching).
double pairwise_sum(std::span<const double> v);
Complex pairwise_sum(std::span<const Complex> v);

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2
};

// Gauss-Legendre rule of order n (computed once per n, cached).
const GaussRule& gauss_legendre(int n);

// Shortest decimal representation that round-trips; "nan"/"inf" spelled
// in lowercase. This is the canonical float format of all CLI output.
std::string format_double(double v);

// Parses "a", "a+bi", "a-bi", "bi", "i", "-i"; throws InvalidInputError.
Complex parse_complex(const std::string& text);

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// |a - b| relative to max(|a|, |b|, floor).
inline double rel_err(Complex a, Complex b, double floor = 1e-300) {
  double scale = std::max({std::abs(a), std::abs(b), floor});
  return std::abs(a - b) / scale;
}

}  // namespace fraczeta
