#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fraczeta/numeric.hpp"

namespace fraczeta::complexdims {

// One term c * k^{s - sigma} of a scaling functional-equation denominator
// Delta(s) = 1 - sum_i c_i k_i^{s - sigma_i}.
struct ScalingTerm {
  double coeff = 1.0;
  double ratio = 0.5;  // k in (0,1)
  double shift = 0.0;  // sigma
};

struct ScalingSystem {
  std::vector<ScalingTerm> terms;
  std::string description;
  void validate() const;
};

Complex denominator(const ScalingSystem& sys, Complex s);

// Unique real root of Delta; bisection to 1e-12 then one Newton polish.
double real_root(const ScalingSystem& sys);

struct PoleLattice {
  double D = 0.0;       // real root
  double period = 0.0;  // 2 pi / log(1/k) in the lattice case
  std::vector<Complex> poles;
  bool lattice = false;
};

// Poles D + i m period for m in [-M, M] when all ratios coincide;
// otherwise only the real root with lattice = false.
PoleLattice lattice_poles(const ScalingSystem& sys, int M);

using ComplexFn = std::function<Complex(Complex)>;

// Trapezoid estimate of (1/2 pi i) contour integral of f around s0.
Complex residue_estimate(const ComplexFn& f, Complex s0, double radius,
                         int m_points);

struct Peak {
  double im = 0.0;
  double magnitude = 0.0;
};

// |f| along the vertical line Re s = re_s; peaks are interior local maxima
// above median + 3 MAD.
std::vector<Peak> line_scan(const ComplexFn& f, double re_s, double im_lo,
                            double im_hi, double step);

}  // namespace fraczeta::complexdims
