#pragma once

#include <span>
#include <variant>
#include <vector>

#include "fraczeta/geometry.hpp"
#include "fraczeta/smallmat.hpp"

namespace fraczeta::nc {

// d-tuple of n x n real symmetric matrices with operator norms <= norm_bound.
struct MatrixTuple {
  int n = 1, d = 1;
  std::vector<Mat> entries;
  double norm_bound = 0.0;  // R; 0 disables the check

  void validate() const;
};

// Noncommutative polynomial: sum of coeff * X_{w1} ... X_{wm}; the empty
// word is the identity. Word letters are 0-based entry indices.
struct NcPolynomial {
  struct Term {
    Complex coeff;
    std::vector<int> word;
  };
  std::vector<Term> terms;

  static NcPolynomial one();
  bool is_identity() const;
  double norm_R(double R) const;  // sum |coeff| R^{deg}
};

struct TraceState {};  // uniform weight 1/n over an orthonormal basis
struct PureVector {
  std::vector<double> coords;  // unit vector
};
using VectorPart = std::variant<TraceState, PureVector>;

void validate_vector_part(const VectorPart& xi, int n);

// E(X) = sum_i X_i^2, positive semidefinite.
Mat energy(const MatrixTuple& X);

// g(X); complex because coefficients may be complex.
CMat nc_poly_eval(const NcPolynomial& g, const MatrixTuple& X);

// <xi, M xi>, or tr(M)/n for the trace part.
Complex vector_expectation(const VectorPart& xi, const CMat& m);
double vector_expectation(const VectorPart& xi, const Mat& m);

// inf spt E_M(xi, xi): the trace part sees the whole spectrum (smallest
// eigenvalue); a pure vector sees the smallest eigenvalue whose clustered
// eigenprojection carries weight > eps. Eigenvalues within
// cluster_tol * scale share a projection.
double spectral_support_min(const Mat& m, const VectorPart& xi,
                            double eps = 1e-12, double cluster_tol = 1e-10);

// ---- states ------------------------------------------------------------

struct NcAtom {
  MatrixTuple point;
  VectorPart xi;
  double weight = 1.0;
};

struct Interval1D {
  double lo = 0.0, hi = 1.0;
};
struct Dirac1D {
  double value = 0.0;
};
struct Ifs1D {
  geometry::IfsSystem sys;  // ambient_dim == 1
};
using ParamFactor = std::variant<Ifs1D, Interval1D, Dirac1D>;

// Support parameterized by theta in a product of 1D factors, embedded
// affinely: Y_i(theta) = base_i + sum_j theta_j coeffs[j][i].
struct ParamFamily {
  int n = 2, d = 1;
  std::vector<ParamFactor> factors;
  std::vector<Mat> base;                 // d entries
  std::vector<std::vector<Mat>> coeffs;  // [param][entry]
  VectorPart xi;

  MatrixTuple at(std::span<const double> theta) const;
  void validate() const;
};

struct StateComponent {
  double weight = 1.0;
  std::variant<std::vector<NcAtom>, ParamFamily> support;
};

struct NcState {
  int n = 1, d = 1;
  std::vector<StateComponent> components;
  double norm_bound = 0.0;  // R

  double mass() const;
  bool is_tracial() const;  // every vector part is the trace
  void validate() const;
};

// d(X, tau) = inf over the support of sqrt(inf spt E_{E(X-Y)}(xi, xi)).
// Finite-atom components are exact minima; parameter families run
// branch-and-bound with Lipschitz cell bounds, gap <= tol.
double nc_distance(const MatrixTuple& X, const NcState& tau, double tol);

// Tensor-state distance sqrt(inf over the joint support of sum_i m_i) with
// m_i the per-factor spectral minimum; for product states the infimum
// separates into per-factor infima.
double tensor_distance(std::span<const MatrixTuple> Xs,
                       std::span<const NcState> taus, double tol);

// Variant with sum_i lambda_i replaced by (sup_i sqrt(lambda_i))^2; equals
// the max per-factor distance for product states.
double tensor_distance_sup(std::span<const MatrixTuple> Xs,
                           std::span<const NcState> taus, double tol);

}  // namespace fraczeta::nc
