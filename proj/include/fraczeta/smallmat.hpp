#pragma once

#include <array>
#include <vector>

#include "fraczeta/numeric.hpp"

namespace fraczeta::nc {

// Public matrix dimension is capped at 8; the internal cap of 16 leaves
// room for the real embedding of complex matrices used by operator norms.
inline constexpr int kMaxPublicDim = 8;
inline constexpr int kMaxDim = 16;

// Small dense real matrix, fixed storage.
class Mat {
 public:
  Mat() = default;
  explicit Mat(int n);
  static Mat identity(int n);

  int dim() const { return n_; }
  double& operator()(int i, int j) { return a_[i * kMaxDim + j]; }
  double operator()(int i, int j) const { return a_[i * kMaxDim + j]; }

  Mat operator+(const Mat& o) const;
  Mat operator-(const Mat& o) const;
  Mat operator*(const Mat& o) const;
  Mat& operator+=(const Mat& o);
  Mat& operator-=(const Mat& o);
  Mat operator*(double c) const;

  Mat transpose() const;
  double max_abs() const;
  bool is_symmetric(double tol_factor = 1e-12) const;

 private:
  int n_ = 0;
  std::array<double, kMaxDim * kMaxDim> a_{};
};

inline Mat operator*(double c, const Mat& m) { return m * c; }

struct CMat {
  Mat re, im;
  int dim() const { return re.dim(); }
};

// Ascending eigenvalues of a symmetric matrix; n = 2 uses the closed form,
// larger n cyclic Jacobi to off-diagonal norm <= 1e-13 * scale. Throws
// InvalidInputError on asymmetric input.
std::vector<double> sym_eigs(const Mat& m);

struct SymEigen {
  std::vector<double> values;  // ascending
  Mat vectors;                 // columns are eigenvectors
};
SymEigen sym_eigen(const Mat& m);

// Spectral operator norm. For the complex case the matrix is embedded as
// [[Re,-Im],[Im,Re]] first.
double operator_norm(const Mat& m);
double operator_norm(const CMat& m);

}  // namespace fraczeta::nc
