#include "fraczeta/smallmat.hpp"

#include <algorithm>
#include <cmath>

#include "fraczeta/errors.hpp"

namespace fraczeta::nc {

Mat::Mat(int n) : n_(n) {
  if (n < 1 || n > kMaxDim) throw InvalidInputError("matrix dimension out of range");
}

Mat Mat::identity(int n) {
  Mat m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::operator+(const Mat& o) const {
  Mat r = *this;
  r += o;
  return r;
}

Mat Mat::operator-(const Mat& o) const {
  Mat r = *this;
  r -= o;
  return r;
}

Mat& Mat::operator+=(const Mat& o) {
  if (o.n_ != n_) throw InvalidInputError("matrix dimension mismatch");
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) (*this)(i, j) += o(i, j);
  return *this;
}

Mat& Mat::operator-=(const Mat& o) {
  if (o.n_ != n_) throw InvalidInputError("matrix dimension mismatch");
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) (*this)(i, j) -= o(i, j);
  return *this;
}

Mat Mat::operator*(const Mat& o) const {
  if (o.n_ != n_) throw InvalidInputError("matrix dimension mismatch");
  Mat r(n_);
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < n_; ++k) {
      double v = (*this)(i, k);
      if (v == 0.0) continue;
      for (int j = 0; j < n_; ++j) r(i, j) += v * o(k, j);
    }
  return r;
}

Mat Mat::operator*(double c) const {
  Mat r = *this;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r(i, j) *= c;
  return r;
}

Mat Mat::transpose() const {
  Mat r(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r(i, j) = (*this)(j, i);
  return r;
}

double Mat::max_abs() const {
  double m = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m = std::max(m, std::abs((*this)(i, j)));
  return m;
}

bool Mat::is_symmetric(double tol_factor) const {
  double scale = std::max(1e-300, max_abs());
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (std::abs((*this)(i, j) - (*this)(j, i)) > tol_factor * scale)
        return false;
  return true;
}

namespace {

SymEigen jacobi_eigen(Mat a) {
  const int n = a.dim();
  Mat v = Mat::identity(n);
  const double scale = std::max(1e-300, a.max_abs());
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off <= 1e-13 * scale) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }
  SymEigen out;
  out.values.resize(n);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return a(x, x) < a(y, y); });
  out.vectors = Mat(n);
  for (int j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (int i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

}  // namespace

std::vector<double> sym_eigs(const Mat& m) {
  if (!m.is_symmetric()) throw InvalidInputError("matrix is not symmetric");
  if (m.dim() == 1) return {m(0, 0)};
  if (m.dim() == 2) {
    double a = m(0, 0), b = 0.5 * (m(0, 1) + m(1, 0)), c = m(1, 1);
    double mid = 0.5 * (a + c);
    double rad = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    return {mid - rad, mid + rad};
  }
  return jacobi_eigen(m).values;
}

SymEigen sym_eigen(const Mat& m) {
  if (!m.is_symmetric()) throw InvalidInputError("matrix is not symmetric");
  return jacobi_eigen(m);
}

double operator_norm(const Mat& m) {
  const int n = m.dim();
  Mat mtm(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += m(k, i) * m(k, j);
      mtm(i, j) = acc;
    }
  auto eig = sym_eigs(mtm);
  return std::sqrt(std::max(0.0, eig.back()));
}

double operator_norm(const CMat& m) {
  const int n = m.dim();
  Mat e(2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      e(i, j) = m.re(i, j);
      e(i, j + n) = -m.im(i, j);
      e(i + n, j) = m.im(i, j);
      e(i + n, j + n) = m.re(i, j);
    }
  return operator_norm(e);
}

}  // namespace fraczeta::nc
