#include "fraczeta/complexdims.hpp"

#include <algorithm>
#include <cmath>

#include "fraczeta/errors.hpp"

namespace fraczeta::complexdims {

void ScalingSystem::validate() const {
  if (terms.empty()) throw InvalidInputError("scaling system has no terms");
  for (const auto& t : terms) {
    if (!(t.coeff > 0.0)) throw InvalidInputError("coefficients must be > 0");
    if (!(t.ratio > 0.0 && t.ratio < 1.0))
      throw InvalidInputError("ratios must lie in (0,1)");
  }
}

Complex denominator(const ScalingSystem& sys, Complex s) {
  Complex acc = 1.0;
  for (const auto& t : sys.terms)
    acc -= t.coeff * real_pow(t.ratio, s - t.shift);
  return acc;
}

double real_root(const ScalingSystem& sys) {
  sys.validate();
  auto delta = [&](double s) { return denominator(sys, s).real(); };
  // Delta is strictly increasing on the reals towards 1; bracket the root.
  double lo = 0.0, hi = 0.0;
  double step = 1.0;
  while (delta(lo) > 0.0) lo -= step, step *= 2.0;
  step = 1.0;
  while (delta(hi) < 0.0) hi += step, step *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-13 * (1.0 + std::abs(lo)); ++i) {
    double mid = 0.5 * (lo + hi);
    (delta(mid) < 0.0 ? lo : hi) = mid;
  }
  double s = 0.5 * (lo + hi);
  // one Newton polish; Delta' = sum c k^{s-sigma} log(1/k) > 0
  double dprime = 0.0;
  for (const auto& t : sys.terms)
    dprime += t.coeff * std::pow(t.ratio, s - t.shift) * std::log(1.0 / t.ratio);
  s -= delta(s) / dprime;
  return s;
}

PoleLattice lattice_poles(const ScalingSystem& sys, int M) {
  sys.validate();
  PoleLattice out;
  out.D = real_root(sys);
  bool same_ratio = true;
  for (const auto& t : sys.terms)
    if (std::abs(t.ratio - sys.terms.front().ratio) > 1e-14)
      same_ratio = false;
  if (!same_ratio) {
    out.lattice = false;
    out.period = 0.0;
    out.poles = {Complex(out.D, 0.0)};
    return out;
  }
  out.lattice = true;
  out.period = 2.0 * M_PI / std::log(1.0 / sys.terms.front().ratio);
  for (int m = -M; m <= M; ++m)
    out.poles.emplace_back(out.D, m * out.period);
  return out;
}

Complex residue_estimate(const ComplexFn& f, Complex s0, double radius,
                         int m_points) {
  if (!(radius > 0.0) || m_points < 4)
    throw InvalidInputError("residue contour needs radius > 0, >= 4 points");
  Complex acc = 0.0;
  for (int j = 0; j < m_points; ++j) {
    double th = 2.0 * M_PI * j / m_points;
    Complex e(std::cos(th), std::sin(th));
    Complex v = f(s0 + radius * e);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw ContourFailureError("non-finite sample on residue contour");
    acc += v * e;
  }
  return acc * radius / double(m_points);
}

std::vector<Peak> line_scan(const ComplexFn& f, double re_s, double im_lo,
                            double im_hi, double step) {
  if (!(step > 0.0 && im_hi > im_lo))
    throw InvalidInputError("bad line-scan range");
  std::vector<double> ims, mags;
  for (double y = im_lo; y <= im_hi + 1e-12; y += step) {
    ims.push_back(y);
    mags.push_back(std::abs(f(Complex(re_s, y))));
  }
  std::vector<double> sorted = mags;
  std::sort(sorted.begin(), sorted.end());
  double median = sorted[sorted.size() / 2];
  std::vector<double> dev(mags.size());
  for (std::size_t i = 0; i < mags.size(); ++i)
    dev[i] = std::abs(mags[i] - median);
  std::sort(dev.begin(), dev.end());
  double mad = dev[dev.size() / 2];
  double threshold = median + 3.0 * mad;

  std::vector<Peak> peaks;
  for (std::size_t i = 1; i + 1 < mags.size(); ++i)
    if (mags[i] > threshold && mags[i] >= mags[i - 1] && mags[i] > mags[i + 1])
      peaks.push_back({ims[i], mags[i]});
  return peaks;
}

}  // namespace fraczeta::complexdims
