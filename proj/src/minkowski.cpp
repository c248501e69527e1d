#include "fraczeta/minkowski.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fraczeta/errors.hpp"

namespace fraczeta::minkowski {

std::vector<double> log_grid(double tmin, double tmax, int points,
                             double log_period) {
  if (!(tmin > 0.0 && tmax > tmin))
    throw InvalidInputError("need 0 < tmin < tmax");
  if (points < 2) throw InvalidInputError("need at least 2 grid points");
  double span = std::log(tmax / tmin);
  double step = span / (points - 1);
  if (log_period > 0.0) {
    // snap the step to divide the period
    int per = std::max(1, static_cast<int>(std::round(log_period / step)));
    step = log_period / per;
  }
  std::vector<double> grid;
  for (double u = std::log(tmax); u > std::log(tmin) - 1e-12; u -= step)
    grid.push_back(std::exp(u));
  std::reverse(grid.begin(), grid.end());
  return grid;
}

TubeSamples sample_tube(const std::function<double(double)>& tube,
                        std::span<const double> grid, int ambient_dim,
                        double log_period) {
  TubeSamples out;
  out.ambient_dim = ambient_dim;
  out.log_period = log_period;
  out.pairs.reserve(grid.size());
  double prev_t = 0.0, prev_v = 0.0;
  for (double t : grid) {
    if (!(t > prev_t)) throw InvalidInputError("grid must be increasing and positive");
    double v = tube(t);
    if (!std::isfinite(v)) throw InvalidInputError("non-finite tube value");
    // clamp tiny non-monotonicity from quadrature noise
    v = std::max(v, prev_v);
    out.pairs.emplace_back(t, v);
    prev_t = t;
    prev_v = v;
  }
  return out;
}

DimensionEstimate estimate_dims(const TubeSamples& samples) {
  const auto& ps = samples.pairs;
  const int d = samples.ambient_dim;
  if (ps.size() < 8)
    throw InvalidInputError("need at least 8 tube samples");
  double span = std::log(ps.back().first / ps.front().first);
  if (span < 2.0 * std::log(10.0) - 1e-9)
    throw InvalidInputError("samples must span at least 2 decades");

  // window: smallest decade, stretched to whole periods when declared
  double w = std::log(10.0);
  if (samples.log_period > 0.0)
    w = samples.log_period * std::ceil(w / samples.log_period);
  const double t_min = ps.front().first;
  const double t_cap = t_min * std::exp(w * (1.0 + 1e-12));

  // stride over one full period so the periodic correction cancels
  std::size_t stride = 1;
  if (samples.log_period > 0.0 && ps.size() >= 3) {
    double step = std::log(ps[1].first / ps[0].first);
    stride = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::round(samples.log_period / step)));
  }

  double smin = std::numeric_limits<double>::infinity();
  double smax = -std::numeric_limits<double>::infinity();
  std::size_t last_in_window = 0;
  for (std::size_t i = 0; i < ps.size(); ++i)
    if (ps[i].first <= t_cap) last_in_window = i;
  for (std::size_t i = 0; i + stride <= last_in_window + stride &&
                          i <= last_in_window; ++i) {
    std::size_t j = i + stride;
    if (j >= ps.size()) break;
    if (!(ps[i].second > 0.0 && ps[j].second > 0.0)) continue;
    double slope = std::log(ps[j].second / ps[i].second) /
                   std::log(ps[j].first / ps[i].first);
    smin = std::min(smin, slope);
    smax = std::max(smax, slope);
  }
  if (!std::isfinite(smin))
    throw InvalidInputError("tube samples vanish on the window");

  DimensionEstimate est;
  double upper_raw = d - smin;
  double lower_raw = d - smax;
  est.strip_violation = upper_raw > d + 1e-9 || lower_raw < -1e-9;
  est.upper_dim = std::clamp(upper_raw, 0.0, double(d));
  est.lower_dim = std::clamp(lower_raw, 0.0, double(d));
  est.window = {t_min, ps[last_in_window].first};

  if (est.upper_dim - est.lower_dim < 0.05) {
    double D = 0.5 * (est.upper_dim + est.lower_dim);
    double cmin = std::numeric_limits<double>::infinity();
    double cmax = 0.0;
    for (std::size_t i = 0; i <= last_in_window; ++i) {
      double c = std::pow(ps[i].first, D - d) * ps[i].second;
      cmin = std::min(cmin, c);
      cmax = std::max(cmax, c);
    }
    est.lower_content = cmin;
    est.upper_content = cmax;
  } else {
    est.lower_content = std::numeric_limits<double>::infinity();
    est.upper_content = std::numeric_limits<double>::infinity();
  }
  return est;
}

}  // namespace fraczeta::minkowski
