#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace fraczeta::minkowski {

struct TubeSamples {
  std::vector<std::pair<double, double>> pairs;  // (t, V(t)), t increasing
  int ambient_dim = 1;
  // log(1/r) when the scene declares a scaling ratio r, else 0; slope
  // estimation then strides over whole multiplicative periods.
  double log_period = 0.0;
};

struct DimensionEstimate {
  double lower_dim = 0.0, upper_dim = 0.0;
  double lower_content = 0.0, upper_content = 0.0;  // inf sentinel possible
  std::pair<double, double> window;                 // (t_min, t_max) used
  // raw slope estimates fell outside [0, d] before clamping
  bool strip_violation = false;
};

// Log-spaced grid on [tmin, tmax]; when log_period > 0 the step divides the
// period so that windows span whole periods of the multiplicative
// oscillation.
std::vector<double> log_grid(double tmin, double tmax, int points,
                             double log_period = 0.0);

TubeSamples sample_tube(const std::function<double(double)>& tube,
                        std::span<const double> grid, int ambient_dim,
                        double log_period = 0.0);

// Local slopes of log V against log t over the smallest sampled decade
// (stretched to whole periods when one is declared):
//   upper_dim = d - min slope,  lower_dim = d - max slope,
// contents from the window extrema of t^{D-d} V(t) at the midpoint
// dimension when the gap is below 0.05.
DimensionEstimate estimate_dims(const TubeSamples& samples);

}  // namespace fraczeta::minkowski
