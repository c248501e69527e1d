#pragma once

#include <algorithm>
#include <complex>
#include <utility>
#include <vector>

#include "fraczeta/builders.hpp"
#include "fraczeta/rng.hpp"

namespace fztest {

using fraczeta::Complex;
using fraczeta::CounterRng;

// merged closed intervals covering the depth-m refinement of a 1D IFS;
// the measure of their t-neighborhood is an exact tube-volume oracle
inline double cell_union_tube_mass(const fraczeta::geometry::IfsSystem& sys,
                                   int depth, double t, double lo,
                                   double hi) {
  auto cells = fraczeta::geometry::refine_cells(sys, depth);
  std::vector<std::pair<double, double>> iv;
  for (const auto& c : cells) iv.emplace_back(c.lo[0] - t, c.hi[0] + t);
  std::sort(iv.begin(), iv.end());
  double total = 0.0;
  double cur_lo = iv[0].first, cur_hi = iv[0].second;
  for (std::size_t i = 1; i < iv.size(); ++i) {
    if (iv[i].first <= cur_hi) {
      cur_hi = std::max(cur_hi, iv[i].second);
    } else {
      total += std::min(cur_hi, hi) - std::max(cur_lo, lo);
      cur_lo = iv[i].first;
      cur_hi = iv[i].second;
    }
  }
  total += std::min(cur_hi, hi) - std::max(cur_lo, lo);
  return total;
}

}  // namespace fztest
