#pragma once

#include <functional>
#include <ostream>

#include "fraczeta/zeta.hpp"

namespace fraczeta::cli {

struct GridSpec {
  double re_start = 0.0, re_stop = 0.0;
  int re_count = 1;
  double im_start = 0.0, im_stop = 0.0;
  int im_count = 1;
  int jobs = 0;  // 0: FRACZETA_JOBS env or hardware concurrency
};

using PointFn = std::function<zeta::ZetaValue(Complex)>;

// Writes header `re_s,im_s,re_zeta,im_zeta,abs,err` and one row per grid
// point, im outer / re inner, shortest round-trip floats, LF newlines.
// Failed points print nan fields; the failure count is returned.
std::size_t write_grid_csv(std::ostream& out, const GridSpec& spec,
                           const PointFn& fn);

int resolve_jobs(int requested);

}  // namespace fraczeta::cli
