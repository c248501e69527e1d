#include "fraczeta/gridcsv.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace fraczeta::cli {

int resolve_jobs(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("FRACZETA_JOBS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

std::size_t write_grid_csv(std::ostream& out, const GridSpec& spec,
                           const PointFn& fn) {
  const std::size_t total =
      std::size_t(spec.re_count) * std::size_t(spec.im_count);
  std::vector<zeta::ZetaValue> results(total);
  std::vector<char> failed(total, 0);

  auto point_s = [&](std::size_t idx) {
    std::size_t i_im = idx / spec.re_count;
    std::size_t i_re = idx % spec.re_count;
    double re = spec.re_count == 1
                    ? spec.re_start
                    : spec.re_start + (spec.re_stop - spec.re_start) * i_re /
                                          (spec.re_count - 1);
    double im = spec.im_count == 1
                    ? spec.im_start
                    : spec.im_start + (spec.im_stop - spec.im_start) * i_im /
                                          (spec.im_count - 1);
    return Complex(re, im);
  };

  const int jobs = resolve_jobs(spec.jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t idx = next.fetch_add(1);
      if (idx >= total) return;
      try {
        results[idx] = fn(point_s(idx));
      } catch (...) {
        failed[idx] = 1;
      }
    }
  };
  if (jobs <= 1 || total <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  out << "re_s,im_s,re_zeta,im_zeta,abs,err\n";
  std::size_t failures = 0;
  for (std::size_t idx = 0; idx < total; ++idx) {
    Complex s = point_s(idx);
    out << format_double(s.real()) << ',' << format_double(s.imag()) << ',';
    if (failed[idx]) {
      ++failures;
      out << "nan,nan,nan,nan\n";
      continue;
    }
    const auto& z = results[idx];
    out << format_double(z.value.real()) << ','
        << format_double(z.value.imag()) << ','
        << format_double(std::abs(z.value)) << ',' << format_double(z.err)
        << '\n';
  }
  return failures;
}

}  // namespace fraczeta::cli
