#include "fraczeta/numeric.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <map>
#include <mutex>

#include "fraczeta/errors.hpp"

namespace fraczeta {

Complex real_pow(double t, Complex z) {
  if (t == 0.0) {
    if (z == Complex(0.0, 0.0)) return {1.0, 0.0};
    return {0.0, 0.0};
  }
  return std::exp(z * std::log(t));
}

Complex pow_diff_over(double lo, double hi, Complex z) {
  if (lo == 0.0) {
    if (z.real() <= 0.0)
      throw InvalidInputError("pow_diff_over: lo = 0 needs Re z > 0");
    return real_pow(hi, z) / z;
  }
  const double lr = std::log(hi / lo);
  const Complex u = z * lr;
  // (hi^z - lo^z)/z = lo^z * lr * phi(u), phi(u) = (e^u - 1)/u.
  Complex phi;
  if (std::abs(u) < 1e-4) {
    phi = 1.0 + u / 2.0 + u * u / 6.0 + u * u * u / 24.0;
  } else {
    phi = (std::exp(u) - 1.0) / u;
  }
  return real_pow(lo, z) * lr * phi;
}

namespace {

template <typename T>
T pairwise_impl(std::span<const T> v) {
  const std::size_t n = v.size();
  if (n == 0) return T{};
  if (n <= 8) {
    T acc = v[0];
    for (std::size_t i = 1; i < n; ++i) acc += v[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_impl(v.first(half)) + pairwise_impl(v.subspan(half));
}

}  // namespace

double pairwise_sum(std::span<const double> v) { return pairwise_impl(v); }
Complex pairwise_sum(std::span<const Complex> v) { return pairwise_impl(v); }

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton iteration on Legendre P_n, symmetric roots.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return cache.emplace(n, std::move(rule)).first->second;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Complex parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw InvalidInputError("empty complex literal");

  auto parse_part = [](std::string p) -> double {
    if (p.empty() || p == "+") return 1.0;
    if (p == "-") return -1.0;
    if (p.front() == '+') p.erase(0, 1);  // from_chars rejects leading '+'
    double out = 0.0;
    const char* first = p.data();
    const char* last = p.data() + p.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last)
      throw InvalidInputError("bad numeric literal '" + p + "'");
    return out;
  };

  if (s.back() == 'i' || s.back() == 'I' || s.back() == 'j') {
    std::string body = s.substr(0, s.size() - 1);
    // Split at the last +/- that is not an exponent sign and not leading.
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
      char c = body[k];
      if ((c == '+' || c == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
        split = k;
        break;
      }
    }
    if (split == std::string::npos) return {0.0, parse_part(body)};
    return {parse_part(body.substr(0, split)), parse_part(body.substr(split))};
  }
  return {parse_part(s), 0.0};
}

}  // namespace fraczeta
