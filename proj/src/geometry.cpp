#include "fraczeta/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "fraczeta/errors.hpp"
#include "fraczeta/rng.hpp"

namespace fraczeta::geometry {

double Box::volume() const {
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) v *= std::max(0.0, hi[i] - lo[i]);
  return v;
}

std::vector<double> Box::center() const {
  std::vector<double> c(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
  return c;
}

void SimilarityMap::apply(std::span<const double> x,
                          std::span<double> out) const {
  const int d = static_cast<int>(x.size());
  for (int i = 0; i < d; ++i) {
    double acc = 0.0;
    if (rotation.empty()) {
      acc = x[i];
    } else {
      for (int j = 0; j < d; ++j) acc += rotation[i * d + j] * x[j];
    }
    out[i] = ratio * acc + translation[i];
  }
}

namespace {

// Composed affine map y = A x + t with A = ratio-scaled rotation product.
struct Affine {
  std::vector<double> a;  // d*d row-major
  std::vector<double> t;
  double scale;  // product of ratios == operator norm of A

  static Affine identity(int d) {
    Affine f;
    f.a.assign(static_cast<std::size_t>(d) * d, 0.0);
    f.t.assign(d, 0.0);
    for (int i = 0; i < d; ++i) f.a[i * d + i] = 1.0;
    f.scale = 1.0;
    return f;
  }

  // this ∘ m
  Affine compose(const SimilarityMap& m, int d) const {
    Affine out;
    out.a.assign(static_cast<std::size_t>(d) * d, 0.0);
    out.t.assign(d, 0.0);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        double acc = 0.0;
        for (int k = 0; k < d; ++k) {
          double mkj = m.rotation.empty() ? (k == j ? 1.0 : 0.0)
                                          : m.rotation[k * d + j];
          acc += a[i * d + k] * mkj;
        }
        out.a[i * d + j] = m.ratio * acc;
      }
      double acc = 0.0;
      for (int k = 0; k < d; ++k) acc += a[i * d + k] * m.translation[k];
      out.t[i] = acc + t[i];
    }
    out.scale = scale * m.ratio;
    return out;
  }
};

struct CellBounds {
  std::vector<double> center, halfw;
};

CellBounds cell_aabb(const Affine& f, const Box& root, int d) {
  CellBounds cb;
  cb.center.resize(d);
  cb.halfw.resize(d);
  std::vector<double> bc = root.center();
  for (int i = 0; i < d; ++i) {
    double c = f.t[i];
    double h = 0.0;
    for (int j = 0; j < d; ++j) {
      c += f.a[i * d + j] * bc[j];
      h += std::abs(f.a[i * d + j]) * 0.5 * (root.hi[j] - root.lo[j]);
    }
    cb.center[i] = c;
    cb.halfw[i] = h;
  }
  return cb;
}

double box_lower_bound(std::span<const double> x, const CellBounds& cb,
                       Metric metric) {
  const int d = static_cast<int>(x.size());
  if (metric == Metric::sup) {
    double m = 0.0;
    for (int i = 0; i < d; ++i)
      m = std::max(m, std::abs(x[i] - cb.center[i]) - cb.halfw[i]);
    return std::max(0.0, m);
  }
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    double g = std::max(0.0, std::abs(x[i] - cb.center[i]) - cb.halfw[i]);
    s += g * g;
  }
  return std::sqrt(s);
}

double point_dist(std::span<const double> x, std::span<const double> p,
                  Metric metric) {
  const int d = static_cast<int>(x.size());
  if (metric == Metric::sup) {
    double m = 0.0;
    for (int i = 0; i < d; ++i) m = std::max(m, std::abs(x[i] - p[i]));
    return m;
  }
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += (x[i] - p[i]) * (x[i] - p[i]);
  return std::sqrt(s);
}

// Fixed point of y = A y + t; I - A is invertible because |A| < 1.
std::vector<double> fixed_point(const Affine& f, int d) {
  std::vector<double> m(static_cast<std::size_t>(d) * d);
  std::vector<double> rhs = f.t;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      m[i * d + j] = (i == j ? 1.0 : 0.0) - f.a[i * d + j];
  // Gaussian elimination with partial pivoting (d <= 3).
  for (int c = 0; c < d; ++c) {
    int piv = c;
    for (int r = c + 1; r < d; ++r)
      if (std::abs(m[r * d + c]) > std::abs(m[piv * d + c])) piv = r;
    if (piv != c) {
      for (int j = 0; j < d; ++j) std::swap(m[c * d + j], m[piv * d + j]);
      std::swap(rhs[c], rhs[piv]);
    }
    for (int r = c + 1; r < d; ++r) {
      double fct = m[r * d + c] / m[c * d + c];
      for (int j = c; j < d; ++j) m[r * d + j] -= fct * m[c * d + j];
      rhs[r] -= fct * rhs[c];
    }
  }
  std::vector<double> out(d);
  for (int i = d - 1; i >= 0; --i) {
    double acc = rhs[i];
    for (int j = i + 1; j < d; ++j) acc -= m[i * d + j] * out[j];
    out[i] = acc / m[i * d + i];
  }
  return out;
}

}  // namespace

void IfsSystem::validate() const {
  if (maps.empty()) throw InvalidInputError("IFS needs at least one map");
  const int d = ambient_dim;
  if (bounding_box.dim() != d)
    throw InvalidInputError("bounding box dimension mismatch");
  for (const auto& m : maps) {
    if (!(m.ratio > 0.0 && m.ratio < 1.0))
      throw InvalidInputError("similarity ratio must lie in (0,1)");
    if (static_cast<int>(m.translation.size()) != d)
      throw InvalidInputError("translation dimension mismatch");
    if (!m.rotation.empty()) {
      if (static_cast<int>(m.rotation.size()) != d * d)
        throw InvalidInputError("rotation must be d x d");
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double acc = 0.0;
          for (int k = 0; k < d; ++k)
            acc += m.rotation[k * d + i] * m.rotation[k * d + j];
          if (std::abs(acc - (i == j ? 1.0 : 0.0)) > 1e-12)
            throw InvalidInputError("rotation is not orthogonal");
        }
    }
  }
  // Attractor containment: each map must send the bounding box into itself.
  Affine id = Affine::identity(d);
  double slack = 1e-9;
  for (const auto& m : maps) {
    CellBounds cb = cell_aabb(id.compose(m, d), bounding_box, d);
    for (int i = 0; i < d; ++i) {
      if (cb.center[i] - cb.halfw[i] < bounding_box.lo[i] - slack ||
          cb.center[i] + cb.halfw[i] > bounding_box.hi[i] + slack)
        throw InvalidInputError("bounding box does not contain map images");
    }
  }
}

double attractor_distance(const IfsSystem& sys, std::span<const double> x,
                          double tol, Metric metric) {
  if (!(tol > 0.0)) throw InvalidInputError("tol must be positive");
  const int d = sys.ambient_dim;
  if (static_cast<int>(x.size()) != d)
    throw InvalidInputError("point dimension mismatch");
  for (double c : x)
    if (!std::isfinite(c)) throw InvalidInputError("non-finite coordinate");

  struct Node {
    double lb;
    Affine f;
    bool operator<(const Node& o) const { return lb > o.lb; }  // min-heap
  };

  const double diam = point_dist(
      std::span<const double>(sys.bounding_box.lo),
      std::span<const double>(sys.bounding_box.hi), metric);

  std::priority_queue<Node> queue;
  Affine root = Affine::identity(d);
  queue.push({box_lower_bound(x, cell_aabb(root, sys.bounding_box, d), metric),
              root});

  auto fp0 = fixed_point(root.compose(sys.maps[0], d), d);
  double best_ub = point_dist(x, fp0, metric);

  std::size_t expansions = 0;
  const std::size_t kMaxExpansions = 20'000'000;
  while (!queue.empty()) {
    Node node = queue.top();
    queue.pop();
    // lb may be stale relative to an upper bound found after the push
    double lb = std::min(node.lb, best_ub);
    if (best_ub - lb <= tol) return std::max(0.0, 0.5 * (best_ub + lb));
    for (const auto& m : sys.maps) {
      Affine child = node.f.compose(m, d);
      auto p = fixed_point(child, d);
      best_ub = std::min(best_ub, point_dist(x, p, metric));
      double lb = box_lower_bound(x, cell_aabb(child, sys.bounding_box, d),
                                  metric);
      // child cell diameter bounds how much refinement can still help
      if (lb < best_ub && child.scale * diam > 0.25 * tol)
        queue.push({lb, std::move(child)});
    }
    if (++expansions > kMaxExpansions)
      throw AccuracyError("attractor_distance: branch-and-bound stalled",
                          best_ub);
  }
  return best_ub;
}

double attractor_distance_sup(const IfsSystem& sys, std::span<const double> x,
                              double tol) {
  return attractor_distance(sys, x, tol, Metric::sup);
}

std::vector<Box> refine_cells(const IfsSystem& sys, int depth) {
  const int d = sys.ambient_dim;
  std::vector<Affine> cells{Affine::identity(d)};
  for (int level = 0; level < depth; ++level) {
    std::vector<Affine> next;
    next.reserve(cells.size() * sys.maps.size());
    for (const auto& f : cells)
      for (const auto& m : sys.maps) next.push_back(f.compose(m, d));
    cells = std::move(next);
  }
  std::vector<Box> out;
  out.reserve(cells.size());
  for (const auto& f : cells) {
    CellBounds cb = cell_aabb(f, sys.bounding_box, d);
    Box b;
    b.lo.resize(d);
    b.hi.resize(d);
    for (int i = 0; i < d; ++i) {
      b.lo[i] = cb.center[i] - cb.halfw[i];
      b.hi[i] = cb.center[i] + cb.halfw[i];
    }
    out.push_back(std::move(b));
  }
  return out;
}

DistanceFn make_distance_oracle(const IfsSystem& sys, double tol,
                                Metric metric) {
  auto shared = std::make_shared<IfsSystem>(sys);
  shared->validate();
  return [shared, tol, metric](std::span<const double> x) {
    return attractor_distance(*shared, x, tol, metric);
  };
}

// ---- integration ------------------------------------------------------

namespace {

double gaussian_cutoff(double alpha) {
  return std::sqrt(16.0 * std::log(10.0) / alpha);
}

Box effective_box(const GaussianWindow& g) {
  Box b = g.box;
  double cut = gaussian_cutoff(g.alpha);
  for (int i = 0; i < b.dim(); ++i) {
    b.lo[i] = std::max(b.lo[i], -cut);
    b.hi[i] = std::min(b.hi[i], cut);
  }
  return b;
}

using DensityFn = std::function<double(std::span<const double>)>;

Integral integrate_box_grid(const Box& box, const Integrand& f,
                            const DensityFn& dens, int panels, int order) {
  const int d = box.dim();
  const GaussRule& rule = gauss_legendre(order);
  const int per_axis = panels * order;

  std::vector<std::vector<double>> nodes(d), weights(d);
  for (int i = 0; i < d; ++i) {
    nodes[i].resize(per_axis);
    weights[i].resize(per_axis);
    double h = (box.hi[i] - box.lo[i]) / panels;
    for (int p = 0; p < panels; ++p) {
      double a = box.lo[i] + p * h;
      for (int q = 0; q < order; ++q) {
        nodes[i][p * order + q] = a + 0.5 * h * (1.0 + rule.nodes[q]);
        weights[i][p * order + q] = 0.5 * h * rule.weights[q];
      }
    }
  }

  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= per_axis;
  std::vector<Complex> vals(total);
  std::vector<double> x(d);
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t rem = k;
    double w = 1.0;
    for (int i = d - 1; i >= 0; --i) {
      idx[i] = rem % per_axis;
      rem /= per_axis;
      x[i] = nodes[i][idx[i]];
      w *= weights[i][idx[i]];
    }
    vals[k] = w * dens(x) * f(x);
  }
  return {pairwise_sum(std::span<const Complex>(vals)), 0.0};
}

Integral integrate_box(const Box& box, const Integrand& f,
                       const DensityFn& dens, const Scheme& scheme) {
  if (box.volume() <= 0.0) return {Complex(0.0, 0.0), 0.0};
  if (const auto* grid = std::get_if<GridScheme>(&scheme)) {
    Integral fine =
        integrate_box_grid(box, f, dens, grid->panels, grid->order);
    Integral coarse = integrate_box_grid(
        box, f, dens, std::max(1, grid->panels / 2), grid->order);
    fine.err = std::abs(fine.value - coarse.value);
    return fine;
  }
  const auto& mc = std::get<McScheme>(scheme);
  const int d = box.dim();
  const double vol = box.volume();
  CounterRng rng(mc.seed);
  std::vector<Complex> vals(mc.samples);
  std::vector<double> x(d);
  for (std::uint64_t i = 0; i < mc.samples; ++i) {
    for (int j = 0; j < d; ++j)
      x[j] = rng.uniform(i, static_cast<std::uint64_t>(j), box.lo[j],
                         box.hi[j]);
    vals[i] = vol * dens(x) * f(x);
  }
  Complex mean =
      pairwise_sum(std::span<const Complex>(vals)) / double(mc.samples);
  std::vector<double> dev(mc.samples);
  for (std::uint64_t i = 0; i < mc.samples; ++i)
    dev[i] = std::norm(vals[i] - mean);
  double var = pairwise_sum(std::span<const double>(dev)) /
               (double(mc.samples) * std::max<double>(1.0, mc.samples - 1));
  return {mean, std::sqrt(var)};
}

}  // namespace

double measure_mass(const WeightMeasure& nu) {
  return std::visit(
      [](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, UniformBox>) {
          return m.scale * m.box.volume();
        } else if constexpr (std::is_same_v<T, GaussianWindow>) {
          Box b = effective_box(m);
          double mass = m.scale;
          for (int i = 0; i < b.dim(); ++i) {
            if (b.hi[i] <= b.lo[i]) return 0.0;
            double sa = std::sqrt(m.alpha);
            mass *= 0.5 * std::sqrt(M_PI) / sa *
                    (std::erf(sa * b.hi[i]) - std::erf(sa * b.lo[i]));
          }
          return mass;
        } else if constexpr (std::is_same_v<T, FiniteAtoms>) {
          double s = 0.0;
          for (double w : m.weights) s += w;
          return s;
        } else {
          // Tube restriction: bounded above by the inner mass; report the
          // inner mass as the structural (nonzero) check value.
          return measure_mass(*m.inner);
        }
      },
      nu.v);
}

Integral measure_integrate(const WeightMeasure& nu, const Integrand& f,
                           const Scheme& scheme) {
  if (measure_mass(nu) <= 0.0)
    throw DegenerateMeasureError("weight measure has zero mass");
  return std::visit(
      [&](const auto& m) -> Integral {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, UniformBox>) {
          double scale = m.scale;
          return integrate_box(
              m.box, f, [scale](std::span<const double>) { return scale; },
              scheme);
        } else if constexpr (std::is_same_v<T, GaussianWindow>) {
          double scale = m.scale;
          double alpha = m.alpha;
          return integrate_box(
              effective_box(m), f,
              [scale, alpha](std::span<const double> x) {
                double r2 = 0.0;
                for (double c : x) r2 += c * c;
                return scale * std::exp(-alpha * r2);
              },
              scheme);
        } else if constexpr (std::is_same_v<T, FiniteAtoms>) {
          if (m.points.size() != m.weights.size())
            throw InvalidInputError("atoms/weights size mismatch");
          std::vector<Complex> vals(m.points.size());
          for (std::size_t i = 0; i < m.points.size(); ++i) {
            if (m.weights[i] < 0.0)
              throw InvalidInputError("atom weights must be nonnegative");
            vals[i] = m.weights[i] * f(m.points[i]);
          }
          return {pairwise_sum(std::span<const Complex>(vals)), 0.0};
        } else {
          if (!(m.radius > 0.0))
            throw InvalidInputError("tube restriction radius must be > 0");
          const auto& tube = m;
          Integrand g = [&tube, &f](std::span<const double> x) -> Complex {
            return tube.dist(x) <= tube.radius ? f(x) : Complex(0.0, 0.0);
          };
          return measure_integrate(*tube.inner, g, scheme);
        }
      },
      nu.v);
}

double tube_mass(const WeightMeasure& nu, const DistanceFn& dist, double t,
                 const Scheme& scheme) {
  if (t < 0.0) throw InvalidInputError("tube radius must be nonnegative");
  Integral r = measure_integrate(
      nu,
      [&](std::span<const double> x) -> Complex {
        return dist(x) <= t ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
      },
      scheme);
  return r.value.real();
}

}  // namespace fraczeta::geometry
