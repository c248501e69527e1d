#include "fraczeta/ncfunc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fraczeta/errors.hpp"
#include "fraczeta/rng.hpp"

namespace fraczeta::nc {

using geometry::Integral;
using zeta::Method;
using zeta::ZetaValue;

MatrixTuple WeightBoxFamily::at(std::span<const double> theta) const {
  MatrixTuple out;
  out.n = n;
  out.d = d;
  out.entries = base;
  for (std::size_t j = 0; j < coeffs.size(); ++j)
    for (int i = 0; i < d; ++i) out.entries[i] += coeffs[j][i] * theta[j];
  return out;
}

double WeightBoxFamily::density_at(std::span<const double> theta) const {
  if (std::holds_alternative<UniformDensity>(density)) return 1.0;
  double alpha = std::get<GaussianDensity>(density).alpha;
  double r2 = 0.0;
  for (double t : theta) r2 += t * t;
  return std::exp(-alpha * r2);
}

double WeightBoxFamily::mass() const {
  double m = scale;
  if (std::holds_alternative<UniformDensity>(density)) return m * box.volume();
  double alpha = std::get<GaussianDensity>(density).alpha;
  double sa = std::sqrt(alpha);
  for (int i = 0; i < box.dim(); ++i)
    m *= 0.5 * std::sqrt(M_PI) / sa *
         (std::erf(sa * box.hi[i]) - std::erf(sa * box.lo[i]));
  return m;
}

void WeightBoxFamily::validate() const {
  int m = box.dim();
  if (m < 1 || m > 3)
    throw InvalidInputError("weight family needs 1..3 parameters");
  if (static_cast<int>(base.size()) != d ||
      static_cast<int>(coeffs.size()) != m)
    throw InvalidInputError("weight family embedding shape mismatch");
  for (const auto& row : coeffs)
    if (static_cast<int>(row.size()) != d)
      throw InvalidInputError("weight family embedding shape mismatch");
  validate_vector_part(xi, n);
  if (!(scale >= 0.0)) throw InvalidInputError("weight scale must be >= 0");
}

double NcWeight::mass() const {
  double acc = 0.0;
  for (const auto& c : components) {
    if (const auto* atoms = std::get_if<std::vector<NcAtom>>(&c.v)) {
      for (const auto& a : *atoms) acc += c.weight * a.weight;
    } else {
      acc += c.weight * std::get<WeightBoxFamily>(c.v).mass();
    }
  }
  return acc;
}

void NcWeight::validate() const {
  if (components.empty()) throw InvalidInputError("weight has no components");
  for (const auto& c : components) {
    if (c.weight < 0.0) throw InvalidInputError("component weights must be >= 0");
    if (const auto* atoms = std::get_if<std::vector<NcAtom>>(&c.v)) {
      for (const auto& a : *atoms) {
        a.point.validate();
        validate_vector_part(a.xi, n);
        if (a.weight < 0.0)
          throw InvalidInputError("atom weights must be >= 0");
      }
    } else {
      const auto& fam = std::get<WeightBoxFamily>(c.v);
      if (fam.n != n || fam.d != d)
        throw InvalidInputError("weight family dimensions mismatch");
      fam.validate();
    }
  }
  if (!(mass() < std::numeric_limits<double>::infinity()))
    throw InvalidInputError("weight mass must be finite");
}

void NcScene::validate() const {
  tau.validate();
  nu.validate();
  if (tau.n != n || tau.d != d || nu.n != n || nu.d != d)
    throw InvalidInputError("scene dimensions are inconsistent");
  if (std::abs(tau.mass() - 1.0) > 1e-9)
    throw InvalidInputError("state mass must be 1");
  if (!(R > 0.0)) throw InvalidInputError("norm bound R must be positive");
  if (!(g.norm_R(R) < std::numeric_limits<double>::infinity()))
    throw InvalidInputError("observable norm must be finite");
  if (distance_floor < 0.0)
    throw InvalidInputError("distance floor must be >= 0");
}

// ---- evaluator ---------------------------------------------------------

Evaluator::Evaluator(NcScene scene, double dist_tol)
    : scene_(std::move(scene)), dist_tol_(dist_tol) {
  scene_.validate();
}

const Evaluator::Lattice& Evaluator::lattice(std::size_t comp,
                                             const NcScheme& scheme,
                                             bool coarse) const {
  std::ostringstream key;
  if (const auto* grid = std::get_if<NcGrid>(&scheme)) {
    int panels = coarse ? std::max(1, grid->panels / 2) : grid->panels;
    key << comp << ":g:" << panels << ":" << grid->order;
  } else {
    key << comp << ":m:" << std::get<NcMc>(scheme).samples;
  }
  {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(key.str());
    if (it != cache_.end()) return it->second;
  }

  const auto& fam = std::get<WeightBoxFamily>(scene_.nu.components[comp].v);
  const double cw = scene_.nu.components[comp].weight;
  const int m = fam.box.dim();
  const bool g_is_one = scene_.g.is_identity();

  Lattice lat;
  auto add_node = [&](std::span<const double> theta, double w) {
    MatrixTuple X = fam.at(theta);
    lat.wdens.push_back(w * cw * fam.scale * fam.density_at(theta));
    lat.dist.push_back(nc_distance(X, scene_.tau, dist_tol_));
    lat.gexp.push_back(g_is_one ? Complex(1.0, 0.0)
                                : vector_expectation(
                                      fam.xi, nc_poly_eval(scene_.g, X)));
  };

  if (const auto* grid = std::get_if<NcGrid>(&scheme)) {
    int panels = coarse ? std::max(1, grid->panels / 2) : grid->panels;
    const auto& rule = gauss_legendre(grid->order);
    const int per_axis = panels * grid->order;
    std::vector<std::vector<double>> nodes(m), weights(m);
    for (int i = 0; i < m; ++i) {
      double h = (fam.box.hi[i] - fam.box.lo[i]) / panels;
      for (int p = 0; p < panels; ++p)
        for (int q = 0; q < grid->order; ++q) {
          nodes[i].push_back(fam.box.lo[i] + p * h +
                             0.5 * h * (1.0 + rule.nodes[q]));
          weights[i].push_back(0.5 * h * rule.weights[q]);
        }
    }
    std::size_t total = 1;
    for (int i = 0; i < m; ++i) total *= per_axis;
    std::vector<double> theta(m);
    for (std::size_t k = 0; k < total; ++k) {
      std::size_t rem = k;
      double w = 1.0;
      for (int i = m - 1; i >= 0; --i) {
        std::size_t idx = rem % per_axis;
        rem /= per_axis;
        theta[i] = nodes[i][idx];
        w *= weights[i][idx];
      }
      add_node(theta, w);
    }
  } else {
    const auto& mc = std::get<NcMc>(scheme);
    CounterRng rng(scene_.seed + 0x5eed * comp);
    const double vol = fam.box.volume();
    std::vector<double> theta(m);
    for (std::uint64_t i = 0; i < mc.samples; ++i) {
      for (int j = 0; j < m; ++j)
        theta[j] = rng.uniform(i, j, fam.box.lo[j], fam.box.hi[j]);
      add_node(theta, vol / double(mc.samples));
    }
  }

  std::lock_guard lock(mutex_);
  return cache_.emplace(key.str(), std::move(lat)).first->second;
}

template <typename Kernel>
Integral Evaluator::accumulate(const NcScheme& scheme, Kernel kern) const {
  Complex value = 0.0;
  double err = 0.0;
  const bool g_is_one = scene_.g.is_identity();
  for (std::size_t c = 0; c < scene_.nu.components.size(); ++c) {
    const auto& comp = scene_.nu.components[c];
    if (comp.weight <= 0.0) continue;
    if (const auto* atoms = std::get_if<std::vector<NcAtom>>(&comp.v)) {
      std::vector<Complex> vals;
      for (const auto& a : *atoms) {
        double dist = nc_distance(a.point, scene_.tau, dist_tol_);
        Complex gexp = g_is_one
                           ? Complex(1.0, 0.0)
                           : vector_expectation(
                                 a.xi, nc_poly_eval(scene_.g, a.point));
        vals.push_back(comp.weight * a.weight * kern(dist, gexp));
      }
      value += pairwise_sum(std::span<const Complex>(vals));
      continue;
    }
    const Lattice& fine = lattice(c, scheme, false);
    std::vector<Complex> vals(fine.wdens.size());
    for (std::size_t i = 0; i < vals.size(); ++i)
      vals[i] = fine.wdens[i] * kern(fine.dist[i], fine.gexp[i]);
    Complex vf = pairwise_sum(std::span<const Complex>(vals));
    value += vf;
    if (std::holds_alternative<NcGrid>(scheme)) {
      const Lattice& half = lattice(c, scheme, true);
      std::vector<Complex> cvals(half.wdens.size());
      for (std::size_t i = 0; i < cvals.size(); ++i)
        cvals[i] = half.wdens[i] * kern(half.dist[i], half.gexp[i]);
      err += std::abs(vf - pairwise_sum(std::span<const Complex>(cvals)));
    } else {
      // per-sample estimates are n * vals[i]; their mean is vf
      const double n = double(vals.size());
      std::vector<double> dev(vals.size());
      for (std::size_t i = 0; i < vals.size(); ++i)
        dev[i] = std::norm(n * vals[i] - vf);
      double var = pairwise_sum(std::span<const double>(dev)) /
                   (n * std::max(1.0, n - 1.0));
      err += std::sqrt(var);
    }
  }
  return {value, err};
}

namespace {

void check_nc_abscissa(Complex s, int d, double hint) {
  if (s == Complex(double(d), 0.0)) return;
  if (s.real() <= hint + zeta::kAbscissaGuard)
    throw DivergentAbscissaError(
        "Re s is at or left of the estimated abscissa", hint);
}

}  // namespace

ZetaValue Evaluator::zeta(Complex s, const NcScheme& scheme) const {
  check_nc_abscissa(s, scene_.d, scene_.abscissa_hint);
  const Complex expo = s - double(scene_.d);
  const double floor = scene_.distance_floor;
  const int d = scene_.d;
  Integral r = accumulate(scheme, [&](double dist, Complex gexp) -> Complex {
    if (dist <= floor) {
      if (expo == Complex(0.0, 0.0)) return gexp;  // t^0 == 1 everywhere
      if (s.real() > double(d) || floor > 0.0) return {0.0, 0.0};
      throw DivergentAbscissaError(
          "zero distance left of Re s = d without a declared floor",
          scene_.abscissa_hint);
    }
    return real_pow(dist, expo) * gexp;
  });
  return {r.value, r.err, Method::direct, s, scene_.abscissa_hint};
}

ZetaValue Evaluator::zeta_derivative(Complex s, const NcScheme& scheme) const {
  check_nc_abscissa(s, scene_.d, scene_.abscissa_hint);
  const Complex expo = s - double(scene_.d);
  const double floor = scene_.distance_floor;
  Integral r = accumulate(scheme, [&](double dist, Complex gexp) -> Complex {
    if (dist <= floor) return {0.0, 0.0};
    return real_pow(dist, expo) * std::log(dist) * gexp;
  });
  return {r.value, r.err, Method::direct, s, scene_.abscissa_hint};
}

Integral Evaluator::tube(double t, const NcScheme& scheme) const {
  if (!(t > 0.0)) throw InvalidInputError("tube radius must be positive");
  return accumulate(scheme, [&](double dist, Complex gexp) -> Complex {
    return dist <= t ? gexp : Complex(0.0, 0.0);
  });
}

Integral Evaluator::nu_of_g(const NcScheme& scheme) const {
  return accumulate(scheme,
                    [](double, Complex gexp) -> Complex { return gexp; });
}

double Evaluator::max_support_distance(const NcScheme& scheme) const {
  double m = 0.0;
  for (std::size_t c = 0; c < scene_.nu.components.size(); ++c) {
    const auto& comp = scene_.nu.components[c];
    if (comp.weight <= 0.0) continue;
    if (const auto* atoms = std::get_if<std::vector<NcAtom>>(&comp.v)) {
      for (const auto& a : *atoms)
        m = std::max(m, nc_distance(a.point, scene_.tau, dist_tol_));
    } else {
      const Lattice& lat = lattice(c, scheme, false);
      for (double dd : lat.dist) m = std::max(m, dd);
    }
  }
  return m;
}

ZetaValue Evaluator::zeta_via_tube(Complex s, double delta,
                                   const TubeRouteParams& params) const {
  if (!(delta > 0.0)) throw InvalidInputError("delta must be positive");
  check_nc_abscissa(s, scene_.d, scene_.abscissa_hint);
  const Complex expo = s - double(scene_.d);
  Integral nug = nu_of_g(params.scheme);
  if (expo == Complex(0.0, 0.0))
    return {nug.value, nug.err, Method::tube, s, scene_.abscissa_hint};

  const int K = std::max(8, params.t_points);
  std::vector<double> ts(K);
  std::vector<Complex> vs(K);
  std::vector<double> es(K);
  for (int k = 0; k < K; ++k) {
    ts[k] = delta * std::pow(10.0, -params.decades * k / (K - 1));
    Integral v = tube(ts[k], params.scheme);
    vs[k] = v.value;
    es[k] = v.err;
  }

  auto mellin = [&](int stride) {
    Complex acc = 0.0;
    for (int k = 0; k + stride < K; k += stride) {
      double thi = ts[k], tlo = ts[k + stride];
      Complex vhi = vs[k], vlo = vs[k + stride];
      Complex alpha = (vhi - vlo) / (thi - tlo);
      Complex beta = vhi - alpha * thi;
      acc += alpha * pow_diff_over(tlo, thi, expo + 1.0) +
             beta * pow_diff_over(tlo, thi, expo);
    }
    return acc;
  };
  Complex integral = mellin(1);
  double interp_err = std::abs(integral - mellin(2));

  // power-law continuation below the smallest sample
  double tail_mag = 0.0;
  if (std::abs(vs[K - 1]) > 0.0) {
    double gamma = scene_.d - scene_.abscissa_hint;
    if (std::abs(vs[K - 2]) > 0.0 && std::abs(vs[K - 1]) > 0.0) {
      double g_est = std::log(std::abs(vs[K - 2]) / std::abs(vs[K - 1])) /
                     std::log(ts[K - 2] / ts[K - 1]);
      if (std::isfinite(g_est)) gamma = g_est;
    }
    gamma = std::clamp(gamma, 0.05, 2.0 * scene_.d);
    Complex tail = vs[K - 1] * real_pow(ts[K - 1], expo) / (expo + gamma);
    integral += tail;
    tail_mag = std::abs(tail);
  }

  // propagate tube-sample errors through the Mellin weights
  double sample_err = 0.0;
  for (int k = 0; k + 1 < K; ++k)
    sample_err += 0.5 * (es[k] + es[k + 1]) *
                  std::abs(pow_diff_over(ts[k + 1], ts[k],
                                         Complex(s.real() - scene_.d, 0.0)));

  Complex value = real_pow(delta, expo) * nug.value - expo * integral;
  double err = std::abs(real_pow(delta, expo)) * nug.err +
               std::abs(expo) * (sample_err + interp_err + 1e-3 * tail_mag);
  return {value, err, Method::tube, s, scene_.abscissa_hint};
}

// ---- transformations ---------------------------------------------------

namespace {

Mat mix_entries(const std::vector<double>& o, int d,
                const std::vector<Mat>& entries, int i) {
  Mat acc(entries[0].dim());
  for (int j = 0; j < d; ++j) acc += entries[j] * o[i * d + j];
  return acc;
}

void check_special_orthogonal(const std::vector<double>& o, int d) {
  if (static_cast<int>(o.size()) != d * d)
    throw InvalidInputError("rotation must be d x d");
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double acc = 0.0;
      for (int k = 0; k < d; ++k) acc += o[k * d + i] * o[k * d + j];
      if (std::abs(acc - (i == j ? 1.0 : 0.0)) > 1e-12)
        throw InvalidInputError("rotation is not orthogonal");
    }
  double det = 0.0;
  if (d == 1) det = o[0];
  else if (d == 2) det = o[0] * o[3] - o[1] * o[2];
  else
    det = o[0] * (o[4] * o[8] - o[5] * o[7]) -
          o[1] * (o[3] * o[8] - o[5] * o[6]) +
          o[2] * (o[3] * o[7] - o[4] * o[6]);
  if (std::abs(det - 1.0) > 1e-10)
    throw InvalidInputError("rotation must have determinant +1");
}

NcPolynomial substitute_letters(const NcPolynomial& g,
                                const std::vector<double>& o, int d) {
  // letter i becomes sum_j o[j*d+i] X_j (pullback by the transpose)
  NcPolynomial out;
  for (const auto& term : g.terms) {
    std::vector<std::pair<Complex, std::vector<int>>> partial{
        {term.coeff, {}}};
    for (int letter : term.word) {
      std::vector<std::pair<Complex, std::vector<int>>> next;
      for (const auto& [coef, word] : partial)
        for (int j = 0; j < d; ++j) {
          double c = o[j * d + letter];
          if (c == 0.0) continue;
          auto w = word;
          w.push_back(j);
          next.emplace_back(coef * c, std::move(w));
        }
      partial = std::move(next);
    }
    for (auto& [coef, word] : partial) out.terms.push_back({coef, word});
  }
  return out;
}

}  // namespace

NcScene transform_scene(const NcScene& scene, const Transform& op) {
  NcScene out = scene;

  auto for_each_state_matrix = [&](auto&& fn) {
    for (auto& c : out.tau.components) {
      if (auto* atoms = std::get_if<std::vector<NcAtom>>(&c.support)) {
        for (auto& a : *atoms) fn(a.point.entries, &a.xi);
      } else {
        auto& fam = std::get<ParamFamily>(c.support);
        fn(fam.base, &fam.xi);
        for (auto& row : fam.coeffs) fn(row, nullptr);
      }
    }
    for (auto& c : out.nu.components) {
      if (auto* atoms = std::get_if<std::vector<NcAtom>>(&c.v)) {
        for (auto& a : *atoms) fn(a.point.entries, &a.xi);
      } else {
        auto& fam = std::get<WeightBoxFamily>(c.v);
        fn(fam.base, &fam.xi);
        for (auto& row : fam.coeffs) fn(row, nullptr);
      }
    }
  };

  if (const auto* tr = std::get_if<Translate>(&op)) {
    if (!scene.g.is_identity())
      throw UnsupportedTransformError(
          "translation pullback leaves the polynomial algebra; use g = 1");
    const auto& x0 = tr->offset;
    if (x0.d != scene.d || x0.n != scene.n)
      throw InvalidInputError("offset dimensions mismatch the scene");
    // only support points move; affine coefficient rows stay
    for (auto& c : out.tau.components) {
      if (auto* atoms = std::get_if<std::vector<NcAtom>>(&c.support)) {
        for (auto& a : *atoms)
          for (int i = 0; i < scene.d; ++i)
            a.point.entries[i] -= x0.entries[i];
      } else {
        auto& fam = std::get<ParamFamily>(c.support);
        for (int i = 0; i < scene.d; ++i) fam.base[i] -= x0.entries[i];
      }
    }
    for (auto& c : out.nu.components) {
      if (auto* atoms = std::get_if<std::vector<NcAtom>>(&c.v)) {
        for (auto& a : *atoms)
          for (int i = 0; i < scene.d; ++i)
            a.point.entries[i] -= x0.entries[i];
      } else {
        auto& fam = std::get<WeightBoxFamily>(c.v);
        for (int i = 0; i < scene.d; ++i) fam.base[i] -= x0.entries[i];
      }
    }
    double off = 0.0;
    for (const auto& e : x0.entries) off = std::max(off, operator_norm(e));
    out.R = scene.R + off;
    for (auto& c : out.tau.components)
      if (auto* atoms = std::get_if<std::vector<NcAtom>>(&c.support))
        for (auto& a : *atoms) a.point.norm_bound = out.R;
    return out;
  }

  if (const auto* sc = std::get_if<Scale>(&op)) {
    if (!(sc->k > 0.0)) throw InvalidInputError("scale factor must be > 0");
    const double k = sc->k;
    for_each_state_matrix([&](std::vector<Mat>& ms, VectorPart*) {
      for (auto& m : ms) m = m * k;
    });
    for (auto& c : out.tau.components)
      if (auto* atoms = std::get_if<std::vector<NcAtom>>(&c.support))
        for (auto& a : *atoms) a.point.norm_bound *= k;
    out.R = scene.R * k;
    for (auto& term : out.g.terms)
      term.coeff *= std::pow(k, -double(term.word.size()));
    return out;
  }

  if (const auto* ro = std::get_if<Rotate>(&op)) {
    check_special_orthogonal(ro->o, scene.d);
    auto mix_rows = [&](std::vector<Mat>& ms) {
      std::vector<Mat> mixed(ms.size());
      for (int i = 0; i < scene.d; ++i)
        mixed[i] = mix_entries(ro->o, scene.d, ms, i);
      ms = std::move(mixed);
    };
    for_each_state_matrix(
        [&](std::vector<Mat>& ms, VectorPart*) { mix_rows(ms); });
    out.R = scene.R * std::sqrt(double(scene.d));
    for (auto& c : out.tau.components)
      if (auto* atoms = std::get_if<std::vector<NcAtom>>(&c.support))
        for (auto& a : *atoms) a.point.norm_bound = out.R;
    out.g = substitute_letters(scene.g, ro->o, scene.d);
    return out;
  }

  const auto& cj = std::get<Conjugate>(op);
  if (!scene.tau.is_tracial())
    throw UnsupportedTransformError(
        "unitary conjugation needs a tracial state");
  if (cj.u.dim() != scene.n)
    throw InvalidInputError("conjugator dimension mismatch");
  Mat ut = cj.u.transpose();
  Mat utu = ut * cj.u;
  for (int i = 0; i < scene.n; ++i)
    for (int j = 0; j < scene.n; ++j)
      if (std::abs(utu(i, j) - (i == j ? 1.0 : 0.0)) > 1e-12)
        throw InvalidInputError("conjugator is not orthogonal");
  for_each_state_matrix([&](std::vector<Mat>& ms, VectorPart* xi) {
    for (auto& m : ms) m = cj.u * m * ut;
    if (xi) {
      if (auto* pv = std::get_if<PureVector>(xi)) {
        std::vector<double> rotated(scene.n, 0.0);
        for (int i = 0; i < scene.n; ++i)
          for (int j = 0; j < scene.n; ++j)
            rotated[i] += cj.u(i, j) * pv->coords[j];
        pv->coords = std::move(rotated);
      }
    }
  });
  return out;
}

// ---- decomposition -----------------------------------------------------

namespace {

std::pair<NcWeight, NcWeight> split_weight(const NcWeight& nu) {
  NcWeight a = nu, b = nu;
  a.components.clear();
  b.components.clear();
  for (const auto& c : nu.components) {
    if (const auto* atoms = std::get_if<std::vector<NcAtom>>(&c.v)) {
      std::vector<NcAtom> first(atoms->begin(),
                                atoms->begin() + atoms->size() / 2);
      std::vector<NcAtom> second(atoms->begin() + atoms->size() / 2,
                                 atoms->end());
      if (!first.empty()) a.components.push_back({c.weight, std::move(first)});
      if (!second.empty())
        b.components.push_back({c.weight, std::move(second)});
    } else {
      auto lofam = std::get<WeightBoxFamily>(c.v);
      auto hifam = lofam;
      double mid = 0.5 * (lofam.box.lo[0] + lofam.box.hi[0]);
      lofam.box.hi[0] = mid;
      hifam.box.lo[0] = mid;
      a.components.push_back({c.weight, std::move(lofam)});
      b.components.push_back({c.weight, std::move(hifam)});
    }
  }
  return {std::move(a), std::move(b)};
}

}  // namespace

DecompositionReport decomposition_check(const NcScene& scene,
                                        const DecompositionSplit& split,
                                        std::span<const Complex> s_grid,
                                        double separation_eps,
                                        const NcScheme& scheme) {
  if (split.a1 < 0.0 || split.a2 < 0.0 ||
      std::abs(split.a1 + split.a2 - 1.0) > 1e-12)
    throw InvalidInputError("mixture weights must be >= 0 and sum to 1");
  if (s_grid.empty()) throw InvalidInputError("empty s grid");

  DecompositionReport report;
  report.s_grid.assign(s_grid.begin(), s_grid.end());
  report.epsilon = separation_eps;

  Evaluator full(scene);

  // (i) linearity in nu, via an exact two-piece split of the weight
  {
    auto [nua, nub] = split_weight(scene.nu);
    NcScene sa = scene, sb = scene;
    sa.nu = nua;
    sb.nu = nub;
    Evaluator ea(sa), eb(sb);
    ZetaValue whole = full.zeta(s_grid.front(), scheme);
    ZetaValue za = ea.zeta(s_grid.front(), scheme);
    ZetaValue zb = eb.zeta(s_grid.front(), scheme);
    report.linearity_gap = std::abs(whole.value - za.value - zb.value);
    report.linearity_tol =
        3.0 * (whole.err + za.err + zb.err) +
        1e-11 * std::max(1.0, std::abs(whole.value));
  }

  // degenerate split: tau == tau1, h must vanish identically
  const bool trivial = split.a2 == 0.0;

  NcScene scene1 = scene;
  scene1.tau = split.tau1;
  Evaluator part1(scene1);

  report.delta = std::max(full.max_support_distance(scheme),
                          part1.max_support_distance(scheme)) *
                     (1.0 + 1e-6) +
                 1e-12;

  // (iii) measured separation from tau2 over the weight's effective support
  if (!trivial) {
    double min_d2 = std::numeric_limits<double>::infinity();
    std::vector<double> witness;
    for (const auto& c : scene.nu.components) {
      if (c.weight <= 0.0) continue;
      if (const auto* atoms = std::get_if<std::vector<NcAtom>>(&c.v)) {
        for (const auto& a : *atoms) {
          double dd = nc_distance(a.point, split.tau2, 1e-10);
          if (dd < min_d2) min_d2 = dd;
        }
      } else {
        const auto& fam = std::get<WeightBoxFamily>(c.v);
        const int m = fam.box.dim();
        const int per_axis = 9;
        std::size_t total = 1;
        for (int i = 0; i < m; ++i) total *= per_axis;
        std::vector<double> theta(m);
        for (std::size_t k = 0; k < total; ++k) {
          std::size_t rem = k;
          for (int i = 0; i < m; ++i) {
            std::size_t idx = rem % per_axis;
            rem /= per_axis;
            theta[i] = fam.box.lo[i] + (idx + 0.5) *
                                           (fam.box.hi[i] - fam.box.lo[i]) /
                                           per_axis;
          }
          if (fam.density_at(theta) < 1e-14) continue;
          double dd = nc_distance(fam.at(theta), split.tau2, 1e-10);
          if (dd < min_d2) {
            min_d2 = dd;
            witness = theta;
          }
        }
      }
    }
    report.min_distance_to_tau2 = min_d2;
    report.separation_ok = separation_eps > 0.0 && min_d2 > separation_eps;
    if (separation_eps > 0.0 && min_d2 <= separation_eps)
      throw SeparationViolatedError(
          "claimed separation is violated on the weight support", witness);

    // tube functional of tau2 must vanish strictly below epsilon
    if (separation_eps > 0.0) {
      NcScene scene2 = scene;
      scene2.tau = split.tau2;
      Evaluator part2(scene2);
      for (double f : {0.3, 0.6, 0.9}) {
        double t = f * separation_eps;
        if (t <= 0.0) continue;
        report.max_tube_tau2_below_eps =
            std::max(report.max_tube_tau2_below_eps,
                     std::abs(part2.tube(t, scheme).value));
      }
    }
  }

  // (ii) h(s) = zeta_tau - zeta_tau1 on the grid, with its truncated bound
  const double gnorm = scene.g.norm_R(scene.R);
  const double numass = scene.nu.mass();
  for (Complex s : s_grid) {
    ZetaValue zf = full.zeta(s, scheme);
    ZetaValue z1 = part1.zeta(s, scheme);
    Complex h = zf.value - z1.value;
    report.h_values.push_back(h);
    double bound = 0.0;
    if (trivial) {
      bound = 3.0 * (zf.err + z1.err) + 1e-11;
    } else if (separation_eps > 0.0 && separation_eps < report.delta) {
      bound = std::abs(s - double(scene.d)) * numass * gnorm *
                  std::abs(pow_diff_over(separation_eps, report.delta,
                                         Complex(s.real() - scene.d, 0.0))) +
              3.0 * (zf.err + z1.err);
    } else {
      bound = std::numeric_limits<double>::infinity();  // only finiteness
    }
    report.h_bounds.push_back(bound);
    if (!(std::abs(h) <= bound)) report.h_within_bounds = false;
  }
  return report;
}

}  // namespace fraczeta::nc
