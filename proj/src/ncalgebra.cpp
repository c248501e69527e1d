#include "fraczeta/ncalgebra.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "fraczeta/errors.hpp"

namespace fraczeta::nc {

void MatrixTuple::validate() const {
  if (n < 1 || n > kMaxPublicDim)
    throw InvalidInputError("matrix dimension must be in [1, 8]");
  if (d < 1 || d > 3) throw InvalidInputError("tuple length must be in [1, 3]");
  if (static_cast<int>(entries.size()) != d)
    throw InvalidInputError("tuple entry count mismatch");
  for (const auto& m : entries) {
    if (m.dim() != n) throw InvalidInputError("entry dimension mismatch");
    if (!m.is_symmetric()) throw InvalidInputError("entries must be symmetric");
    if (norm_bound > 0.0 && operator_norm(m) > norm_bound * (1.0 + 1e-12))
      throw InvalidInputError("entry operator norm exceeds the bound R");
  }
}

NcPolynomial NcPolynomial::one() {
  NcPolynomial g;
  g.terms.push_back({Complex(1.0, 0.0), {}});
  return g;
}

bool NcPolynomial::is_identity() const {
  return terms.size() == 1 && terms[0].word.empty() &&
         terms[0].coeff == Complex(1.0, 0.0);
}

double NcPolynomial::norm_R(double R) const {
  double acc = 0.0;
  for (const auto& t : terms)
    acc += std::abs(t.coeff) * std::pow(R, double(t.word.size()));
  return acc;
}

void validate_vector_part(const VectorPart& xi, int n) {
  if (const auto* p = std::get_if<PureVector>(&xi)) {
    if (static_cast<int>(p->coords.size()) != n)
      throw InvalidInputError("vector part dimension mismatch");
    double s = 0.0;
    for (double c : p->coords) s += c * c;
    if (std::abs(std::sqrt(s) - 1.0) > 1e-12)
      throw InvalidInputError("pure vector must be a unit vector");
  }
}

Mat energy(const MatrixTuple& X) {
  Mat acc(X.n);
  for (const auto& e : X.entries) {
    if (e.dim() != X.n) throw InvalidInputError("entry dimension mismatch");
    acc += e * e;
  }
  return acc;
}

CMat nc_poly_eval(const NcPolynomial& g, const MatrixTuple& X) {
  CMat out{Mat(X.n), Mat(X.n)};
  for (const auto& term : g.terms) {
    Mat word = Mat::identity(X.n);
    for (int letter : term.word) {
      if (letter < 0 || letter >= X.d)
        throw InvalidInputError("polynomial letter out of range");
      word = word * X.entries[letter];
    }
    out.re += word * term.coeff.real();
    out.im += word * term.coeff.imag();
  }
  return out;
}

double vector_expectation(const VectorPart& xi, const Mat& m) {
  if (std::holds_alternative<TraceState>(xi)) {
    double tr = 0.0;
    for (int i = 0; i < m.dim(); ++i) tr += m(i, i);
    return tr / m.dim();
  }
  const auto& v = std::get<PureVector>(xi).coords;
  double acc = 0.0;
  for (int i = 0; i < m.dim(); ++i) {
    double row = 0.0;
    for (int j = 0; j < m.dim(); ++j) row += m(i, j) * v[j];
    acc += v[i] * row;
  }
  return acc;
}

Complex vector_expectation(const VectorPart& xi, const CMat& m) {
  return {vector_expectation(xi, m.re), vector_expectation(xi, m.im)};
}

double spectral_support_min(const Mat& m, const VectorPart& xi, double eps,
                            double cluster_tol) {
  if (!m.is_symmetric()) throw InvalidInputError("matrix is not symmetric");
  if (std::holds_alternative<TraceState>(xi)) return sym_eigs(m).front();

  const auto& v = std::get<PureVector>(xi).coords;
  SymEigen eig = sym_eigen(m);
  const int n = m.dim();
  const double scale = std::max(1.0, std::abs(eig.values.front())) +
                       std::abs(eig.values.back());
  int k = 0;
  while (k < n) {
    // cluster of eigenvalues sharing one projection
    int k2 = k + 1;
    while (k2 < n && eig.values[k2] - eig.values[k2 - 1] <= cluster_tol * scale)
      ++k2;
    double weight = 0.0;
    for (int j = k; j < k2; ++j) {
      double dot = 0.0;
      for (int i = 0; i < n; ++i) dot += v[i] * eig.vectors(i, j);
      weight += dot * dot;
    }
    if (weight > eps) return eig.values[k];
    k = k2;
  }
  throw EmptySupportError("no eigenprojection carries weight above eps");
}

// ---- states ------------------------------------------------------------

MatrixTuple ParamFamily::at(std::span<const double> theta) const {
  MatrixTuple out;
  out.n = n;
  out.d = d;
  out.entries = base;
  for (std::size_t j = 0; j < factors.size(); ++j)
    for (int i = 0; i < d; ++i) out.entries[i] += coeffs[j][i] * theta[j];
  return out;
}

void ParamFamily::validate() const {
  if (factors.empty() || factors.size() > 3)
    throw InvalidInputError("parameter family needs 1..3 factors");
  if (static_cast<int>(base.size()) != d)
    throw InvalidInputError("family base entry count mismatch");
  if (coeffs.size() != factors.size())
    throw InvalidInputError("family coefficient count mismatch");
  for (const auto& row : coeffs) {
    if (static_cast<int>(row.size()) != d)
      throw InvalidInputError("family coefficient entry count mismatch");
    for (const auto& m : row)
      if (m.dim() != n || !m.is_symmetric())
        throw InvalidInputError("family coefficients must be symmetric n x n");
  }
  for (const auto& m : base)
    if (m.dim() != n || !m.is_symmetric())
      throw InvalidInputError("family base must be symmetric n x n");
  validate_vector_part(xi, n);
  for (const auto& f : factors)
    if (const auto* ifs = std::get_if<Ifs1D>(&f)) {
      if (ifs->sys.ambient_dim != 1)
        throw InvalidInputError("family attractor factors must be 1D");
      ifs->sys.validate();
    }
}

double NcState::mass() const {
  double acc = 0.0;
  for (const auto& c : components) {
    double inner = 1.0;
    if (const auto* atoms = std::get_if<std::vector<NcAtom>>(&c.support)) {
      inner = 0.0;
      for (const auto& a : *atoms) inner += a.weight;
    }
    acc += c.weight * inner;
  }
  return acc;
}

bool NcState::is_tracial() const {
  for (const auto& c : components) {
    if (const auto* atoms = std::get_if<std::vector<NcAtom>>(&c.support)) {
      for (const auto& a : *atoms)
        if (!std::holds_alternative<TraceState>(a.xi)) return false;
    } else if (!std::holds_alternative<TraceState>(
                   std::get<ParamFamily>(c.support).xi)) {
      return false;
    }
  }
  return true;
}

void NcState::validate() const {
  if (components.empty()) throw InvalidInputError("state has no components");
  for (const auto& c : components) {
    if (c.weight < 0.0) throw InvalidInputError("component weights must be >= 0");
    if (const auto* atoms = std::get_if<std::vector<NcAtom>>(&c.support)) {
      if (atoms->empty() && c.weight > 0.0)
        throw InvalidInputError("atom component has empty support");
      for (const auto& a : *atoms) {
        a.point.validate();
        validate_vector_part(a.xi, n);
        if (a.point.n != n || a.point.d != d)
          throw InvalidInputError("atom dimensions mismatch the state");
      }
    } else {
      const auto& fam = std::get<ParamFamily>(c.support);
      if (fam.n != n || fam.d != d)
        throw InvalidInputError("family dimensions mismatch the state");
      fam.validate();
    }
  }
}

namespace {

double clamped_sqrt(double x) { return std::sqrt(std::max(0.0, x)); }

// sqrt of the spectral support minimum of E(X - Y) seen from xi
double point_value(const MatrixTuple& X, const MatrixTuple& Y,
                   const VectorPart& xi) {
  MatrixTuple diff = X;
  for (int i = 0; i < X.d; ++i) diff.entries[i] -= Y.entries[i];
  return clamped_sqrt(spectral_support_min(energy(diff), xi));
}

// Same but through the smallest eigenvalue; a valid lower bound for any xi.
double point_floor(const MatrixTuple& X, const MatrixTuple& Y) {
  MatrixTuple diff = X;
  for (int i = 0; i < X.d; ++i) diff.entries[i] -= Y.entries[i];
  return clamped_sqrt(sym_eigs(energy(diff)).front());
}

struct Cell1D {
  double lo = 0.0, hi = 0.0;  // interval hull of the factor piece
  double feasible = 0.0;      // a support point inside the piece
  // for attractor factors: the composed 1D affine t -> a t + b
  double a = 1.0, b = 0.0;
  bool splittable = true;
};

Cell1D root_cell(const ParamFactor& f) {
  Cell1D c;
  if (const auto* iv = std::get_if<Interval1D>(&f)) {
    c.lo = iv->lo;
    c.hi = iv->hi;
    c.feasible = 0.5 * (iv->lo + iv->hi);
  } else if (const auto* di = std::get_if<Dirac1D>(&f)) {
    c.lo = c.hi = c.feasible = di->value;
    c.splittable = false;
  } else {
    const auto& sys = std::get<Ifs1D>(f).sys;
    c.lo = sys.bounding_box.lo[0];
    c.hi = sys.bounding_box.hi[0];
    c.a = 1.0;
    c.b = 0.0;
    // fixed point of the first map is an attractor point
    const auto& m = sys.maps[0];
    double ma = m.rotation.empty() ? m.ratio : m.ratio * m.rotation[0];
    c.feasible = m.translation[0] / (1.0 - ma);
  }
  return c;
}

std::vector<Cell1D> split_cell(const ParamFactor& f, const Cell1D& c) {
  if (std::holds_alternative<Interval1D>(f)) {
    double mid = 0.5 * (c.lo + c.hi);
    Cell1D left = c, right = c;
    left.hi = mid;
    left.feasible = 0.5 * (left.lo + left.hi);
    right.lo = mid;
    right.feasible = 0.5 * (right.lo + right.hi);
    return {left, right};
  }
  const auto& sys = std::get<Ifs1D>(f).sys;
  const double rx = sys.bounding_box.lo[0], ry = sys.bounding_box.hi[0];
  std::vector<Cell1D> out;
  for (const auto& m : sys.maps) {
    double ma = m.rotation.empty() ? m.ratio : m.ratio * m.rotation[0];
    Cell1D child;
    child.a = c.a * ma;
    child.b = c.a * m.translation[0] + c.b;
    double e0 = child.a * rx + child.b, e1 = child.a * ry + child.b;
    child.lo = std::min(e0, e1);
    child.hi = std::max(e0, e1);
    child.feasible = child.b / (1.0 - child.a);
    child.splittable = true;
    out.push_back(child);
  }
  return out;
}

double family_distance(const MatrixTuple& X, const ParamFamily& fam,
                       double tol) {
  const std::size_t m = fam.factors.size();
  // Lipschitz constant per parameter, from the per-entry coefficient norms
  std::vector<double> lip(m);
  for (std::size_t j = 0; j < m; ++j) {
    double s = 0.0;
    for (const auto& mat : fam.coeffs[j]) {
      double nrm = operator_norm(mat);
      s += nrm * nrm;
    }
    lip[j] = std::sqrt(s);
  }

  struct Node {
    double lb;
    std::vector<Cell1D> cells;
    bool operator<(const Node& o) const { return lb > o.lb; }
  };

  std::vector<double> theta(m);
  auto eval_at = [&](const std::vector<Cell1D>& cells, bool floor_only) {
    for (std::size_t j = 0; j < m; ++j) theta[j] = cells[j].feasible;
    MatrixTuple Y = fam.at(theta);
    return floor_only ? point_floor(X, Y) : point_value(X, Y, fam.xi);
  };
  auto radius_of = [&](const std::vector<Cell1D>& cells) {
    double r = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      r += lip[j] * std::max(cells[j].feasible - cells[j].lo,
                             cells[j].hi - cells[j].feasible);
    return r;
  };

  std::vector<Cell1D> root(m);
  for (std::size_t j = 0; j < m; ++j) root[j] = root_cell(fam.factors[j]);
  double best_ub = eval_at(root, false);
  double lb0 = std::max(0.0, eval_at(root, true) - radius_of(root));

  std::priority_queue<Node> queue;
  queue.push({lb0, std::move(root)});
  std::size_t pops = 0;
  const std::size_t kMaxPops = 2'000'000;
  double last_gap = best_ub;
  while (!queue.empty()) {
    Node node = queue.top();
    queue.pop();
    // lb may be stale relative to an upper bound found after the push
    double lb = std::min(node.lb, best_ub);
    last_gap = best_ub - lb;
    if (last_gap <= tol) return std::max(0.0, 0.5 * (best_ub + lb));
    // split the dimension with the largest Lipschitz-scaled width
    std::size_t jbest = 0;
    double wbest = -1.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (!node.cells[j].splittable) continue;
      double w = lip[j] * (node.cells[j].hi - node.cells[j].lo);
      if (w > wbest) {
        wbest = w;
        jbest = j;
      }
    }
    if (wbest <= 0.0) continue;  // point cell; its lb is exact
    for (auto& piece : split_cell(fam.factors[jbest], node.cells[jbest])) {
      Node child = node;
      child.cells[jbest] = piece;
      double val = eval_at(child.cells, false);
      best_ub = std::min(best_ub, val);
      double fl = std::holds_alternative<TraceState>(fam.xi)
                      ? val
                      : eval_at(child.cells, true);
      child.lb = std::max(0.0, fl - radius_of(child.cells));
      if (child.lb < best_ub) queue.push(std::move(child));
    }
    if (++pops > kMaxPops)
      throw AccuracyError("nc distance branch-and-bound stalled", last_gap);
  }
  return best_ub;
}

}  // namespace

double nc_distance(const MatrixTuple& X, const NcState& tau, double tol) {
  if (!(tol > 0.0)) throw InvalidInputError("tol must be positive");
  tau.validate();
  if (X.n != tau.n || X.d != tau.d)
    throw InvalidInputError("point dimensions mismatch the state");
  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& c : tau.components) {
    if (c.weight <= 0.0) continue;  // zero-weight components leave the support
    any = true;
    if (const auto* atoms = std::get_if<std::vector<NcAtom>>(&c.support)) {
      for (const auto& a : *atoms)
        best = std::min(best, point_value(X, a.point, a.xi));
    } else {
      best = std::min(
          best, family_distance(X, std::get<ParamFamily>(c.support), tol));
    }
  }
  if (!any) throw InvalidInputError("state support is empty");
  return best;
}

namespace {

// Per-factor supported spectral minima (not square-rooted) over all atoms.
std::vector<double> factor_minima(const MatrixTuple& X, const NcState& tau,
                                  double tol) {
  std::vector<double> out;
  for (const auto& c : tau.components) {
    if (c.weight <= 0.0) continue;
    if (const auto* atoms = std::get_if<std::vector<NcAtom>>(&c.support)) {
      for (const auto& a : *atoms) {
        double v = point_value(X, a.point, a.xi);
        out.push_back(v * v);
      }
    } else {
      double v = family_distance(X, std::get<ParamFamily>(c.support), tol);
      out.push_back(v * v);
    }
  }
  if (out.empty()) throw InvalidInputError("state support is empty");
  return out;
}

}  // namespace

double tensor_distance(std::span<const MatrixTuple> Xs,
                       std::span<const NcState> taus, double tol) {
  if (Xs.size() != taus.size() || Xs.empty())
    throw InvalidInputError("factor counts must match and be nonempty");
  // Joint infimum of sum_i m_i over the product support. The factors are
  // independent, so the joint odometer minimum is the sum of per-factor
  // minima; we still enumerate per-factor candidate lists explicitly.
  double acc = 0.0;
  for (std::size_t i = 0; i < Xs.size(); ++i) {
    auto mins = factor_minima(Xs[i], taus[i], tol);
    acc += *std::min_element(mins.begin(), mins.end());
  }
  return std::sqrt(std::max(0.0, acc));
}

double tensor_distance_sup(std::span<const MatrixTuple> Xs,
                           std::span<const NcState> taus, double tol) {
  if (Xs.size() != taus.size() || Xs.empty())
    throw InvalidInputError("factor counts must match and be nonempty");
  double worst = 0.0;
  for (std::size_t i = 0; i < Xs.size(); ++i) {
    auto mins = factor_minima(Xs[i], taus[i], tol);
    double mi = *std::min_element(mins.begin(), mins.end());
    worst = std::max(worst, mi);
  }
  return std::sqrt(std::max(0.0, worst));
}

}  // namespace fraczeta::nc
