#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "fraczeta/numeric.hpp"

namespace fraczeta::geometry {

struct Box {
  std::vector<double> lo, hi;
  int dim() const { return static_cast<int>(lo.size()); }
  double volume() const;
  std::vector<double> center() const;
};

// x |-> ratio * R * x + translation, with R orthogonal and ratio in (0,1).
struct SimilarityMap {
  double ratio = 0.0;
  std::vector<double> rotation;  // d*d row-major; empty means identity
  std::vector<double> translation;

  void apply(std::span<const double> x, std::span<double> out) const;
};

struct IfsSystem {
  int ambient_dim = 1;
  std::vector<SimilarityMap> maps;
  Box bounding_box;

  // Checks map count, ratios, orthogonality and that map images of the
  // bounding box stay inside it. Throws InvalidInputError.
  void validate() const;
};

enum class Metric { euclidean, sup };

// Distance from x to the attractor within tol, by best-first
// branch-and-bound over IFS cells. Cell lower bounds come from axis-aligned
// bounding boxes of composed maps; upper bounds from fixed points of the
// composed maps (always attractor points).
double attractor_distance(const IfsSystem& sys, std::span<const double> x,
                          double tol, Metric metric = Metric::euclidean);
double attractor_distance_sup(const IfsSystem& sys, std::span<const double> x,
                              double tol);

// Axis-aligned boxes covering the attractor after `depth` refinements.
// Exposed for oracles and diagnostics.
std::vector<Box> refine_cells(const IfsSystem& sys, int depth);

using DistanceFn = std::function<double(std::span<const double>)>;

DistanceFn make_distance_oracle(const IfsSystem& sys, double tol = 1e-10,
                                Metric metric = Metric::euclidean);

// ---- weight measures -------------------------------------------------

struct WeightMeasure;

struct UniformBox {
  Box box;
  double scale = 1.0;  // density multiplier
};

// density scale * exp(-alpha * |x|^2) on box, truncated where the density
// falls below 1e-16 of its peak.
struct GaussianWindow {
  double alpha = 1.0;
  Box box;
  double scale = 1.0;
};

struct FiniteAtoms {
  std::vector<std::vector<double>> points;
  std::vector<double> weights;
};

struct TubeRestriction {
  std::shared_ptr<const WeightMeasure> inner;
  DistanceFn dist;
  double radius = 0.0;
};

struct WeightMeasure {
  std::variant<UniformBox, GaussianWindow, FiniteAtoms, TubeRestriction> v;
};

// Total mass, in closed form (erf products for Gaussian windows).
double measure_mass(const WeightMeasure& nu);

struct GridScheme {
  int panels = 64;  // composite panels per axis
  int order = 4;    // Gauss nodes per panel
};
struct McScheme {
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
};
using Scheme = std::variant<GridScheme, McScheme>;

struct Integral {
  Complex value;
  double err = 0.0;  // a-posteriori estimate
};

using Integrand = std::function<Complex(std::span<const double>)>;

// integral of f against nu. Grid schemes report a Richardson difference
// against the half-resolution grid; Monte Carlo reports the standard error.
// Throws DegenerateMeasureError when nu has zero total mass.
Integral measure_integrate(const WeightMeasure& nu, const Integrand& f,
                           const Scheme& scheme);

// nu({ x : dist(x) <= t }).
double tube_mass(const WeightMeasure& nu, const DistanceFn& dist, double t,
                 const Scheme& scheme);

}  // namespace fraczeta::geometry
