#pragma once

#include <memory>
#include <optional>
#include <string>

#include "fraczeta/complexdims.hpp"
#include "fraczeta/geometry.hpp"
#include "fraczeta/minkowski.hpp"
#include "fraczeta/ncfunc.hpp"
#include "fraczeta/strings.hpp"
#include "fraczeta/zeta.hpp"

namespace fraczeta::cli {

// In-memory form of a scene JSON file (schema version 1, unknown fields
// rejected).
struct Scene {
  enum class Kind { commutative, noncommutative };
  Kind kind = Kind::commutative;

  // commutative payload: a distance geometry and/or an exact string
  std::optional<geometry::IfsSystem> ifs;
  std::optional<strings::FractalString> fstring;
  std::optional<geometry::WeightMeasure> weight;

  // noncommutative payload
  std::optional<nc::NcScene> ncscene;

  double R = 1.0;
  std::uint64_t seed = 1;
  double abscissa_hint = 0.0;
  bool hint_declared = false;
  std::optional<complexdims::ScalingSystem> scaling;

  int ambient_dim() const;
  // exact-string tube when available, else quadrature via the oracle
  std::function<double(double)> tube_function() const;
  double declared_log_period() const;
};

Scene load_scene(const std::string& path);
Scene parse_scene_json(const std::string& text);

// A poles input: either a bare scaling-system file or a scene carrying a
// "scaling" block.
complexdims::ScalingSystem load_scaling_system(const std::string& path);

}  // namespace fraczeta::cli
