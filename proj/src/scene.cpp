#include "fraczeta/scene.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fraczeta/errors.hpp"

namespace fraczeta::cli {

using nlohmann::json;

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const char* ctx) {
  if (!j.is_object())
    throw InvalidInputError(std::string(ctx) + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* k : allowed)
      if (key == k) ok = true;
    if (!ok)
      throw InvalidInputError(std::string(ctx) + ": unknown field '" + key +
                              "'");
  }
}

const json& need(const json& j, const char* key, const char* ctx) {
  auto it = j.find(key);
  if (it == j.end())
    throw InvalidInputError(std::string(ctx) + ": missing field '" + key +
                            "'");
  return *it;
}

double num(const json& j, const char* ctx) {
  if (!j.is_number())
    throw InvalidInputError(std::string(ctx) + ": expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v))
    throw InvalidInputError(std::string(ctx) + ": non-finite number");
  return v;
}

std::vector<double> num_list(const json& j, const char* ctx) {
  if (!j.is_array())
    throw InvalidInputError(std::string(ctx) + ": expected an array");
  std::vector<double> out;
  for (const auto& e : j) out.push_back(num(e, ctx));
  return out;
}

geometry::Box parse_box(const json& j, const char* ctx) {
  check_keys(j, {"lo", "hi"}, ctx);
  geometry::Box b;
  b.lo = num_list(need(j, "lo", ctx), ctx);
  b.hi = num_list(need(j, "hi", ctx), ctx);
  if (b.lo.size() != b.hi.size())
    throw InvalidInputError(std::string(ctx) + ": lo/hi length mismatch");
  return b;
}

nc::Mat parse_matrix(const json& j, const char* ctx) {
  if (!j.is_array() || j.empty())
    throw InvalidInputError(std::string(ctx) + ": expected a matrix");
  int n = static_cast<int>(j.size());
  nc::Mat m(n);
  for (int i = 0; i < n; ++i) {
    auto row = num_list(j[i], ctx);
    if (static_cast<int>(row.size()) != n)
      throw InvalidInputError(std::string(ctx) + ": matrix must be square");
    for (int k = 0; k < n; ++k) m(i, k) = row[k];
  }
  return m;
}

nc::VectorPart parse_vector_part(const json& j, const char* ctx) {
  check_keys(j, {"type", "coords"}, ctx);
  std::string type = need(j, "type", ctx).get<std::string>();
  if (type == "trace") return nc::TraceState{};
  if (type == "pure") {
    nc::PureVector v;
    v.coords = num_list(need(j, "coords", ctx), ctx);
    return v;
  }
  throw InvalidInputError(std::string(ctx) + ": unknown vector part '" +
                          type + "'");
}

geometry::IfsSystem parse_ifs(const json& j, const char* ctx) {
  check_keys(j, {"type", "dim", "maps", "bounding_box", "string"}, ctx);
  geometry::IfsSystem sys;
  sys.ambient_dim = static_cast<int>(num(need(j, "dim", ctx), ctx));
  for (const auto& mj : need(j, "maps", ctx)) {
    check_keys(mj, {"ratio", "translation", "rotation"}, "map");
    geometry::SimilarityMap m;
    m.ratio = num(need(mj, "ratio", "map"), "map");
    m.translation = num_list(need(mj, "translation", "map"), "map");
    if (mj.contains("rotation")) {
      for (const auto& row : mj["rotation"])
        for (const auto& e : row) m.rotation.push_back(num(e, "rotation"));
    }
    sys.maps.push_back(std::move(m));
  }
  sys.bounding_box = parse_box(need(j, "bounding_box", ctx), "bounding_box");
  sys.validate();
  return sys;
}

strings::FractalString parse_string(const json& j, const char* ctx) {
  check_keys(j, {"type", "family", "collar", "span"}, ctx);
  strings::FractalString str;
  const json& fam = need(j, "family", ctx);
  check_keys(fam,
             {"type", "base_length", "ratio", "multiplicity", "lengths"},
             "family");
  std::string type = need(fam, "type", "family").get<std::string>();
  if (type == "geometric") {
    strings::GeometricFamily g;
    g.base_length = num(need(fam, "base_length", "family"), "family");
    g.ratio = num(need(fam, "ratio", "family"), "family");
    g.multiplicity =
        static_cast<int>(num(need(fam, "multiplicity", "family"), "family"));
    str.family = g;
  } else if (type == "explicit") {
    strings::ExplicitLengths e;
    e.lengths = num_list(need(fam, "lengths", "family"), "family");
    str.family = e;
  } else {
    throw InvalidInputError("family: unknown type '" + type + "'");
  }
  str.collar = num(need(j, "collar", ctx), ctx);
  if (j.contains("span")) str.span = num(j["span"], ctx);
  str.validate();
  return str;
}

geometry::WeightMeasure parse_weight(const json& j, const Scene& scene);

geometry::WeightMeasure parse_weight_inner(const json& j,
                                           const Scene& scene) {
  std::string type = need(j, "type", "weight").get<std::string>();
  geometry::WeightMeasure w;
  if (type == "uniform_box") {
    check_keys(j, {"type", "lo", "hi", "scale"}, "weight");
    geometry::UniformBox u;
    u.box.lo = num_list(need(j, "lo", "weight"), "weight");
    u.box.hi = num_list(need(j, "hi", "weight"), "weight");
    if (j.contains("scale")) u.scale = num(j["scale"], "weight");
    w.v = std::move(u);
  } else if (type == "gaussian_window") {
    check_keys(j, {"type", "alpha", "lo", "hi", "scale"}, "weight");
    geometry::GaussianWindow g;
    g.alpha = num(need(j, "alpha", "weight"), "weight");
    g.box.lo = num_list(need(j, "lo", "weight"), "weight");
    g.box.hi = num_list(need(j, "hi", "weight"), "weight");
    if (j.contains("scale")) g.scale = num(j["scale"], "weight");
    if (!(g.alpha > 0.0))
      throw InvalidInputError("weight: alpha must be positive");
    w.v = std::move(g);
  } else if (type == "finite_atoms") {
    check_keys(j, {"type", "points", "weights"}, "weight");
    geometry::FiniteAtoms a;
    for (const auto& p : need(j, "points", "weight"))
      a.points.push_back(num_list(p, "weight"));
    a.weights = num_list(need(j, "weights", "weight"), "weight");
    w.v = std::move(a);
  } else if (type == "tube_restriction") {
    check_keys(j, {"type", "inner", "radius"}, "weight");
    geometry::TubeRestriction t;
    t.inner = std::make_shared<geometry::WeightMeasure>(
        parse_weight(need(j, "inner", "weight"), scene));
    t.radius = num(need(j, "radius", "weight"), "weight");
    if (!scene.ifs)
      throw InvalidInputError(
          "weight: tube restriction needs an IFS distance oracle");
    t.dist = geometry::make_distance_oracle(*scene.ifs);
    w.v = std::move(t);
  } else {
    throw InvalidInputError("weight: unknown type '" + type + "'");
  }
  return w;
}

geometry::WeightMeasure parse_weight(const json& j, const Scene& scene) {
  return parse_weight_inner(j, scene);
}

nc::ParamFactor parse_param_factor(const json& j) {
  check_keys(j, {"type", "lo", "hi", "value", "maps"}, "param");
  std::string type = need(j, "type", "param").get<std::string>();
  if (type == "interval")
    return nc::Interval1D{num(need(j, "lo", "param"), "param"),
                          num(need(j, "hi", "param"), "param")};
  if (type == "dirac")
    return nc::Dirac1D{num(need(j, "value", "param"), "param")};
  if (type == "cantor") {
    // the standard middle-thirds Cantor set on [0, 1]
    geometry::IfsSystem sys;
    sys.ambient_dim = 1;
    sys.maps = {{1.0 / 3.0, {}, {0.0}}, {1.0 / 3.0, {}, {2.0 / 3.0}}};
    sys.bounding_box = {{0.0}, {1.0}};
    return nc::Ifs1D{std::move(sys)};
  }
  if (type == "ifs1d") {
    geometry::IfsSystem sys;
    sys.ambient_dim = 1;
    for (const auto& mj : need(j, "maps", "param")) {
      check_keys(mj, {"ratio", "translation"}, "param map");
      sys.maps.push_back({num(need(mj, "ratio", "param"), "param"),
                          {},
                          {num(need(mj, "translation", "param"), "param")}});
    }
    sys.bounding_box = {{num(need(j, "lo", "param"), "param")},
                        {num(need(j, "hi", "param"), "param")}};
    sys.validate();
    return nc::Ifs1D{std::move(sys)};
  }
  throw InvalidInputError("param: unknown type '" + type + "'");
}

std::vector<nc::Mat> parse_matrix_list(const json& j, const char* ctx) {
  std::vector<nc::Mat> out;
  if (!j.is_array())
    throw InvalidInputError(std::string(ctx) + ": expected an array");
  for (const auto& e : j) out.push_back(parse_matrix(e, ctx));
  return out;
}

nc::NcState parse_nc_state(const json& j) {
  std::string type = need(j, "type", "measure").get<std::string>();
  nc::NcState state;
  if (type == "nc_atoms") {
    check_keys(j, {"type", "n", "d", "atoms"}, "measure");
    state.n = static_cast<int>(num(need(j, "n", "measure"), "measure"));
    state.d = static_cast<int>(num(need(j, "d", "measure"), "measure"));
    std::vector<nc::NcAtom> atoms;
    for (const auto& aj : need(j, "atoms", "measure")) {
      check_keys(aj, {"matrices", "vector", "weight"}, "atom");
      nc::NcAtom a;
      a.point.n = state.n;
      a.point.d = state.d;
      a.point.entries = parse_matrix_list(need(aj, "matrices", "atom"), "atom");
      a.xi = parse_vector_part(need(aj, "vector", "atom"), "atom");
      a.weight = aj.contains("weight") ? num(aj["weight"], "atom") : 1.0;
      atoms.push_back(std::move(a));
    }
    state.components.push_back({1.0, std::move(atoms)});
  } else if (type == "nc_family") {
    check_keys(j, {"type", "n", "d", "params", "base", "coeffs", "vector"},
               "measure");
    nc::ParamFamily fam;
    fam.n = static_cast<int>(num(need(j, "n", "measure"), "measure"));
    fam.d = static_cast<int>(num(need(j, "d", "measure"), "measure"));
    for (const auto& pj : need(j, "params", "measure"))
      fam.factors.push_back(parse_param_factor(pj));
    fam.base = parse_matrix_list(need(j, "base", "measure"), "base");
    for (const auto& row : need(j, "coeffs", "measure"))
      fam.coeffs.push_back(parse_matrix_list(row, "coeffs"));
    fam.xi = parse_vector_part(need(j, "vector", "measure"), "measure");
    state.n = fam.n;
    state.d = fam.d;
    state.components.push_back({1.0, std::move(fam)});
  } else {
    throw InvalidInputError("measure: unknown nc type '" + type + "'");
  }
  return state;
}

nc::NcWeight parse_nc_weight(const json& j, int n, int d) {
  std::string type = need(j, "type", "weight").get<std::string>();
  nc::NcWeight weight;
  weight.n = n;
  weight.d = d;
  if (type == "nc_atoms") {
    check_keys(j, {"type", "atoms"}, "weight");
    std::vector<nc::NcAtom> atoms;
    for (const auto& aj : need(j, "atoms", "weight")) {
      check_keys(aj, {"matrices", "vector", "weight"}, "atom");
      nc::NcAtom a;
      a.point.n = n;
      a.point.d = d;
      a.point.entries =
          parse_matrix_list(need(aj, "matrices", "atom"), "atom");
      a.xi = parse_vector_part(need(aj, "vector", "atom"), "atom");
      a.weight = aj.contains("weight") ? num(aj["weight"], "atom") : 1.0;
      atoms.push_back(std::move(a));
    }
    weight.components.push_back({1.0, std::move(atoms)});
  } else if (type == "nc_box") {
    check_keys(j,
               {"type", "box", "base", "coeffs", "vector", "density",
                "scale"},
               "weight");
    nc::WeightBoxFamily fam;
    fam.n = n;
    fam.d = d;
    fam.box = parse_box(need(j, "box", "weight"), "weight box");
    fam.base = parse_matrix_list(need(j, "base", "weight"), "base");
    for (const auto& row : need(j, "coeffs", "weight"))
      fam.coeffs.push_back(parse_matrix_list(row, "coeffs"));
    fam.xi = parse_vector_part(need(j, "vector", "weight"), "weight");
    const json& dj = need(j, "density", "weight");
    check_keys(dj, {"type", "alpha"}, "density");
    std::string dtype = need(dj, "type", "density").get<std::string>();
    if (dtype == "uniform") {
      fam.density = nc::UniformDensity{};
    } else if (dtype == "gaussian") {
      fam.density = nc::GaussianDensity{num(need(dj, "alpha", "density"),
                                            "density")};
    } else {
      throw InvalidInputError("density: unknown type '" + dtype + "'");
    }
    if (j.contains("scale")) fam.scale = num(j["scale"], "weight");
    weight.components.push_back({1.0, std::move(fam)});
  } else {
    throw InvalidInputError("weight: unknown nc type '" + type + "'");
  }
  return weight;
}

nc::NcPolynomial parse_observable(const json& j) {
  check_keys(j, {"terms"}, "observable");
  nc::NcPolynomial g;
  for (const auto& tj : need(j, "terms", "observable")) {
    check_keys(tj, {"re", "im", "word"}, "term");
    nc::NcPolynomial::Term term;
    term.coeff = {tj.contains("re") ? num(tj["re"], "term") : 0.0,
                  tj.contains("im") ? num(tj["im"], "term") : 0.0};
    if (tj.contains("word"))
      for (const auto& l : tj["word"])
        term.word.push_back(static_cast<int>(num(l, "term")));
    g.terms.push_back(std::move(term));
  }
  if (g.terms.empty()) throw InvalidInputError("observable has no terms");
  return g;
}

complexdims::ScalingSystem parse_scaling(const json& j) {
  check_keys(j, {"version", "terms", "description"}, "scaling");
  complexdims::ScalingSystem sys;
  for (const auto& tj : need(j, "terms", "scaling")) {
    check_keys(tj, {"coeff", "ratio", "shift"}, "scaling term");
    complexdims::ScalingTerm t;
    t.coeff = num(need(tj, "coeff", "scaling"), "scaling");
    t.ratio = num(need(tj, "ratio", "scaling"), "scaling");
    t.shift = tj.contains("shift") ? num(tj["shift"], "scaling") : 0.0;
    sys.terms.push_back(t);
  }
  if (j.contains("description"))
    sys.description = j["description"].get<std::string>();
  sys.validate();
  return sys;
}

// point and interval measures are degenerate strings plus a tiny IFS
void build_point_measure(const json& j, Scene& scene) {
  check_keys(j, {"type", "coords", "collar"}, "measure");
  auto coords = num_list(need(j, "coords", "measure"), "measure");
  double collar = num(need(j, "collar", "measure"), "measure");
  geometry::IfsSystem sys;
  sys.ambient_dim = static_cast<int>(coords.size());
  geometry::SimilarityMap m;
  m.ratio = 0.5;
  for (double c : coords) m.translation.push_back(c / 2.0);
  sys.maps.push_back(std::move(m));
  sys.bounding_box.lo = coords;
  sys.bounding_box.hi = coords;
  scene.ifs = std::move(sys);
  if (coords.size() == 1) {
    strings::FractalString str;
    str.family = strings::ExplicitLengths{};
    str.collar = collar;
    str.span = 0.0;
    scene.fstring = std::move(str);
  }
}

void build_interval_measure(const json& j, Scene& scene) {
  check_keys(j, {"type", "lo", "hi", "collar"}, "measure");
  double lo = num(need(j, "lo", "measure"), "measure");
  double hi = num(need(j, "hi", "measure"), "measure");
  double collar = num(need(j, "collar", "measure"), "measure");
  if (!(hi > lo)) throw InvalidInputError("interval needs hi > lo");
  geometry::IfsSystem sys;
  sys.ambient_dim = 1;
  sys.maps = {{0.5, {}, {lo / 2.0}}, {0.5, {}, {hi / 2.0}}};
  sys.bounding_box = {{lo}, {hi}};
  scene.ifs = std::move(sys);
  strings::FractalString str;
  str.family = strings::ExplicitLengths{};
  str.collar = collar;
  str.span = hi - lo;
  scene.fstring = std::move(str);
}

}  // namespace

int Scene::ambient_dim() const {
  if (kind == Kind::noncommutative) return ncscene->d;
  if (ifs) return ifs->ambient_dim;
  return 1;
}

std::function<double(double)> Scene::tube_function() const {
  if (kind == Kind::commutative) {
    if (fstring) {
      auto str = *fstring;
      return [str](double t) { return strings::string_tube_volume(str, t); };
    }
    if (!ifs || !weight)
      throw InvalidInputError("scene has no tube geometry");
    auto dist = geometry::make_distance_oracle(*ifs);
    auto w = *weight;
    return [dist, w](double t) {
      return geometry::tube_mass(w, dist, t, geometry::GridScheme{512, 4});
    };
  }
  // nc tube functional at g = 1
  nc::NcScene tube_scene = *ncscene;
  tube_scene.g = nc::NcPolynomial::one();
  auto eval = std::make_shared<nc::Evaluator>(std::move(tube_scene));
  return [eval](double t) {
    return eval->tube(t, nc::NcGrid{12, 2}).value.real();
  };
}

double Scene::declared_log_period() const {
  if (scaling) {
    bool same = true;
    for (const auto& t : scaling->terms)
      if (std::abs(t.ratio - scaling->terms.front().ratio) > 1e-14)
        same = false;
    if (same) return std::log(1.0 / scaling->terms.front().ratio);
  }
  if (fstring)
    if (const auto* g = std::get_if<strings::GeometricFamily>(&fstring->family))
      return std::log(1.0 / g->ratio);
  if (ifs) {
    bool same = true;
    for (const auto& m : ifs->maps)
      if (std::abs(m.ratio - ifs->maps.front().ratio) > 1e-14) same = false;
    if (same) return std::log(1.0 / ifs->maps.front().ratio);
  }
  return 0.0;
}

Scene parse_scene_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("scene JSON: ") + e.what());
  }
  check_keys(j,
             {"version", "kind", "measure", "weight", "observable", "R",
              "seed", "abscissa_hint", "distance_floor", "scaling"},
             "scene");
  if (!j.contains("version") || !j["version"].is_number_integer() ||
      j["version"].get<int>() != 1)
    throw InvalidInputError("scene: unsupported or missing version");

  Scene scene;
  std::string kind = need(j, "kind", "scene").get<std::string>();
  if (j.contains("R")) scene.R = num(j["R"], "scene");
  if (j.contains("seed")) scene.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("abscissa_hint")) {
    scene.abscissa_hint = num(j["abscissa_hint"], "scene");
    scene.hint_declared = true;
  }
  if (j.contains("scaling")) scene.scaling = parse_scaling(j["scaling"]);

  const json& mj = need(j, "measure", "scene");
  std::string mtype = need(mj, "type", "measure").get<std::string>();

  if (kind == "commutative") {
    scene.kind = Scene::Kind::commutative;
    if (mtype == "ifs") {
      scene.ifs = parse_ifs(mj, "measure");
      if (mj.contains("string"))
        scene.fstring = parse_string(mj["string"], "measure string");
    } else if (mtype == "string") {
      scene.fstring = parse_string(mj, "measure");
    } else if (mtype == "point") {
      build_point_measure(mj, scene);
    } else if (mtype == "interval") {
      build_interval_measure(mj, scene);
    } else {
      throw InvalidInputError("measure: unknown type '" + mtype + "'");
    }
    if (j.contains("weight"))
      scene.weight = parse_weight(j["weight"], scene);
    if (!scene.hint_declared) {
      if (scene.fstring) {
        scene.abscissa_hint = scene.fstring->dimension();
      } else if (scene.ifs) {
        // Moran similarity dimension: root of 1 - sum r_i^s
        complexdims::ScalingSystem moran;
        for (const auto& m : scene.ifs->maps)
          moran.terms.push_back({1.0, m.ratio, 0.0});
        scene.abscissa_hint = std::max(0.0, complexdims::real_root(moran));
      }
    }
  } else if (kind == "noncommutative") {
    scene.kind = Scene::Kind::noncommutative;
    nc::NcScene ns;
    ns.tau = parse_nc_state(mj);
    ns.n = ns.tau.n;
    ns.d = ns.tau.d;
    ns.tau.norm_bound = scene.R;
    ns.nu = parse_nc_weight(need(j, "weight", "scene"), ns.n, ns.d);
    if (j.contains("observable")) ns.g = parse_observable(j["observable"]);
    ns.R = scene.R;
    ns.seed = scene.seed;
    if (j.contains("distance_floor"))
      ns.distance_floor = num(j["distance_floor"], "scene");
    ns.abscissa_hint = scene.abscissa_hint;
    for (auto& c : ns.tau.components)
      if (auto* atoms = std::get_if<std::vector<nc::NcAtom>>(&c.support)) {
        double total = 0.0;
        for (auto& a : *atoms) {
          total += a.weight;
          a.point.norm_bound = scene.R;
        }
        if (total > 0.0)
          for (auto& a : *atoms) a.weight /= total;  // states have mass 1
      }
    if (!scene.hint_declared) {
      // estimate the relative upper box dimension from tube samples
      nc::NcScene probe = ns;
      probe.g = nc::NcPolynomial::one();
      probe.abscissa_hint = -1.0;
      nc::Evaluator eval(probe, 1e-8);
      auto grid = minkowski::log_grid(2e-3 * scene.R, 0.5 * scene.R, 24);
      auto samples = minkowski::sample_tube(
          [&](double t) {
            return std::abs(eval.tube(t, nc::NcGrid{12, 2}).value);
          },
          grid, ns.d);
      ns.abscissa_hint = minkowski::estimate_dims(samples).upper_dim;
      scene.abscissa_hint = ns.abscissa_hint;
    }
    scene.ncscene = std::move(ns);
  } else {
    throw InvalidInputError("scene: unknown kind '" + kind + "'");
  }
  return scene;
}

Scene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open scene file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scene_json(buf.str());
}

complexdims::ScalingSystem load_scaling_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open system file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("system JSON: ") + e.what());
  }
  if (j.contains("kind")) {
    Scene scene = parse_scene_json(buf.str());
    if (!scene.scaling)
      throw InvalidInputError("scene has no scaling decomposition");
    return *scene.scaling;
  }
  check_keys(j, {"version", "terms", "description"}, "system");
  return parse_scaling(j);
}

}  // namespace fraczeta::cli
