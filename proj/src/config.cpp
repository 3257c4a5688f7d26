#include "willmore/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "willmore/diagnostics.hpp"
#include "willmore/mesh_generators.hpp"
#include "willmore/mesh_io.hpp"

namespace willmore {

namespace pt = boost::property_tree;

namespace {

std::string config_message(const std::string& field, const std::string& what, int line) {
  std::string msg;
  if (line > 0) msg += "line " + std::to_string(line) + ": ";
  if (!field.empty()) msg += field + ": ";
  return msg + what;
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"surface", {"kind", "radius", "major_radius", "minor_radius", "a", "b", "c", "c0", "c1", "c2", "eps", "modes"}},
      {"mesh", {"generator", "subdivisions", "frequency", "n_major", "n_minor", "grading", "file", "degree"}},
      {"time", {"tau", "T", "order"}},
      {"scheme", {"mode", "theta", "projections", "assembly"}},
      {"linear", {"method", "tolerance", "max_iterations", "restart"}},
      {"output", {"directory", "snapshot_stride", "vtk"}},
      {"study", {"levels", "halve_tau", "variables", "self_test", "check_floor"}},
  };
  return keys;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {
    for (const auto& [section, body] : tree_) {
      const auto it = known_keys().find(section);
      if (body.empty() && !body.data().empty()) {
        throw ConfigError(section, "key outside of a section");
      }
      if (it == known_keys().end()) throw ConfigError("[" + section + "]", "unknown section");
      for (const auto& [key, value] : body) {
        if (!it->second.count(key)) throw ConfigError(section + "." + key, "unknown key");
      }
    }
  }

  std::optional<std::string> raw(const std::string& section, const std::string& key) const {
    const auto node = tree_.get_child_optional(pt::ptree::path_type(section + "/" + key, '/'));
    if (!node) return std::nullopt;
    return node->data();
  }

  bool has(const std::string& section, const std::string& key) const { return raw(section, key).has_value(); }

  std::string text(const std::string& section, const std::string& key, const std::string& fallback) const {
    return raw(section, key).value_or(fallback);
  }

  double number(const std::string& section, const std::string& key, double fallback) const {
    const auto s = raw(section, key);
    if (!s) return fallback;
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
    if (ec != std::errc() || end != s->data() + s->size() || !std::isfinite(v)) {
      throw ConfigError(section + "." + key, "expected a number, got '" + *s + "'");
    }
    return v;
  }

  int integer(const std::string& section, const std::string& key, int fallback) const {
    const auto s = raw(section, key);
    if (!s) return fallback;
    int v = 0;
    const auto [end, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
    if (ec != std::errc() || end != s->data() + s->size()) {
      throw ConfigError(section + "." + key, "expected an integer, got '" + *s + "'");
    }
    return v;
  }

  bool flag(const std::string& section, const std::string& key, bool fallback) const {
    const auto s = raw(section, key);
    if (!s) return fallback;
    if (*s == "true" || *s == "yes" || *s == "on" || *s == "1") return true;
    if (*s == "false" || *s == "no" || *s == "off" || *s == "0") return false;
    throw ConfigError(section + "." + key, "expected true or false, got '" + *s + "'");
  }

  template <typename E>
  E choice(const std::string& section, const std::string& key, E fallback,
           const std::vector<std::pair<std::string, E>>& options) const {
    const auto s = raw(section, key);
    if (!s) return fallback;
    std::string allowed;
    for (const auto& [name, value] : options) {
      if (*s == name) return value;
      allowed += (allowed.empty() ? "" : ", ") + name;
    }
    throw ConfigError(section + "." + key, "unknown value '" + *s + "' (expected one of " + allowed + ")");
  }

 private:
  const pt::ptree& tree_;
};

void require_positive(double v, const std::string& field) {
  if (!(v > 0.0)) throw ConfigError(field, "must be positive");
}

AnalyticSurface read_surface(const Reader& r) {
  enum class Kind { Sphere, Torus, Ellipsoid, Rbc, PerturbedTorus };
  const Kind kind = r.choice<Kind>("surface", "kind", Kind::Sphere,
                                   {{"sphere", Kind::Sphere},
                                    {"torus", Kind::Torus},
                                    {"ellipsoid", Kind::Ellipsoid},
                                    {"red_blood_cell", Kind::Rbc},
                                    {"perturbed_torus", Kind::PerturbedTorus}});
  switch (kind) {
    case Kind::Sphere: {
      Sphere s;
      s.radius = r.number("surface", "radius", s.radius);
      require_positive(s.radius, "surface.radius");
      return AnalyticSurface(s);
    }
    case Kind::Torus: {
      Torus t;
      t.major_radius = r.number("surface", "major_radius", t.major_radius);
      t.minor_radius = r.number("surface", "minor_radius", t.minor_radius);
      require_positive(t.major_radius, "surface.major_radius");
      require_positive(t.minor_radius, "surface.minor_radius");
      if (t.minor_radius >= t.major_radius) throw ConfigError("surface.minor_radius", "must be below major_radius");
      return AnalyticSurface(t);
    }
    case Kind::Ellipsoid: {
      Ellipsoid e;
      e.a = r.number("surface", "a", e.a);
      e.b = r.number("surface", "b", e.b);
      e.c = r.number("surface", "c", e.c);
      require_positive(e.a, "surface.a");
      require_positive(e.b, "surface.b");
      require_positive(e.c, "surface.c");
      return AnalyticSurface(e);
    }
    case Kind::Rbc: {
      RedBloodCell c;
      c.radius = r.number("surface", "radius", c.radius);
      c.c0 = r.number("surface", "c0", c.c0);
      c.c1 = r.number("surface", "c1", c.c1);
      c.c2 = r.number("surface", "c2", c.c2);
      require_positive(c.radius, "surface.radius");
      require_positive(c.c0, "surface.c0");
      return AnalyticSurface(c);
    }
    case Kind::PerturbedTorus: {
      PerturbedTorus t;
      t.major_radius = r.number("surface", "major_radius", t.major_radius);
      t.minor_radius = r.number("surface", "minor_radius", t.minor_radius);
      t.eps = r.number("surface", "eps", t.eps);
      t.modes = r.integer("surface", "modes", t.modes);
      require_positive(t.major_radius, "surface.major_radius");
      require_positive(t.minor_radius, "surface.minor_radius");
      if (t.eps < 0.0 || t.eps >= 1.0) throw ConfigError("surface.eps", "must lie in [0, 1)");
      require_positive(t.modes, "surface.modes");
      if (t.minor_radius * (1.0 + t.eps) >= t.major_radius) {
        throw ConfigError("surface.minor_radius", "perturbed minor radius reaches the axis");
      }
      return AnalyticSurface(t);
    }
  }
  return AnalyticSurface(Sphere{});
}

Resolution parse_resolution(const std::string& token, MeshGenerator generator, const std::string& field) {
  Resolution res;
  const auto bad = [&] { return ConfigError(field, "bad mesh resolution '" + token + "'"); };
  const auto parse_int = [&](std::string_view s) {
    int v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size() || v <= 0) throw bad();
    return v;
  };
  if (generator == MeshGenerator::TorusGrid) {
    const auto x = token.find('x');
    if (x == std::string::npos) throw bad();
    res.a = parse_int(std::string_view(token).substr(0, x));
    res.b = parse_int(std::string_view(token).substr(x + 1));
  } else {
    res.a = parse_int(token);
  }
  return res;
}

MeshSettings read_mesh(const Reader& r, const AnalyticSurface& surface) {
  MeshSettings m;
  const bool torus_like = !surface.is_genus_zero();
  m.generator = r.choice<MeshGenerator>("mesh", "generator", torus_like ? MeshGenerator::TorusGrid : MeshGenerator::Geodesic,
                                        {{"icosphere", MeshGenerator::Icosphere},
                                         {"geodesic", MeshGenerator::Geodesic},
                                         {"torus_grid", MeshGenerator::TorusGrid},
                                         {"file", MeshGenerator::File}});
  m.degree = r.integer("mesh", "degree", 2);
  m.grading = r.number("mesh", "grading", 2.0);
  switch (m.generator) {
    case MeshGenerator::Icosphere:
      m.resolution = {r.integer("mesh", "subdivisions", 3), 0};
      if (m.resolution.a < 0) throw ConfigError("mesh.subdivisions", "must be non-negative");
      break;
    case MeshGenerator::Geodesic:
      m.resolution = {r.integer("mesh", "frequency", 7), 0};
      require_positive(m.resolution.a, "mesh.frequency");
      break;
    case MeshGenerator::TorusGrid:
      m.resolution = {r.integer("mesh", "n_major", 32), r.integer("mesh", "n_minor", 24)};
      require_positive(m.resolution.a, "mesh.n_major");
      require_positive(m.resolution.b, "mesh.n_minor");
      break;
    case MeshGenerator::File:
      m.file = r.text("mesh", "file", "");
      if (m.file.empty()) throw ConfigError("mesh.file", "required when generator = file");
      break;
  }
  if (torus_like && (m.generator == MeshGenerator::Icosphere || m.generator == MeshGenerator::Geodesic)) {
    throw ConfigError("mesh.generator", "sphere generators need a genus-zero surface");
  }
  if (!torus_like && m.generator == MeshGenerator::TorusGrid) {
    throw ConfigError("mesh.generator", "torus_grid needs a torus surface");
  }
  require_positive(m.grading, "mesh.grading");
  return m;
}

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

}  // namespace

ConfigError::ConfigError(const std::string& field, const std::string& what, int line)
    : Error(config_message(field, what, line)), field_(field), line_(line) {}

void RunConfig::validate() {
  if (!(stepper.tau > 0.0) || !std::isfinite(stepper.tau)) throw ConfigError("time.tau", "must be positive");
  if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("time.T", "must be positive");
  if (stepper.order != 1 && stepper.order != 2) throw ConfigError("time.order", "must be 1 or 2");
  if (mesh.degree < 1 || mesh.degree > 4) throw ConfigError("mesh.degree", "must be between 1 and 4");
  if (mesh.degree < 2) {
    warnings.push_back("mesh.degree = 1: the convergence theory requires degree >= 2");
  }
  if (snapshot_stride <= 0) throw ConfigError("output.snapshot_stride", "must be positive");
  if (!(stepper.linear.rel_tol > 0.0)) throw ConfigError("linear.tolerance", "must be positive");
  if (stepper.linear.max_iterations <= 0) throw ConfigError("linear.max_iterations", "must be positive");
  if (stepper.linear.restart <= 0) throw ConfigError("linear.restart", "must be positive");
  if (!(study.check_floor > 0.0)) throw ConfigError("study.check_floor", "must be positive");
  for (const auto& v : study.variables) {
    bool known = false;
    for (int i = 0; i < VariableErrors::kCount; ++i) known = known || v == VariableErrors::name(i);
    if (!known) throw ConfigError("study.variables", "unknown variable '" + v + "'");
  }
  if (output_dir.empty()) throw ConfigError("output.directory", "must not be empty");
}

RunConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("", e.message(), static_cast<int>(e.line()));
  }
  const Reader r(tree);

  RunConfig c;
  c.surface = read_surface(r);
  c.mesh = read_mesh(r, c.surface);

  c.stepper.tau = r.number("time", "tau", c.stepper.tau);
  c.T = r.number("time", "T", c.T);
  c.stepper.order = r.integer("time", "order", c.stepper.order);

  c.stepper.mode = r.choice<FlowMode>("scheme", "mode", FlowMode::Willmore,
                                      {{"willmore", FlowMode::Willmore}, {"surface_diffusion", FlowMode::SurfaceDiffusion}});
  c.stepper.theta =
      r.choice<ThetaPolicy>("scheme", "theta", ThetaPolicy::Exact, {{"exact", ThetaPolicy::Exact}, {"zero", ThetaPolicy::Zero}});
  c.stepper.projections = r.flag("scheme", "projections", true);
  c.stepper.policy = r.choice<ExecutionPolicy>("scheme", "assembly", ExecutionPolicy::Serial,
                                               {{"serial", ExecutionPolicy::Serial}, {"parallel", ExecutionPolicy::Parallel}});

  c.stepper.linear.method =
      r.choice<SolverMethod>("linear", "method", SolverMethod::Direct, {{"direct", SolverMethod::Direct}, {"gmres", SolverMethod::Gmres}});
  c.stepper.linear.rel_tol = r.number("linear", "tolerance", c.stepper.linear.rel_tol);
  c.stepper.linear.max_iterations = r.integer("linear", "max_iterations", c.stepper.linear.max_iterations);
  c.stepper.linear.restart = r.integer("linear", "restart", c.stepper.linear.restart);

  c.output_dir = r.text("output", "directory", c.output_dir);
  c.snapshot_stride = r.integer("output", "snapshot_stride", c.snapshot_stride);
  c.write_vtk = r.flag("output", "vtk", c.write_vtk);

  if (r.has("study", "levels")) {
    if (c.mesh.generator == MeshGenerator::File) throw ConfigError("study.levels", "not available for file meshes");
    for (const auto& tok : split_words(r.text("study", "levels", ""))) {
      c.study.levels.push_back(parse_resolution(tok, c.mesh.generator, "study.levels"));
    }
  }
  c.study.halve_tau = r.flag("study", "halve_tau", false);
  if (r.has("study", "variables")) c.study.variables = split_words(r.text("study", "variables", ""));
  c.study.self_test = r.flag("study", "self_test", false);
  c.study.check_floor = r.number("study", "check_floor", c.study.check_floor);

  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  return parse_config(in);
}

SurfaceMesh build_mesh(const RunConfig& config, const Resolution& res) {
  const int k = config.mesh.degree;
  switch (config.mesh.generator) {
    case MeshGenerator::Icosphere: return gen_sphere_mesh(config.surface, res.a, k);
    case MeshGenerator::Geodesic: return gen_geodesic_sphere(config.surface, res.a, k);
    case MeshGenerator::TorusGrid: return gen_torus_mesh(config.surface, res.a, res.b, config.mesh.grading, k);
    case MeshGenerator::File: {
      const SurfaceMesh linear = read_off_file(config.mesh.file);
      return k == 1 ? linear : curve_mesh(linear, config.surface, k);
    }
  }
  throw Error("unknown mesh generator");
}

SurfaceMesh build_mesh(const RunConfig& config) { return build_mesh(config, config.mesh.resolution); }

std::string to_string(const Resolution& r, MeshGenerator generator) {
  if (generator == MeshGenerator::TorusGrid) return std::to_string(r.a) + "x" + std::to_string(r.b);
  return std::to_string(r.a);
}

}  // namespace willmore
