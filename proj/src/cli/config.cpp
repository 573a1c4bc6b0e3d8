#include "shellopt/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "shellopt/errors.hpp"

namespace shellopt::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : obj.items())
    if (!keys.count(item.key()))
      throw ConfigError(where + ": unknown key \"" + item.key() + "\"");
}

const json& require(const json& obj, const std::string& where,
                    const char* key) {
  if (!obj.contains(key))
    throw ConfigError(where + ": missing required key \"" + key + "\"");
  return obj.at(key);
}

double as_double(const json& value, const std::string& where) {
  if (!value.is_number())
    throw ConfigError(where + ": expected a number");
  return value.get<double>();
}

int as_int(const json& value, const std::string& where) {
  if (!value.is_number_integer())
    throw ConfigError(where + ": expected an integer");
  return value.get<int>();
}

bool as_bool(const json& value, const std::string& where) {
  if (!value.is_boolean())
    throw ConfigError(where + ": expected a boolean");
  return value.get<bool>();
}

std::string as_string(const json& value, const std::string& where) {
  if (!value.is_string())
    throw ConfigError(where + ": expected a string");
  return value.get<std::string>();
}

double get_double(const json& obj, const std::string& where, const char* key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  return as_double(obj.at(key), where + "." + key);
}

int get_int(const json& obj, const std::string& where, const char* key,
            int fallback) {
  if (!obj.contains(key)) return fallback;
  return as_int(obj.at(key), where + "." + key);
}

bool get_bool(const json& obj, const std::string& where, const char* key,
              bool fallback) {
  if (!obj.contains(key)) return fallback;
  return as_bool(obj.at(key), where + "." + key);
}

std::uint64_t get_seed(const json& obj, const std::string& where,
                       const char* key, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& value = obj.at(key);
  const std::string at = where + "." + key;
  if (!value.is_number_integer() || value.get<std::int64_t>() < 0)
    throw ConfigError(at + ": expected a nonnegative integer");
  return value.get<std::uint64_t>();
}

template <std::size_t N>
std::array<double, N> as_double_array(const json& value,
                                      const std::string& where) {
  if (!value.is_array() || value.size() != N)
    throw ConfigError(where + ": expected an array of " + std::to_string(N) +
                      " numbers");
  std::array<double, N> out{};
  for (std::size_t k = 0; k < N; ++k)
    out[k] = as_double(value.at(k), where);
  return out;
}

template <std::size_t N>
std::array<int, N> as_int_array(const json& value, const std::string& where) {
  if (!value.is_array() || value.size() != N)
    throw ConfigError(where + ": expected an array of " + std::to_string(N) +
                      " integers");
  std::array<int, N> out{};
  for (std::size_t k = 0; k < N; ++k) out[k] = as_int(value.at(k), where);
  return out;
}

std::vector<int> as_int_list(const json& value, const std::string& where) {
  if (!value.is_array())
    throw ConfigError(where + ": expected an array of integers");
  std::vector<int> out;
  for (const auto& item : value) out.push_back(as_int(item, where));
  return out;
}

std::vector<geometry::HoleSpec> parse_holes(const json& value,
                                            const std::string& where) {
  if (!value.is_array()) throw ConfigError(where + ": expected an array");
  std::vector<geometry::HoleSpec> holes;
  for (const auto& item : value) {
    const auto box = as_int_array<4>(item, where);
    holes.push_back({box[0], box[1], box[2], box[3]});
  }
  return holes;
}

std::vector<fem::LoadRegion> parse_loads(const json& value,
                                         const std::string& where) {
  if (!value.is_array()) throw ConfigError(where + ": expected an array");
  std::vector<fem::LoadRegion> loads;
  for (const auto& item : value) {
    if (!item.is_object()) throw ConfigError(where + ": expected objects");
    reject_unknown(item, where, {"rect", "traction"});
    fem::LoadRegion load;
    load.rect = as_double_array<4>(require(item, where, "rect"),
                                   where + ".rect");
    const auto t = as_double_array<3>(require(item, where, "traction"),
                                      where + ".traction");
    load.traction = {t[0], t[1], t[2]};
    loads.push_back(load);
  }
  return loads;
}

std::vector<nrep::ActivationSpec> parse_activations(const json& value,
                                                    const std::string& where) {
  if (!value.is_array()) throw ConfigError(where + ": expected an array");
  std::vector<nrep::ActivationSpec> acts;
  for (const auto& item : value) {
    if (!item.is_object()) throw ConfigError(where + ": expected objects");
    reject_unknown(item, where, {"kind", "omega", "delta"});
    nrep::ActivationSpec act;
    const auto kind = as_string(require(item, where, "kind"), where + ".kind");
    if (kind == "sin")
      act.kind = nrep::Activation::sinusoidal;
    else if (kind == "relu")
      act.kind = nrep::Activation::relu;
    else if (kind == "tanh")
      act.kind = nrep::Activation::tanh;
    else
      throw ConfigError(where + ".kind: expected sin, relu or tanh, got \"" +
                        kind + "\"");
    act.omega = get_double(item, where, "omega", 1.0);
    act.delta = get_double(item, where, "delta", 0.0);
    if (act.kind == nrep::Activation::sinusoidal && act.omega == 0.0)
      throw ConfigError(where + ".omega: must be nonzero for sin");
    acts.push_back(act);
  }
  return acts;
}

bench::SupportStyle parse_supports(const json& value,
                                   const std::string& where) {
  const auto name = as_string(value, where);
  if (name == "strip_ends") return bench::SupportStyle::strip_ends;
  if (name == "mid_edges") return bench::SupportStyle::mid_edges;
  if (name == "corners") return bench::SupportStyle::corners;
  throw ConfigError(where + ": expected strip_ends, mid_edges or corners, "
                            "got \"" + name + "\"");
}

void check_positive(double value, const std::string& where) {
  if (!(value > 0.0)) throw ConfigError(where + ": must be positive");
}

void check_extents(const std::array<double, 2>& extents,
                   const std::string& where) {
  check_positive(extents[0], where + "[0]");
  check_positive(extents[1], where + "[1]");
}

void check_hidden(const std::vector<int>& hidden, const std::string& where) {
  if (hidden.empty()) throw ConfigError(where + ": needs at least one layer");
  for (int width : hidden)
    if (width < 1) throw ConfigError(where + ": widths must be >= 1");
}

// Shared shape of the optimize and gradcheck sections.  A preset seeds the
// defaults; explicit keys override it.  Without a preset the support style
// must be spelled out, so an empty section cannot silently pin anything.
bench::ExperimentSpec parse_experiment(const json& obj,
                                       const std::string& where) {
  reject_unknown(obj, where,
                 {"preset", "name", "nx", "ny", "holes", "extents",
                  "thickness", "youngs_modulus", "poisson", "loads",
                  "supports", "volume_factor", "hidden", "activations",
                  "fit_epochs", "fit_learning_rate", "max_iterations",
                  "rel_tol", "move_limit", "seed"});
  bench::ExperimentSpec spec;
  if (obj.contains("preset")) {
    const auto preset = as_string(obj.at("preset"), where + ".preset");
    if (preset == "strip")
      spec = bench::make_strip_spec();
    else if (preset == "roof")
      spec = bench::make_roof_spec();
    else
      throw ConfigError(where + ".preset: expected strip or roof, got \"" +
                        preset + "\"");
  } else if (!obj.contains("supports")) {
    throw ConfigError(where + ": missing \"supports\" (or a preset)");
  }
  if (obj.contains("name"))
    spec.name = as_string(obj.at("name"), where + ".name");
  spec.nx = get_int(obj, where, "nx", spec.nx);
  spec.ny = get_int(obj, where, "ny", spec.ny);
  if (spec.nx < 1 || spec.ny < 1)
    throw ConfigError(where + ": nx and ny must be >= 1");
  if (obj.contains("holes"))
    spec.holes = parse_holes(obj.at("holes"), where + ".holes");
  if (obj.contains("extents"))
    spec.extents = as_double_array<2>(obj.at("extents"), where + ".extents");
  check_extents(spec.extents, where + ".extents");
  spec.thickness = get_double(obj, where, "thickness", spec.thickness);
  check_positive(spec.thickness, where + ".thickness");
  spec.youngs_modulus =
      get_double(obj, where, "youngs_modulus", spec.youngs_modulus);
  check_positive(spec.youngs_modulus, where + ".youngs_modulus");
  spec.poisson = get_double(obj, where, "poisson", spec.poisson);
  if (!(spec.poisson > -1.0 && spec.poisson < 0.5))
    throw ConfigError(where + ".poisson: must lie in (-1, 0.5)");
  if (obj.contains("loads"))
    spec.loads = parse_loads(obj.at("loads"), where + ".loads");
  if (obj.contains("supports"))
    spec.supports = parse_supports(obj.at("supports"), where + ".supports");
  spec.volume_factor =
      get_double(obj, where, "volume_factor", spec.volume_factor);
  check_positive(spec.volume_factor, where + ".volume_factor");
  if (obj.contains("hidden"))
    spec.hidden = as_int_list(obj.at("hidden"), where + ".hidden");
  check_hidden(spec.hidden, where + ".hidden");
  if (obj.contains("activations"))
    spec.activations =
        parse_activations(obj.at("activations"), where + ".activations");
  spec.fit.epochs = get_int(obj, where, "fit_epochs", spec.fit.epochs);
  if (spec.fit.epochs < 0)
    throw ConfigError(where + ".fit_epochs: must be >= 0");
  spec.fit.learning_rate =
      get_double(obj, where, "fit_learning_rate", spec.fit.learning_rate);
  if (spec.fit.learning_rate < 0.0)
    throw ConfigError(where + ".fit_learning_rate: must be >= 0");
  spec.max_iterations =
      get_int(obj, where, "max_iterations", spec.max_iterations);
  if (spec.max_iterations < 1)
    throw ConfigError(where + ".max_iterations: must be >= 1");
  spec.rel_tol = get_double(obj, where, "rel_tol", spec.rel_tol);
  if (spec.rel_tol < 0.0) throw ConfigError(where + ".rel_tol: must be >= 0");
  spec.move_limit = get_double(obj, where, "move_limit", spec.move_limit);
  if (spec.move_limit < 0.0)
    throw ConfigError(where + ".move_limit: must be >= 0");
  spec.seed = get_seed(obj, where, "seed", spec.seed);
  return spec;
}

FitConfig parse_fit(const json& obj) {
  const std::string where = "fit";
  reject_unknown(obj, where,
                 {"grid", "extents", "amplitude", "frequency", "hidden",
                  "activations", "epochs", "learning_rate", "report_every",
                  "seed"});
  FitConfig fit;
  if (obj.contains("grid"))
    fit.grid = as_int_array<2>(obj.at("grid"), where + ".grid");
  if (fit.grid[0] < 1 || fit.grid[1] < 1)
    throw ConfigError(where + ".grid: cells must be >= 1");
  if (obj.contains("extents"))
    fit.extents = as_double_array<2>(obj.at("extents"), where + ".extents");
  check_extents(fit.extents, where + ".extents");
  fit.amplitude = get_double(obj, where, "amplitude", fit.amplitude);
  fit.frequency = get_double(obj, where, "frequency", fit.frequency);
  if (obj.contains("hidden"))
    fit.hidden = as_int_list(obj.at("hidden"), where + ".hidden");
  check_hidden(fit.hidden, where + ".hidden");
  if (obj.contains("activations"))
    fit.activations =
        parse_activations(obj.at("activations"), where + ".activations");
  fit.training.epochs = get_int(obj, where, "epochs", 20000);
  if (fit.training.epochs < 0)
    throw ConfigError(where + ".epochs: must be >= 0");
  fit.training.learning_rate =
      get_double(obj, where, "learning_rate", fit.training.learning_rate);
  if (fit.training.learning_rate < 0.0)
    throw ConfigError(where + ".learning_rate: must be >= 0");
  fit.training.report_every = get_int(obj, where, "report_every", 100);
  if (fit.training.report_every < 0)
    throw ConfigError(where + ".report_every: must be >= 0");
  fit.seed = get_seed(obj, where, "seed", fit.seed);
  return fit;
}

OptimizeConfig parse_optimize(const json& obj) {
  // report_catenary is handled here; everything else is the shared shape
  json trimmed = obj;
  OptimizeConfig opt;
  if (trimmed.contains("report_catenary")) {
    opt.report_catenary = as_bool(trimmed.at("report_catenary"),
                                  "optimize.report_catenary");
    trimmed.erase("report_catenary");
  }
  opt.spec = parse_experiment(trimmed, "optimize");
  return opt;
}

GradcheckConfig parse_gradcheck(const json& obj) {
  json trimmed = obj;
  GradcheckConfig check;
  const std::string where = "gradcheck";
  if (trimmed.contains("directions")) {
    check.directions = as_int(trimmed.at("directions"), where + ".directions");
    trimmed.erase("directions");
  }
  if (check.directions < 1)
    throw ConfigError(where + ".directions: must be >= 1");
  if (trimmed.contains("tolerance")) {
    check.tolerance = as_double(trimmed.at("tolerance"), where + ".tolerance");
    trimmed.erase("tolerance");
  }
  check_positive(check.tolerance, where + ".tolerance");
  if (trimmed.contains("functional")) {
    check.functional =
        as_string(trimmed.at("functional"), where + ".functional");
    trimmed.erase("functional");
    if (check.functional != "compliance" && check.functional != "volume")
      throw ConfigError(where + ".functional: expected compliance or volume");
  }
  if (trimmed.contains("corrupt_gradient")) {
    check.corrupt_gradient = as_bool(trimmed.at("corrupt_gradient"),
                                     where + ".corrupt_gradient");
    trimmed.erase("corrupt_gradient");
  }
  check.spec = parse_experiment(trimmed, where);
  return check;
}

LatticeConfig parse_lattice(const json& obj) {
  const std::string where = "lattice";
  reject_unknown(obj, where,
                 {"network", "nx", "ny", "holes", "extents", "thickness",
                  "youngs_modulus", "poisson", "height", "cells",
                  "corner_struts", "strut_diameter", "map_hidden",
                  "map_epochs", "interior_levels", "seed"});
  LatticeConfig lat;
  lat.network_path =
      as_string(require(obj, where, "network"), where + ".network");
  lat.nx = get_int(obj, where, "nx", lat.nx);
  lat.ny = get_int(obj, where, "ny", lat.ny);
  if (lat.nx < 1 || lat.ny < 1)
    throw ConfigError(where + ": nx and ny must be >= 1");
  if (obj.contains("holes"))
    lat.holes = parse_holes(obj.at("holes"), where + ".holes");
  if (obj.contains("extents"))
    lat.extents = as_double_array<2>(obj.at("extents"), where + ".extents");
  check_extents(lat.extents, where + ".extents");
  lat.thickness = get_double(obj, where, "thickness", lat.thickness);
  check_positive(lat.thickness, where + ".thickness");
  lat.youngs_modulus =
      get_double(obj, where, "youngs_modulus", lat.youngs_modulus);
  check_positive(lat.youngs_modulus, where + ".youngs_modulus");
  lat.poisson = get_double(obj, where, "poisson", lat.poisson);
  if (!(lat.poisson > -1.0 && lat.poisson < 0.5))
    throw ConfigError(where + ".poisson: must lie in (-1, 0.5)");
  lat.height = get_double(obj, where, "height", lat.height);
  if (lat.height == 0.0)
    throw ConfigError(where + ".height: must be nonzero");
  if (obj.contains("cells"))
    lat.cells = as_int_array<3>(obj.at("cells"), where + ".cells");
  for (int count : lat.cells)
    if (count < 0) throw ConfigError(where + ".cells: must be >= 0");
  if (lat.cells[2] < 1) throw ConfigError(where + ".cells[2]: must be >= 1");
  lat.corner_struts = get_bool(obj, where, "corner_struts", lat.corner_struts);
  lat.strut_diameter =
      get_double(obj, where, "strut_diameter", lat.strut_diameter);
  check_positive(lat.strut_diameter, where + ".strut_diameter");
  if (obj.contains("map_hidden"))
    lat.map_hidden = as_int_list(obj.at("map_hidden"), where + ".map_hidden");
  check_hidden(lat.map_hidden, where + ".map_hidden");
  lat.map_epochs = get_int(obj, where, "map_epochs", lat.map_epochs);
  if (lat.map_epochs < 0)
    throw ConfigError(where + ".map_epochs: must be >= 0");
  lat.interior_levels =
      get_int(obj, where, "interior_levels", lat.interior_levels);
  if (lat.interior_levels < 0)
    throw ConfigError(where + ".interior_levels: must be >= 0");
  lat.seed = get_seed(obj, where, "seed", lat.seed);
  return lat;
}

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& err) {
    throw ConfigError("config is not valid JSON: " + std::string(err.what()));
  }
  if (!root.is_object())
    throw ConfigError("config root must be a JSON object");
  reject_unknown(root, "config",
                 {"version", "fit", "optimize", "gradcheck", "lattice"});
  const int version = as_int(require(root, "config", "version"),
                             "config.version");
  if (version != 1)
    throw ConfigError("config.version: expected 1, got " +
                      std::to_string(version));
  RunConfig config;
  if (root.contains("fit")) {
    if (!root.at("fit").is_object())
      throw ConfigError("fit: expected an object");
    config.fit = parse_fit(root.at("fit"));
  }
  if (root.contains("optimize")) {
    if (!root.at("optimize").is_object())
      throw ConfigError("optimize: expected an object");
    config.optimize = parse_optimize(root.at("optimize"));
  }
  if (root.contains("gradcheck")) {
    if (!root.at("gradcheck").is_object())
      throw ConfigError("gradcheck: expected an object");
    config.gradcheck = parse_gradcheck(root.at("gradcheck"));
  }
  if (root.contains("lattice")) {
    if (!root.at("lattice").is_object())
      throw ConfigError("lattice: expected an object");
    config.lattice = parse_lattice(root.at("lattice"));
  }
  return config;
}

void override_seed(RunConfig& config, std::uint64_t seed) {
  if (config.fit) config.fit->seed = seed;
  if (config.optimize) config.optimize->spec.seed = seed;
  if (config.gradcheck) config.gradcheck->spec.seed = seed;
  if (config.lattice) config.lattice->seed = seed;
}

}  // namespace shellopt::cli
