#include "scatlab/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "scatlab/errors.hpp"

namespace scatlab {
namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::ConfigInvalid, msg); }

void reject_unknown(const YAML::Node& node, const std::string& where, const std::set<std::string>& allowed) {
  if (!node.IsMap()) invalid(where + " must be a mapping");
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.contains(key)) invalid("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const YAML::Node& node, const char* key, T& out, const std::string& where) {
  const YAML::Node v = node[key];
  if (!v) return;
  try {
    out = v.as<T>();
  } catch (const YAML::Exception&) {
    invalid(where + "." + key + " has the wrong type");
  }
}

PotentialKind parse_potential_kind(const std::string& s) {
  if (s == "Zero" || s == "zero") return PotentialKind::Zero;
  if (s == "CompactBump" || s == "compact_bump") return PotentialKind::CompactBump;
  if (s == "GaussianBump" || s == "gaussian_bump") return PotentialKind::GaussianBump;
  invalid("unknown potential kind '" + s + "'");
}

DataKind parse_data_kind(const std::string& s) {
  if (s == "gaussian") return DataKind::Gaussian;
  if (s == "hermite") return DataKind::Hermite;
  if (s == "random") return DataKind::Random;
  if (s == "file") return DataKind::File;
  invalid("unknown data kind '" + s + "'");
}

}  // namespace

const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Flow: return "flow";
    case ExperimentKind::Solve: return "solve";
    case ExperimentKind::Scatter: return "scatter";
    case ExperimentKind::Norms: return "norms";
    case ExperimentKind::VerifyAll: return "verify-all";
  }
  return "verify-all";
}

ExperimentKind parse_experiment(const std::string& name) {
  if (name == "flow") return ExperimentKind::Flow;
  if (name == "solve") return ExperimentKind::Solve;
  if (name == "scatter") return ExperimentKind::Scatter;
  if (name == "norms") return ExperimentKind::Norms;
  if (name == "verify-all") return ExperimentKind::VerifyAll;
  invalid("unknown experiment '" + name + "'");
}

double ExperimentConfig::tolerance(const std::string& key, double fallback) const {
  const auto it = tolerances.find(key);
  return it == tolerances.end() ? fallback : it->second;
}

void ExperimentConfig::validate() const {
  if (schema_version != 1) invalid("unsupported schema_version " + std::to_string(schema_version));
  grid.validate();
  orders.validate();
  if (data.points < 2 || data.points > grid.N || data.points % 2 != 0) {
    invalid("data.points must be even and between 2 and grid.N");
  }
  if (potential.width_z <= 0.0 || potential.width_t <= 0.0) invalid("potential widths must be positive");
  if (potential.center_z.size() > grid.n) invalid("potential.center_z has more entries than grid.n");
  if (potential.kind == PotentialKind::CompactBump && !potential.is_zero()) {
    if (potential.t_support_min() <= grid.t0 || potential.t_support_max() >= grid.t1) {
      invalid("potential support must lie strictly inside the time window");
    }
  }
  if (extraction.fit_terms < 1 || extraction.fit_terms > 6) invalid("extraction.fit_terms must be in [1, 6]");
  if (!(extraction.tail_fraction > 0.0 && extraction.tail_fraction <= 1.0)) {
    invalid("extraction.tail_fraction must be in (0, 1]");
  }
  if (data.kind == DataKind::File && data.path.empty()) invalid("data.kind file needs data.path");
  if (data.kind == DataKind::Hermite && data.m < 0) invalid("data.m must be >= 0");
  for (const auto& s : flow.seeds) {
    if (s.size() != 2 * grid.n + 2) invalid("each flow seed needs 2n+2 numbers (z, t, zeta, tau)");
  }
  if (!(norms.taper_fraction >= 0.0 && norms.taper_fraction <= 0.5)) {
    invalid("norms.taper_fraction must be in [0, 0.5]");
  }
  // Builtin data keep their frequency mass within zeta_max/2.
  validate_dispersive_cone(grid, 0.0, 0.5 * data_grid().zeta_max());
}

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    invalid(std::string("config is not valid YAML: ") + e.what());
  }
  if (!root || root.IsNull() || (root.IsMap() && root.size() == 0)) invalid("config is empty");
  reject_unknown(root, "config",
                 {"schema_version", "experiment", "grid", "potential", "data", "orders", "extraction", "flow",
                  "norms", "tolerances", "output_dir", "seed"});
  ExperimentConfig c;
  if (!root["schema_version"]) invalid("config lacks schema_version");
  read(root, "schema_version", c.schema_version, "config");
  if (root["experiment"]) c.experiment = parse_experiment(root["experiment"].as<std::string>());
  if (root["output_dir"]) c.output_dir = root["output_dir"].as<std::string>();
  read(root, "seed", c.seed, "config");

  if (const YAML::Node g = root["grid"]) {
    reject_unknown(g, "grid", {"n", "L", "N", "t0", "t1", "M"});
    read(g, "n", c.grid.n, "grid");
    read(g, "L", c.grid.L, "grid");
    read(g, "N", c.grid.N, "grid");
    read(g, "t0", c.grid.t0, "grid");
    read(g, "t1", c.grid.t1, "grid");
    read(g, "M", c.grid.M, "grid");
  }
  if (const YAML::Node p = root["potential"]) {
    reject_unknown(p, "potential",
                   {"kind", "amplitude", "complex_part", "center_z", "center_t", "width_z", "width_t"});
    if (p["kind"]) c.potential.kind = parse_potential_kind(p["kind"].as<std::string>());
    read(p, "amplitude", c.potential.amplitude, "potential");
    read(p, "complex_part", c.potential.complex_part, "potential");
    read(p, "center_z", c.potential.center_z, "potential");
    read(p, "center_t", c.potential.center_t, "potential");
    read(p, "width_z", c.potential.width_z, "potential");
    read(p, "width_t", c.potential.width_t, "potential");
  }
  if (const YAML::Node d = root["data"]) {
    reject_unknown(d, "data", {"kind", "m", "width", "path", "points"});
    if (d["kind"]) c.data.kind = parse_data_kind(d["kind"].as<std::string>());
    read(d, "m", c.data.m, "data");
    read(d, "width", c.data.width, "data");
    read(d, "path", c.data.path, "data");
    read(d, "points", c.data.points, "data");
  }
  if (const YAML::Node o = root["orders"]) {
    reject_unknown(o, "orders", {"s", "l", "kappa", "k"});
    read(o, "s", c.orders.s, "orders");
    read(o, "l", c.orders.l, "orders");
    read(o, "kappa", c.orders.kappa, "orders");
    read(o, "k", c.orders.k, "orders");
  }
  if (const YAML::Node e = root["extraction"]) {
    reject_unknown(e, "extraction", {"fit_terms", "tail_fraction"});
    read(e, "fit_terms", c.extraction.fit_terms, "extraction");
    read(e, "tail_fraction", c.extraction.tail_fraction, "extraction");
  }
  if (const YAML::Node f = root["flow"]) {
    reject_unknown(f, "flow",
                   {"seeds", "random_seeds", "forward", "backward", "rho_stop", "max_steps", "rtol", "atol"});
    read(f, "seeds", c.flow.seeds, "flow");
    read(f, "random_seeds", c.flow.random_seeds, "flow");
    read(f, "forward", c.flow.forward, "flow");
    read(f, "backward", c.flow.backward, "flow");
    read(f, "rho_stop", c.flow.rho_stop, "flow");
    read(f, "max_steps", c.flow.max_steps, "flow");
    read(f, "rtol", c.flow.rtol, "flow");
    read(f, "atol", c.flow.atol, "flow");
  }
  if (const YAML::Node nm = root["norms"]) {
    reject_unknown(nm, "norms", {"threshold_l", "threshold_T", "taper_fraction"});
    read(nm, "threshold_l", c.norms.threshold_l, "norms");
    read(nm, "threshold_T", c.norms.threshold_T, "norms");
    read(nm, "taper_fraction", c.norms.taper_fraction, "norms");
  }
  if (const YAML::Node t = root["tolerances"]) {
    if (!t.IsMap()) invalid("tolerances must be a mapping");
    for (const auto& kv : t) {
      try {
        c.tolerances[kv.first.as<std::string>()] = kv.second.as<double>();
      } catch (const YAML::Exception&) {
        invalid("tolerance '" + kv.first.as<std::string>() + "' is not a number");
      }
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigInvalid, "cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

Grid refine_grid(const Grid& grid, int times) {
  Grid g = grid;
  for (int i = 0; i < times; ++i) g.M *= 2;
  return g;
}

}  // namespace scatlab
