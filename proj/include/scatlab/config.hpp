#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "scatlab/grid.hpp"
#include "scatlab/regularity.hpp"
#include "scatlab/scattering.hpp"

namespace scatlab {

enum class ExperimentKind { Flow, Solve, Scatter, Norms, VerifyAll };

const char* to_string(ExperimentKind k);
ExperimentKind parse_experiment(const std::string& name);

enum class DataKind { Gaussian, Hermite, Random, File };

struct DataSpec {
  DataKind kind = DataKind::Random;
  /// Hermite index.
  int m = 0;
  /// Gaussian width.
  double width = 0.5;
  std::string path;
  /// Points per axis of the data grid; its spacing is always pi/L.
  std::size_t points = 1536;
};

struct FlowSpec {
  /// Explicit seeds as (z..., t, zeta..., tau).
  std::vector<std::vector<double>> seeds;
  /// Extra random characteristic seeds drawn from the run seed.
  std::size_t random_seeds = 0;
  bool forward = true;
  bool backward = true;
  double rho_stop = 1e-6;
  std::size_t max_steps = 20000;
  double rtol = 1e-10;
  double atol = 1e-12;
};

struct NormsSpec {
  std::vector<double> threshold_l{-1.0, -0.75, -0.25, 0.0};
  std::vector<double> threshold_T;
  double taper_fraction = 0.1;
};

struct ExperimentConfig {
  int schema_version = 1;
  ExperimentKind experiment = ExperimentKind::VerifyAll;
  Grid grid;
  PotentialSpec potential = PotentialSpec::compact_bump(0.5);
  DataSpec data;
  NormOrder orders{0.0, 0.0, 0, 1};
  ExtractionOptions extraction;
  FlowSpec flow;
  NormsSpec norms;
  std::map<std::string, double> tolerances;
  std::filesystem::path output_dir = "scatlab-out";
  std::uint64_t seed = 20240607;

  double tolerance(const std::string& key, double fallback) const;
  DataGrid data_grid() const { return DataGrid::for_grid(grid, data.points); }
  /// Throws ConfigInvalid describing the first violated rule.
  void validate() const;
};

/// Parses a YAML config. Unknown keys, a missing or unsupported
/// schema_version and an empty document raise ConfigInvalid.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text);

/// Doubles M (time steps) `times` times.
Grid refine_grid(const Grid& grid, int times);

}  // namespace scatlab
