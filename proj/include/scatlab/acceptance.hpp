#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "scatlab/config.hpp"

namespace scatlab {

struct Metric {
  std::string name;
  double value = 0.0;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  std::vector<Metric> metrics;
  double seconds = 0.0;
};

struct AcceptanceSettings {
  Grid grid;
  PotentialSpec potential = PotentialSpec::compact_bump(0.5);
  std::size_t data_points = 1536;
  ExtractionOptions extraction;
  std::uint64_t seed = 20240607;
  /// Criteria to run; empty means all of 1..13.
  std::set<int> only;
};

AcceptanceSettings settings_from_config(const ExperimentConfig& config);

/// Number of criteria in the suite.
inline constexpr int kCriterionCount = 13;

/// Runs one criterion (1..12). Criterion 13 needs the others and is only
/// available through run_acceptance.
CriterionResult run_criterion(int id, const AcceptanceSettings& settings);

/// Runs the selected criteria in order. Criterion 13 reruns every other
/// selected criterion and compares all metrics bit for bit.
std::vector<CriterionResult> run_acceptance(const AcceptanceSettings& settings,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS  3  free Gaussian closed form  (detail)".
std::string format_line(const CriterionResult& r);

}  // namespace scatlab
