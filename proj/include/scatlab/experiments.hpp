#pragma once

#include <iosfwd>
#include <string>

#include "scatlab/config.hpp"

namespace scatlab {

struct RunOptions {
  /// Data function base path (sidecar + .c64) overriding config.data.
  std::string data_path;
};

/// Runs the configured experiment, writing report.json and the CSV and
/// field files into config.output_dir. Returns 0 when every check of the
/// experiment passes and 1 otherwise. Progress goes to `log`.
int run(const ExperimentConfig& config, std::ostream& log, const RunOptions& options = {});

}  // namespace scatlab
