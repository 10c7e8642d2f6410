#pragma once

#include <filesystem>

#include "scatlab/grid.hpp"

namespace scatlab {

/// Fields are stored as raw little-endian complex64 (float re, float im)
/// in `<base>.c64` with a JSON sidecar `<base>.json` describing the shape and
/// grid. Writing, reading and writing again reproduces the bytes exactly.
void write_field(const std::filesystem::path& base, const SpacetimeField& u);
SpacetimeField read_field(const std::filesystem::path& base);

void write_data(const std::filesystem::path& base, const DataFunction& f);
DataFunction read_data(const std::filesystem::path& base);

}  // namespace scatlab
