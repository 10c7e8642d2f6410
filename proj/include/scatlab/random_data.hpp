#pragma once

#include <cstddef>
#include <cstdint>

#include "scatlab/grid.hpp"

namespace scatlab {

/// e^{-|zeta - center|^2 / (2 width^2)} with center along the first axis.
DataFunction gaussian_data(const DataGrid& dg, double width = 1.0, double center = 0.0);

/// Hermite function H_m(zeta_1) e^{-|zeta|^2/2}, normalized in L^2.
DataFunction hermite_data(const DataGrid& dg, int m);

/// Sum of two complex Gaussian packets with seeded random centres (|c| <=
/// zeta_max/10), widths within 10% of zeta_max/8, amplitudes and phases.
/// Each (seed, index) pair gives an independent draw.
DataFunction random_data(const DataGrid& dg, std::uint64_t seed, std::size_t index);

/// Smooth source compactly supported in t: a C^infinity bump in t of
/// half-width 4 centred in |t| <= 5, times a modulated Gaussian in z of width 2.5 to 3.
SpacetimeField random_source(const Grid& grid, std::uint64_t seed, std::size_t index);

}  // namespace scatlab
