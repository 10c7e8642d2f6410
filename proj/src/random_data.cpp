#include "scatlab/random_data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "scatlab/errors.hpp"

namespace scatlab {
namespace {

std::vector<double> coords_of(const DataGrid& dg, std::size_t q) {
  std::vector<double> z(dg.n);
  for (std::size_t a = dg.n; a-- > 0;) {
    z[a] = dg.zeta(q % dg.Np);
    q /= dg.Np;
  }
  return z;
}

std::mt19937_64 stream(std::uint64_t seed, std::size_t index, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(salt)};
  return std::mt19937_64(seq);
}

}  // namespace

DataFunction gaussian_data(const DataGrid& dg, double width, double center) {
  DataFunction f(dg);
  for (std::size_t q = 0; q < f.values.size(); ++q) {
    const std::vector<double> z = coords_of(dg, q);
    double r2 = 0.0;
    for (std::size_t a = 0; a < dg.n; ++a) {
      const double d = z[a] - (a == 0 ? center : 0.0);
      r2 += d * d;
    }
    f.values[q] = std::exp(-0.5 * r2 / (width * width));
  }
  return f;
}

DataFunction hermite_data(const DataGrid& dg, int m) {
  if (m < 0) throw Error(ErrorKind::ConfigInvalid, "Hermite index must be >= 0");
  DataFunction f(dg);
  for (std::size_t q = 0; q < f.values.size(); ++q) {
    const std::vector<double> z = coords_of(dg, q);
    double r2 = 0.0;
    for (double x : z) r2 += x * x;
    // H_{k+1} = 2x H_k - 2k H_{k-1}
    double h0 = 1.0;
    double h1 = 2.0 * z[0];
    double h = m == 0 ? h0 : h1;
    for (int k = 1; k < m; ++k) {
      h = 2.0 * z[0] * h1 - 2.0 * k * h0;
      h0 = h1;
      h1 = h;
    }
    f.values[q] = h * std::exp(-0.5 * r2);
  }
  const double nrm = f.norm();
  if (nrm > 0.0) {
    for (cplx& c : f.values) c /= nrm;
  }
  return f;
}

DataFunction random_data(const DataGrid& dg, std::uint64_t seed, std::size_t index) {
  auto rng = stream(seed, index, 0xda7a);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // Packets stay well inside the grid so the tail at the edge is below 1e-9.
  const double reach = dg.zeta_max() / 10.0;
  const double base_width = dg.zeta_max() / 8.0;
  DataFunction f(dg);
  for (int packet = 0; packet < 2; ++packet) {
    std::vector<double> centre(dg.n);
    for (double& c : centre) c = reach * (2.0 * unit(rng) - 1.0);
    const double width = base_width * (0.9 + 0.2 * unit(rng));
    const double amp = 0.5 + unit(rng);
    const double phase = 2.0 * std::numbers::pi * unit(rng);
    const cplx a = std::polar(amp, phase);
    for (std::size_t q = 0; q < f.values.size(); ++q) {
      const std::vector<double> z = coords_of(dg, q);
      double r2 = 0.0;
      for (std::size_t i = 0; i < dg.n; ++i) r2 += (z[i] - centre[i]) * (z[i] - centre[i]);
      f.values[q] += a * std::exp(-0.5 * r2 / (width * width));
    }
  }
  return f;
}

SpacetimeField random_source(const Grid& grid, std::uint64_t seed, std::size_t index) {
  auto rng = stream(seed, index, 0x50c);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double t_c = 5.0 * (2.0 * unit(rng) - 1.0);
  const double half = 4.0;
  const double width = 2.5 + 0.5 * unit(rng);
  std::vector<double> centre(grid.n);
  std::vector<double> xi0(grid.n);
  for (std::size_t a = 0; a < grid.n; ++a) {
    centre[a] = 5.0 * (2.0 * unit(rng) - 1.0);
    xi0[a] = 0.5 * (2.0 * unit(rng) - 1.0);
  }
  const cplx amp = std::polar(0.5 + unit(rng), 2.0 * std::numbers::pi * unit(rng));
  SpacetimeField v(grid);
  const std::size_t size = grid.slice_size();
  for (std::size_t k = 0; k <= grid.M; ++k) {
    const double s = (grid.time(k) - t_c) / half;
    if (std::abs(s) >= 1.0) continue;
    const double bump = std::exp(1.0 - 1.0 / (1.0 - s * s));
    auto sl = v.slice(k);
    for (std::size_t j = 0; j < size; ++j) {
      const std::vector<double> z = point_coords(grid, j);
      double r2 = 0.0;
      double phase = 0.0;
      for (std::size_t a = 0; a < grid.n; ++a) {
        r2 += (z[a] - centre[a]) * (z[a] - centre[a]);
        phase += xi0[a] * z[a];
      }
      sl[j] = amp * bump * std::polar(std::exp(-0.5 * r2 / (width * width)), phase);
    }
  }
  return v;
}

}  // namespace scatlab
