#include "scatlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "scatlab/errors.hpp"

namespace scatlab {

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

double Grid::dxi() const { return std::numbers::pi / L; }

std::size_t Grid::slice_size() const { return ipow(N, n); }

double Grid::freq(std::size_t m) const {
  const auto mm = static_cast<long long>(m);
  const auto NN = static_cast<long long>(N);
  const long long shifted = mm < NN / 2 ? mm : mm - NN;
  return static_cast<double>(shifted) * dxi();
}

std::size_t Grid::nearest_slice(double t) const {
  const double k = std::round((t - t0) / dt());
  if (k <= 0.0) return 0;
  if (k >= static_cast<double>(M)) return M;
  return static_cast<std::size_t>(k);
}

void Grid::validate() const {
  if (n != 1 && n != 2) throw Error(ErrorKind::ConfigInvalid, "grid.n must be 1 or 2");
  if (N < 16 || (N & (N - 1)) != 0) throw Error(ErrorKind::ConfigInvalid, "grid.N must be a power of two >= 16");
  if (M < 1) throw Error(ErrorKind::ConfigInvalid, "grid.M must be >= 1");
  if (!(L > 0.0) || !std::isfinite(L)) throw Error(ErrorKind::ConfigInvalid, "grid.L must be positive");
  if (!(t1 > t0) || !std::isfinite(t0) || !std::isfinite(t1)) {
    throw Error(ErrorKind::ConfigInvalid, "grid time window must satisfy t0 < t1");
  }
}

bool operator==(const Grid& a, const Grid& b) {
  return a.n == b.n && a.L == b.L && a.N == b.N && a.t0 == b.t0 && a.t1 == b.t1 && a.M == b.M;
}

SpacetimeField::SpacetimeField(const Grid& g) : grid(g), values(g.slices() * g.slice_size()) {}

std::span<cplx> SpacetimeField::slice(std::size_t k) {
  const std::size_t s = grid.slice_size();
  return {values.data() + k * s, s};
}

std::span<const cplx> SpacetimeField::slice(std::size_t k) const {
  const std::size_t s = grid.slice_size();
  return {values.data() + k * s, s};
}

double SpacetimeField::slice_norm(std::size_t k) const {
  double acc = 0.0;
  for (const cplx& c : slice(k)) acc += std::norm(c);
  return std::sqrt(acc * std::pow(grid.dz(), static_cast<double>(grid.n)));
}

double SpacetimeField::norm() const {
  double acc = 0.0;
  for (const cplx& c : values) acc += std::norm(c);
  return std::sqrt(acc * std::pow(grid.dz(), static_cast<double>(grid.n)) * grid.dt());
}

double SpacetimeField::max_abs() const {
  double m = 0.0;
  for (const cplx& c : values) m = std::max(m, std::abs(c));
  return m;
}

double DataGrid::zeta(std::size_t k) const {
  return (static_cast<double>(k) - 0.5 * static_cast<double>(Np)) * dzeta;
}

std::size_t DataGrid::size() const { return ipow(Np, n); }

DataGrid DataGrid::for_grid(const Grid& grid, std::size_t points) {
  return DataGrid{grid.n, points, grid.dxi()};
}

bool operator==(const DataGrid& a, const DataGrid& b) {
  return a.n == b.n && a.Np == b.Np && a.dzeta == b.dzeta;
}

DataFunction::DataFunction(const DataGrid& g) : grid(g), values(g.size()) {}

double DataFunction::norm() const {
  double acc = 0.0;
  for (const cplx& c : values) acc += std::norm(c);
  return std::sqrt(acc * std::pow(grid.dzeta, static_cast<double>(grid.n)));
}

double DataFunction::max_abs() const {
  double m = 0.0;
  for (const cplx& c : values) m = std::max(m, std::abs(c));
  return m;
}

const char* to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::Zero: return "Zero";
    case PotentialKind::CompactBump: return "CompactBump";
    case PotentialKind::GaussianBump: return "GaussianBump";
  }
  return "Zero";
}

PotentialSpec PotentialSpec::compact_bump(double amplitude, double width_z, double width_t) {
  PotentialSpec v;
  v.kind = PotentialKind::CompactBump;
  v.amplitude = amplitude;
  v.width_z = width_z;
  v.width_t = width_t;
  return v;
}

bool PotentialSpec::is_zero() const {
  return kind == PotentialKind::Zero || (amplitude == 0.0 && complex_part == 0.0);
}

double PotentialSpec::profile(std::span<const double> z, double t) const {
  if (kind == PotentialKind::Zero) return 0.0;
  double r2 = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double c = i < center_z.size() ? center_z[i] : 0.0;
    const double d = (z[i] - c) / width_z;
    r2 += d * d;
  }
  const double dt = (t - center_t) / width_t;
  r2 += dt * dt;
  if (kind == PotentialKind::GaussianBump) return std::exp(-r2);
  if (r2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - r2));
}

cplx PotentialSpec::value(std::span<const double> z, double t) const {
  const double p = profile(z, t);
  return {amplitude * p, complex_part * p};
}

std::vector<cplx> PotentialSpec::slice(const Grid& grid, double t) const {
  const std::size_t size = grid.slice_size();
  std::vector<cplx> out(size);
  if (is_zero()) return out;
  const double span_t = kind == PotentialKind::GaussianBump ? std::sqrt(40.0) * width_t : width_t;
  if (std::abs(t - center_t) >= span_t) return out;
  std::vector<double> z(grid.n);
  for (std::size_t j = 0; j < size; ++j) {
    std::size_t rem = j;
    for (std::size_t a = grid.n; a-- > 0;) {
      z[a] = grid.coord(rem % grid.N);
      rem /= grid.N;
    }
    out[j] = value(z, t);
  }
  return out;
}

double PotentialSpec::t_support_min() const {
  const double span_t = kind == PotentialKind::GaussianBump ? std::sqrt(40.0) * width_t : width_t;
  return center_t - span_t;
}

double PotentialSpec::t_support_max() const {
  const double span_t = kind == PotentialKind::GaussianBump ? std::sqrt(40.0) * width_t : width_t;
  return center_t + span_t;
}

std::vector<double> point_coords(const Grid& grid, std::size_t j) {
  std::vector<double> z(grid.n);
  for (std::size_t a = grid.n; a-- > 0;) {
    z[a] = grid.coord(j % grid.N);
    j /= grid.N;
  }
  return z;
}

void validate_dispersive_cone(const Grid& grid, double z_extent, double zeta_max) {
  const double t_max = std::max(std::abs(grid.t0), std::abs(grid.t1));
  const double needed = z_extent + 2.0 * zeta_max * t_max;
  if (!(grid.L > needed)) {
    throw Error(ErrorKind::ConfigInvalid, "box half-width L = " + std::to_string(grid.L) +
                                              " violates the dispersive-cone bound L > " + std::to_string(needed));
  }
}

}  // namespace scatlab
