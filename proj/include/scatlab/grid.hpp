#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace scatlab {

using cplx = std::complex<double>;

/// Periodic spatial box [-L, L)^n with N points per axis, times t0 + k dt for
/// k = 0..M.
struct Grid {
  std::size_t n = 1;
  double L = 480.0;
  std::size_t N = 2048;
  double t0 = -30.0;
  double t1 = 30.0;
  std::size_t M = 2400;

  double dt() const { return (t1 - t0) / static_cast<double>(M); }
  double dz() const { return 2.0 * L / static_cast<double>(N); }
  /// Spacing of the FFT frequencies, pi / L.
  double dxi() const;
  std::size_t slice_size() const;
  std::size_t slices() const { return M + 1; }
  double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt(); }
  double coord(std::size_t j) const { return -L + static_cast<double>(j) * dz(); }
  /// FFT frequency of index m (natural FFTW order).
  double freq(std::size_t m) const;
  /// Slice index nearest to time t, clamped to [0, M].
  std::size_t nearest_slice(double t) const;

  /// Throws ConfigInvalid on n not in {1,2}, N < 16 or not a power of two,
  /// M < 1, L <= 0, or t1 <= t0.
  void validate() const;
};

bool operator==(const Grid& a, const Grid& b);

/// Complex samples u(z, t) stored slice-major: values[k * slice_size + j],
/// spatial index j row-major over the n axes.
struct SpacetimeField {
  Grid grid;
  std::vector<cplx> values;

  SpacetimeField() = default;
  explicit SpacetimeField(const Grid& g);

  std::span<cplx> slice(std::size_t k);
  std::span<const cplx> slice(std::size_t k) const;
  /// Discrete L^2(dz) norm of slice k.
  double slice_norm(std::size_t k) const;
  /// Rectangle-rule L^2(dz dt) norm over the whole grid.
  double norm() const;
  double max_abs() const;
};

/// Frequency lattice zeta_k = (k - Np/2) dzeta per axis, k = 0..Np-1,
/// ascending. Np is the number of points per axis.
struct DataGrid {
  std::size_t n = 1;
  std::size_t Np = 1536;
  double dzeta = 0.0;

  double zeta(std::size_t k) const;
  double zeta_max() const { return 0.5 * static_cast<double>(Np) * dzeta; }
  std::size_t size() const;
  /// The data grid whose spacing matches the FFT frequencies of `grid`.
  static DataGrid for_grid(const Grid& grid, std::size_t points);
};

bool operator==(const DataGrid& a, const DataGrid& b);

struct DataFunction {
  DataGrid grid;
  std::vector<cplx> values;

  DataFunction() = default;
  explicit DataFunction(const DataGrid& g);

  /// L^2(dzeta) norm.
  double norm() const;
  double max_abs() const;
};

std::size_t ipow(std::size_t base, std::size_t exp);

enum class PotentialKind { Zero, CompactBump, GaussianBump };

const char* to_string(PotentialKind k);

/// V(z, t) = (amplitude + i complex_part) * profile(r) with
/// r^2 = |z - center_z|^2 / width_z^2 + (t - center_t)^2 / width_t^2.
/// CompactBump profile: exp(1 - 1/(1 - r^2)) for r < 1, zero otherwise.
/// GaussianBump profile: exp(-r^2).
struct PotentialSpec {
  PotentialKind kind = PotentialKind::Zero;
  double amplitude = 0.0;
  double complex_part = 0.0;
  std::vector<double> center_z;
  double center_t = 0.0;
  double width_z = 3.0;
  double width_t = 3.0;

  static PotentialSpec zero() { return {}; }
  static PotentialSpec compact_bump(double amplitude, double width_z = 3.0, double width_t = 3.0);

  bool is_zero() const;
  bool is_real() const { return complex_part == 0.0; }
  double profile(std::span<const double> z, double t) const;
  cplx value(std::span<const double> z, double t) const;
  /// V(., t) on the spatial grid.
  std::vector<cplx> slice(const Grid& grid, double t) const;
  /// Time interval outside of which V vanishes (CompactBump) or is below
  /// exp(-40) (GaussianBump).
  double t_support_min() const;
  double t_support_max() const;
};

/// Spatial coordinates of point j of a slice.
std::vector<double> point_coords(const Grid& grid, std::size_t j);

/// Checks the dispersive-cone bound L > z_extent + 2 zeta_max t_max used to
/// keep wrap-around negligible. Throws ConfigInvalid when violated.
void validate_dispersive_cone(const Grid& grid, double z_extent, double zeta_max);

}  // namespace scatlab
