#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace scatlab {

/// A point (z, t, zeta, tau) of the cotangent bundle of spacetime R^{n+1}.
struct PhasePoint {
  std::vector<double> z;
  double t = 0.0;
  std::vector<double> zeta;
  double tau = 0.0;

  std::size_t dim() const { return z.size(); }
  /// n >= 1, matching lengths, all components finite.
  bool valid() const;
};

enum class Chart { NorthPolar, SouthPolar, Equatorial };

enum class RadialSign { Plus, Minus };

inline int sign_value(RadialSign s) { return s == RadialSign::Plus ? 1 : -1; }

/// Representation of a phase point in one of the boundary charts of the
/// compactified parabolic phase space.
///
/// Polar charts: angular_base = w = z/|t|, angular_fib = (zeta, tau),
/// rho_fib is the global fibre defining function.
///
/// Equatorial chart: coordinates are taken in the frame where the dominant
/// spatial axis is first and oriented so that z_1 > 0. angular_base =
/// (s = t/z_1, v_j = z_j/z_1 for j >= 2), angular_fib = (zeta_hat, tau/|zeta|^2)
/// with zeta_hat the unit frequency in that frame, and rho_fib = 1/|zeta_1|.
/// rho_base is the global base defining function in every chart, so a
/// boundary point is represented by rho_base = 0.
struct BoundaryChartPoint {
  Chart chart = Chart::NorthPolar;
  double rho_base = 0.0;
  double rho_fib = 0.0;
  std::vector<double> angular_base;
  std::vector<double> angular_fib;
};

/// Only the flat metric g^{ij} = delta^{ij} is supported.
struct MetricSpec {
  enum class Kind { Flat };
  Kind kind = Kind::Flat;
  std::size_t dimension = 1;
};

/// Anisotropic fibre weight R = (|zeta|^4 + tau^2)^{1/4}.
double fiber_weight(std::span<const double> zeta, double tau);

/// Base defining function (1 + |z|^2 + t^2)^{-1/2}.
double rho_base(std::span<const double> z, double t);

/// Fibre defining function (1 + R^4)^{-1/4}.
double rho_fib(std::span<const double> zeta, double tau);

/// Principal symbol tau + |zeta|^2 of D_t + Delta + V for the flat metric.
double symbol_p(const PhasePoint& point, const MetricSpec& metric = {});

/// Chart thresholds: polar charts cover |t| >= |z|/3, the equatorial chart
/// covers |t| <= 2|z|/3. Inside the overlap the hand-off is at |t| = |z|/2.
inline constexpr double kPolarCutoff = 1.0 / 3.0;
inline constexpr double kEquatorialCutoff = 2.0 / 3.0;
inline constexpr double kChartHandoff = 0.5;

bool in_polar_region(const PhasePoint& point);
bool in_equatorial_region(const PhasePoint& point);

/// Throws Error(ChartUndefined) when the point is outside the chart domain.
BoundaryChartPoint to_chart(const PhasePoint& point, Chart chart);

/// Chart used by radial_distance for the requested component of the radial
/// set. Throws Error(ChartUndefined) if no chart is valid for that sign.
Chart select_chart(const PhasePoint& point, RadialSign sign);

/// Euclidean distance, in chart coordinates, to the radial set R_sign.
/// Zero exactly on R_sign; the radial set's tau-equation is tau = -|zeta|^2.
double radial_distance(const BoundaryChartPoint& point, RadialSign sign);
double radial_distance(const PhasePoint& point, RadialSign sign);
double radial_distance_in_chart(const PhasePoint& point, RadialSign sign, Chart chart);

}  // namespace scatlab
