#include "scatlab/phase_space.hpp"

#include <algorithm>
#include <cmath>

#include "scatlab/errors.hpp"

namespace scatlab {
namespace {

double norm_sq(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return acc;
}

void require_finite(const PhasePoint& p) {
  if (!p.valid()) throw Error(ErrorKind::DimensionMismatch, "phase point must have n >= 1 finite components");
}

struct EquatorialFrame {
  std::size_t axis = 0;
  double orientation = 1.0;
};

EquatorialFrame dominant_axis(std::span<const double> z) {
  EquatorialFrame frame;
  double best = -1.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (std::abs(z[i]) > best) {
      best = std::abs(z[i]);
      frame.axis = i;
    }
  }
  frame.orientation = z[frame.axis] >= 0.0 ? 1.0 : -1.0;
  return frame;
}

// Reorders v so the dominant axis comes first and flips it into z_1 > 0.
std::vector<double> to_frame(std::span<const double> v, const EquatorialFrame& frame) {
  std::vector<double> out;
  out.reserve(v.size());
  out.push_back(frame.orientation * v[frame.axis]);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i != frame.axis) out.push_back(frame.orientation * v[i]);
  }
  return out;
}

bool polar_valid_for(const PhasePoint& p, RadialSign sign) {
  if (!in_polar_region(p)) return false;
  return sign == RadialSign::Plus ? p.t > 0.0 : p.t < 0.0;
}

bool equatorial_valid_for(const PhasePoint& p, RadialSign sign) {
  if (!in_equatorial_region(p)) return false;
  if (norm_sq(p.zeta) == 0.0) return false;
  const auto frame = dominant_axis(p.z);
  const double zeta1 = frame.orientation * p.zeta[frame.axis];
  return sign == RadialSign::Plus ? zeta1 > 0.0 : zeta1 < 0.0;
}

}  // namespace

bool PhasePoint::valid() const {
  if (z.empty() || z.size() != zeta.size()) return false;
  if (!std::isfinite(t) || !std::isfinite(tau)) return false;
  auto finite = [](double x) { return std::isfinite(x); };
  return std::all_of(z.begin(), z.end(), finite) && std::all_of(zeta.begin(), zeta.end(), finite);
}

double fiber_weight(std::span<const double> zeta, double tau) {
  const double z2 = norm_sq(zeta);
  return std::pow(z2 * z2 + tau * tau, 0.25);
}

double rho_base(std::span<const double> z, double t) {
  return 1.0 / std::sqrt(1.0 + norm_sq(z) + t * t);
}

double rho_fib(std::span<const double> zeta, double tau) {
  const double z2 = norm_sq(zeta);
  return std::pow(1.0 + z2 * z2 + tau * tau, -0.25);
}

double symbol_p(const PhasePoint& point, const MetricSpec& metric) {
  if (metric.dimension != point.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "metric dimension does not match phase point");
  }
  return point.tau + norm_sq(point.zeta);
}

bool in_polar_region(const PhasePoint& p) {
  return p.t != 0.0 && std::abs(p.t) >= kPolarCutoff * std::sqrt(norm_sq(p.z));
}

bool in_equatorial_region(const PhasePoint& p) {
  const double r = std::sqrt(norm_sq(p.z));
  return r > 0.0 && std::abs(p.t) <= kEquatorialCutoff * r;
}

BoundaryChartPoint to_chart(const PhasePoint& p, Chart chart) {
  require_finite(p);
  BoundaryChartPoint out;
  out.chart = chart;
  out.rho_base = rho_base(p.z, p.t);
  const std::size_t n = p.dim();

  if (chart == Chart::NorthPolar || chart == Chart::SouthPolar) {
    const bool north = chart == Chart::NorthPolar;
    if (!in_polar_region(p) || (north ? p.t <= 0.0 : p.t >= 0.0)) {
      throw Error(ErrorKind::ChartUndefined, "point outside polar chart");
    }
    out.rho_fib = rho_fib(p.zeta, p.tau);
    out.angular_base.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.angular_base[i] = p.z[i] / std::abs(p.t);
    out.angular_fib = p.zeta;
    out.angular_fib.push_back(p.tau);
    return out;
  }

  if (!in_equatorial_region(p)) throw Error(ErrorKind::ChartUndefined, "point outside equatorial chart");
  const double zeta2 = norm_sq(p.zeta);
  const auto frame = dominant_axis(p.z);
  const auto zf = to_frame(p.z, frame);
  const auto kf = to_frame(p.zeta, frame);
  if (kf[0] == 0.0) throw Error(ErrorKind::ChartUndefined, "zeta_1 = 0 has no equatorial fibre coordinate");

  out.rho_fib = 1.0 / std::abs(kf[0]);
  out.angular_base.push_back(p.t / zf[0]);
  for (std::size_t j = 1; j < n; ++j) out.angular_base.push_back(zf[j] / zf[0]);
  const double knorm = std::sqrt(zeta2);
  for (double k : kf) out.angular_fib.push_back(k / knorm);
  out.angular_fib.push_back(p.tau / zeta2);
  return out;
}

Chart select_chart(const PhasePoint& p, RadialSign sign) {
  require_finite(p);
  const bool polar = polar_valid_for(p, sign);
  const bool equatorial = equatorial_valid_for(p, sign);
  const Chart polar_chart = sign == RadialSign::Plus ? Chart::NorthPolar : Chart::SouthPolar;
  if (polar && equatorial) {
    return std::abs(p.t) >= kChartHandoff * std::sqrt(norm_sq(p.z)) ? polar_chart : Chart::Equatorial;
  }
  if (polar) return polar_chart;
  if (equatorial) return Chart::Equatorial;
  throw Error(ErrorKind::ChartUndefined, "no boundary chart covers this point for the requested radial set");
}

double radial_distance(const BoundaryChartPoint& c, RadialSign sign) {
  const double sgn = sign_value(sign);
  double d2 = c.rho_base * c.rho_base;

  if (c.chart == Chart::NorthPolar || c.chart == Chart::SouthPolar) {
    if ((c.chart == Chart::NorthPolar) != (sign == RadialSign::Plus)) {
      throw Error(ErrorKind::ChartUndefined, "polar hemisphere does not carry the requested radial set");
    }
    const std::size_t n = c.angular_base.size();
    if (c.angular_fib.size() != n + 1) throw Error(ErrorKind::DimensionMismatch, "polar chart point malformed");
    double zeta2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double zeta = c.angular_fib[i];
      // R_+: zeta = w/2 ; R_-: zeta = -w/2
      const double dev = zeta - sgn * 0.5 * c.angular_base[i];
      d2 += dev * dev;
      zeta2 += zeta * zeta;
    }
    const double tau_dev = c.angular_fib[n] + zeta2;
    d2 += tau_dev * tau_dev;
    return std::sqrt(d2);
  }

  // Equatorial: rho_b, s -/+ rho_f/2, zeta_hat -/+ z_hat, tau/|zeta|^2 + 1.
  const std::size_t n = c.angular_base.size();
  if (c.angular_fib.size() != n + 1) throw Error(ErrorKind::DimensionMismatch, "equatorial chart point malformed");
  const double zeta1_hat = c.angular_fib[0];
  if (sgn * zeta1_hat <= 0.0) {
    throw Error(ErrorKind::ChartUndefined, "equatorial fibre orientation does not carry the requested radial set");
  }
  const double s_dev = c.angular_base[0] - sgn * 0.5 * c.rho_fib;
  d2 += s_dev * s_dev;
  // z_hat in the frame: (1, v_2, ..., v_n) normalised.
  double vnorm2 = 1.0;
  for (std::size_t j = 1; j < n; ++j) vnorm2 += c.angular_base[j] * c.angular_base[j];
  const double vnorm = std::sqrt(vnorm2);
  for (std::size_t j = 0; j < n; ++j) {
    const double zhat = (j == 0 ? 1.0 : c.angular_base[j]) / vnorm;
    const double dev = c.angular_fib[j] - sgn * zhat;
    d2 += dev * dev;
  }
  const double sigma_dev = c.angular_fib[n] + 1.0;
  d2 += sigma_dev * sigma_dev;
  return std::sqrt(d2);
}

double radial_distance_in_chart(const PhasePoint& p, RadialSign sign, Chart chart) {
  return radial_distance(to_chart(p, chart), sign);
}

double radial_distance(const PhasePoint& p, RadialSign sign) {
  return radial_distance_in_chart(p, sign, select_chart(p, sign));
}

}  // namespace scatlab
