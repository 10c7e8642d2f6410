#include "scatlab/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/numeric/odeint.hpp>

#include "scatlab/errors.hpp"

namespace scatlab {
namespace {

using State = std::vector<double>;

State pack(const PhasePoint& p) {
  const std::size_t n = p.dim();
  State x(2 * n + 2);
  std::copy(p.z.begin(), p.z.end(), x.begin());
  x[n] = p.t;
  std::copy(p.zeta.begin(), p.zeta.end(), x.begin() + n + 1);
  x[2 * n + 1] = p.tau;
  return x;
}

PhasePoint unpack(const State& x, std::size_t n) {
  PhasePoint p;
  p.z.assign(x.begin(), x.begin() + n);
  p.t = x[n];
  p.zeta.assign(x.begin() + n + 1, x.begin() + 2 * n + 1);
  p.tau = x[2 * n + 1];
  return p;
}

}  // namespace

const char* to_string(EndpointClass c) {
  switch (c) {
    case EndpointClass::PlusRadial: return "PlusRadial";
    case EndpointClass::MinusRadial: return "MinusRadial";
    case EndpointClass::Undetermined: return "Undetermined";
  }
  return "Undetermined";
}

TangentVector hamilton_field(const PhasePoint& point, const MetricSpec& metric) {
  if (metric.dimension != point.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "metric dimension does not match phase point");
  }
  TangentVector v;
  v.dz.resize(point.dim());
  for (std::size_t i = 0; i < point.dim(); ++i) v.dz[i] = 2.0 * point.zeta[i];
  v.dt = 1.0;
  v.dzeta.assign(point.dim(), 0.0);
  v.dtau = 0.0;
  return v;
}

double rescaled_field_scale(const PhasePoint& point) {
  return rho_fib(point.zeta, point.tau) / rho_base(point.z, point.t);
}

TangentVector rescaled_field(const PhasePoint& point, const MetricSpec& metric) {
  TangentVector v = hamilton_field(point, metric);
  const double scale = rescaled_field_scale(point);
  for (double& c : v.dz) c *= scale;
  v.dt *= scale;
  return v;
}

double radial_distance_or_inf(const PhasePoint& point, RadialSign sign) {
  try {
    return radial_distance(point, sign);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ChartUndefined) throw;
    return std::numeric_limits<double>::infinity();
  }
}

namespace {

void fill_endpoint(Trajectory& traj, double threshold) {
  const PhasePoint& last = traj.samples.back().point;
  traj.final_distance_plus = radial_distance_or_inf(last, RadialSign::Plus);
  traj.final_distance_minus = radial_distance_or_inf(last, RadialSign::Minus);
  traj.endpoint_class = classify_endpoint(traj, threshold);
  switch (traj.endpoint_class) {
    case EndpointClass::PlusRadial: traj.final_radial_distance = traj.final_distance_plus; break;
    case EndpointClass::MinusRadial: traj.final_radial_distance = traj.final_distance_minus; break;
    case EndpointClass::Undetermined:
      traj.final_radial_distance = std::min(traj.final_distance_plus, traj.final_distance_minus);
      break;
  }
}

}  // namespace

EndpointClass classify_endpoint(const Trajectory& trajectory, double threshold) {
  if (trajectory.samples.empty()) return EndpointClass::Undetermined;
  const PhasePoint& last = trajectory.samples.back().point;
  const double plus = radial_distance_or_inf(last, RadialSign::Plus);
  const double minus = radial_distance_or_inf(last, RadialSign::Minus);
  if (plus < threshold && plus <= minus) return EndpointClass::PlusRadial;
  if (minus < threshold) return EndpointClass::MinusRadial;
  return EndpointClass::Undetermined;
}

Trajectory trace_bicharacteristic(const PhasePoint& seed, FlowDirection direction, const TraceOptions& opts) {
  if (!seed.valid()) throw Error(ErrorKind::DimensionMismatch, "seed must have n >= 1 finite components");
  const std::size_t n = seed.dim();
  const MetricSpec metric{MetricSpec::Kind::Flat, n};
  const double p0 = symbol_p(seed, metric);
  if (std::abs(p0) > opts.char_tol) {
    throw Error(ErrorKind::NotCharacteristic, "seed is not on the characteristic set (|p| = " + std::to_string(std::abs(p0)) + ")");
  }

  const double orientation = direction == FlowDirection::Forward ? 1.0 : -1.0;
  auto system = [n, orientation](const State& x, State& dxds, double /*s*/) {
    double zeta2 = 0.0;
    double z2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      zeta2 += x[n + 1 + i] * x[n + 1 + i];
      z2 += x[i] * x[i];
    }
    const double tau = x[2 * n + 1];
    const double t = x[n];
    const double scale = orientation * std::pow(1.0 + zeta2 * zeta2 + tau * tau, -0.25) * std::sqrt(1.0 + z2 + t * t);
    for (std::size_t i = 0; i < n; ++i) dxds[i] = scale * 2.0 * x[n + 1 + i];
    dxds[n] = scale;
    for (std::size_t i = n + 1; i < 2 * n + 2; ++i) dxds[i] = 0.0;
  };

  namespace odeint = boost::numeric::odeint;
  auto stepper = odeint::make_controlled(opts.atol, opts.rtol, odeint::runge_kutta_dopri5<State>());

  Trajectory traj;
  State x = pack(seed);
  double s = 0.0;
  double ds = 1e-3;
  traj.samples.push_back({s, seed});
  traj.max_char_violation = std::abs(p0);

  std::size_t accepted = 0;
  std::size_t attempts = 0;
  const std::size_t max_attempts = 20 * opts.max_steps;
  while (accepted < opts.max_steps && attempts < max_attempts) {
    const PhasePoint& current = traj.samples.back().point;
    if (rho_base(current.z, current.t) < opts.rho_stop) break;
    ++attempts;
    if (stepper.try_step(system, x, s, ds) != odeint::success) continue;
    ++accepted;
    PhasePoint p = unpack(x, n);
    traj.max_char_violation = std::max(traj.max_char_violation, std::abs(symbol_p(p, metric)));
    traj.samples.push_back({s, std::move(p)});
  }

  fill_endpoint(traj, opts.class_threshold);
  const PhasePoint& last = traj.samples.back().point;
  const bool stopped = rho_base(last.z, last.t) < opts.rho_stop;
  if (!stopped && traj.endpoint_class == EndpointClass::Undetermined) {
    throw Error(ErrorKind::NoConvergence, "step budget exhausted before reaching spacetime infinity");
  }
  return traj;
}

}  // namespace scatlab
