#pragma once

#include <cstddef>
#include <vector>

#include "scatlab/phase_space.hpp"

namespace scatlab {

struct TangentVector {
  std::vector<double> dz;
  double dt = 0.0;
  std::vector<double> dzeta;
  double dtau = 0.0;
};

/// H_p for p = tau + |zeta|^2 and the flat metric: (2 zeta, 1, 0, 0).
TangentVector hamilton_field(const PhasePoint& point, const MetricSpec& metric = {});

/// rho_fib^{m-1} rho_base^{l-1} with (m, l) = (2, 0).
double rescaled_field_scale(const PhasePoint& point);

/// rescaled_field_scale(point) * H_p, the field that extends smoothly to the
/// boundary of the compactified phase space.
TangentVector rescaled_field(const PhasePoint& point, const MetricSpec& metric = {});

enum class FlowDirection { Forward, Backward };

enum class EndpointClass { PlusRadial, MinusRadial, Undetermined };

const char* to_string(EndpointClass c);

struct TraceOptions {
  double rho_stop = 1e-6;
  std::size_t max_steps = 20000;
  double rtol = 1e-10;
  double atol = 1e-12;
  double char_tol = 1e-10;
  double class_threshold = 1e-4;
};

struct TrajectorySample {
  double s = 0.0;
  PhasePoint point;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  EndpointClass endpoint_class = EndpointClass::Undetermined;
  double max_char_violation = 0.0;
  /// Distance to the radial set named by endpoint_class, or the smaller of
  /// the two distances when Undetermined.
  double final_radial_distance = 0.0;
  double final_distance_plus = 0.0;
  double final_distance_minus = 0.0;
};

/// Distance to R_sign, or +infinity when no chart carries R_sign at the point.
double radial_distance_or_inf(const PhasePoint& point, RadialSign sign);

/// Integrates the rescaled Hamilton field from `seed` with an adaptive
/// Dormand-Prince 4(5) pair until rho_base drops below opts.rho_stop.
/// Throws NotCharacteristic if |p(seed)| > opts.char_tol and NoConvergence if
/// max_steps runs out while the endpoint is still Undetermined.
Trajectory trace_bicharacteristic(const PhasePoint& seed, FlowDirection direction,
                                  const TraceOptions& opts = {});

EndpointClass classify_endpoint(const Trajectory& trajectory, double threshold = 1e-4);

}  // namespace scatlab
