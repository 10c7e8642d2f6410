#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "scatlab/errors.hpp"
#include "scatlab/flow.hpp"

using namespace scatlab;

namespace {

PhasePoint seed1(double z, double t, double zeta) { return PhasePoint{{z}, t, {zeta}, -zeta * zeta}; }

// Free bicharacteristic z(s) = z0 + 2 zeta0 s, t(s) = t0 + s in the
// unrescaled parameter.
double free_ratio(const PhasePoint& seed, double s) { return (seed.z[0] + 2.0 * seed.zeta[0] * s) / (seed.t + s); }

}  // namespace

TEST_CASE("Hamilton field of the flat symbol") {
  const TangentVector v = hamilton_field(seed1(0.0, 0.0, 1.0));
  CHECK(v.dz[0] == 2.0);
  CHECK(v.dt == 1.0);
  CHECK(v.dzeta[0] == 0.0);
  CHECK(v.dtau == 0.0);
  const TangentVector w = hamilton_field(PhasePoint{{3.0}, 1.0, {0.0}, 0.0});
  CHECK(w.dz[0] == 0.0);
  CHECK(w.dt == 1.0);
}

TEST_CASE("rescaled field scale") {
  const PhasePoint p = seed1(0.0, 0.0, 1.0);
  CHECK(rescaled_field_scale(p) == doctest::Approx(std::pow(3.0, -0.25)).epsilon(1e-15));
  const TangentVector v = rescaled_field(p);
  CHECK(v.dz[0] == doctest::Approx(2.0 * std::pow(3.0, -0.25)));
  CHECK(v.dt == doctest::Approx(std::pow(3.0, -0.25)));
  // Scale vanishes as the fibre weight grows at fixed (z, t).
  double prev = 1.0;
  for (double zeta = 1.0; zeta < 1e6; zeta *= 10.0) {
    const double s = rescaled_field_scale(seed1(0.0, 0.0, zeta));
    CHECK(s < prev);
    prev = s;
  }
  CHECK(prev < 1e-5);
  // Along z = z0 + 2 zeta0 s, t = t0 + s the scale grows like |(z, t)|.
  const PhasePoint seed = seed1(0.5, 0.0, 0.8);
  const double r = rho_fib(seed.zeta, seed.tau);
  for (double s : {1e2, 1e4, 1e6}) {
    const PhasePoint q{{seed.z[0] + 2.0 * seed.zeta[0] * s}, s, seed.zeta, seed.tau};
    const double mag = std::sqrt(1.0 + q.z[0] * q.z[0] + s * s);
    CHECK(rescaled_field_scale(q) == doctest::Approx(r * mag).epsilon(1e-12));
  }
}

TEST_CASE("unit seed reaches the radial sets") {
  const PhasePoint seed = seed1(0.0, 0.0, 1.0);
  const Trajectory fwd = trace_bicharacteristic(seed, FlowDirection::Forward);
  CHECK(fwd.endpoint_class == EndpointClass::PlusRadial);
  const PhasePoint& end = fwd.samples.back().point;
  CHECK(end.z[0] / end.t == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(end.tau == -1.0);
  CHECK(fwd.final_radial_distance < 1e-4);

  const Trajectory bwd = trace_bicharacteristic(seed, FlowDirection::Backward);
  CHECK(bwd.endpoint_class == EndpointClass::MinusRadial);
  const PhasePoint& start = bwd.samples.back().point;
  CHECK(start.z[0] / std::abs(start.t) == doctest::Approx(-2.0).epsilon(1e-5));
}

TEST_CASE("traced trajectories follow the free flow") {
  const PhasePoint seed = seed1(1.5, -0.5, -0.7);
  const Trajectory tr = trace_bicharacteristic(seed, FlowDirection::Forward);
  for (const auto& sample : tr.samples) {
    const double s = sample.point.t - seed.t;
    if (std::abs(s) < 1e-3) continue;
    const double expect = free_ratio(seed, s);
    CHECK(sample.point.z[0] / sample.point.t == doctest::Approx(expect).epsilon(1e-7));
  }
}

TEST_CASE("trajectory invariants") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    double zeta = u(rng);
    zeta = (zeta >= 0.0 ? 1.0 : -1.0) * (0.3 + 1.7 * std::abs(zeta));
    const PhasePoint seed = seed1(5.0 * u(rng), 5.0 * u(rng), zeta);
    const Trajectory tr = trace_bicharacteristic(seed, FlowDirection::Forward);
    CHECK(tr.endpoint_class == EndpointClass::PlusRadial);
    CHECK(tr.max_char_violation <= 10.0 * TraceOptions{}.char_tol);
    double prev_s = -1.0;
    std::vector<double> dist;
    for (const auto& sample : tr.samples) {
      CHECK(sample.s > prev_s);
      prev_s = sample.s;
      CHECK(sample.point.zeta[0] == seed.zeta[0]);
      CHECK(sample.point.tau == seed.tau);
    }
    // Distances in different charts are not comparable, so measure every
    // sample in the chart used at the end.
    const Chart chart = select_chart(tr.samples.back().point, RadialSign::Plus);
    for (const auto& sample : tr.samples) {
      double d = 1e300;
      try {
        d = radial_distance_in_chart(sample.point, RadialSign::Plus, chart);
      } catch (const Error&) {
      }
      dist.push_back(d);
    }
    // Monotone approach after the last entry into the 0.1 neighbourhood.
    std::size_t entry = dist.size();
    while (entry > 0 && dist[entry - 1] < 0.1) --entry;
    CHECK(entry < dist.size());
    for (std::size_t i = entry + 1; i < dist.size(); ++i) CHECK(dist[i] <= dist[i - 1] * (1.0 + 1e-9));
    // Limit direction: z_hat . zeta_hat -> +1.
    const PhasePoint& end = tr.samples.back().point;
    CHECK(end.z[0] * end.zeta[0] > 0.0);
  }
}

TEST_CASE("classification is insensitive to a tenfold change of thresholds") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const PhasePoint seed = seed1(3.0 * u(rng), 3.0 * u(rng), 0.3 + 1.7 * std::abs(u(rng)));
    for (FlowDirection dir : {FlowDirection::Forward, FlowDirection::Backward}) {
      TraceOptions base;
      TraceOptions tight = base;
      tight.rho_stop = base.rho_stop / 10.0;
      tight.class_threshold = base.class_threshold / 10.0;
      TraceOptions loose = base;
      loose.rho_stop = base.rho_stop * 10.0;
      loose.class_threshold = base.class_threshold * 10.0;
      const auto a = trace_bicharacteristic(seed, dir, base).endpoint_class;
      CHECK(a != EndpointClass::Undetermined);
      CHECK(trace_bicharacteristic(seed, dir, tight).endpoint_class == a);
      CHECK(trace_bicharacteristic(seed, dir, loose).endpoint_class == a);
    }
  }
}

TEST_CASE("two-dimensional seeds classify by direction") {
  const PhasePoint seed{{1.0, -2.0}, 0.5, {0.6, 0.8}, -1.0};
  CHECK(trace_bicharacteristic(seed, FlowDirection::Forward).endpoint_class == EndpointClass::PlusRadial);
  CHECK(trace_bicharacteristic(seed, FlowDirection::Backward).endpoint_class == EndpointClass::MinusRadial);
}

TEST_CASE("endpoint classification rule") {
  const double T = 1e12;
  Trajectory tr;
  tr.samples.push_back({0.0, PhasePoint{{T}, T, {0.5}, -0.25}});
  CHECK(classify_endpoint(tr) == EndpointClass::PlusRadial);
  tr.samples.back().point = PhasePoint{{T}, -T, {-0.5}, -0.25};
  CHECK(classify_endpoint(tr) == EndpointClass::MinusRadial);
  // Off by 0.25 in tau: outside the threshold for both sets.
  tr.samples.back().point = PhasePoint{{T}, T, {0.5}, 0.0};
  CHECK(classify_endpoint(tr) == EndpointClass::Undetermined);
  CHECK(classify_endpoint(Trajectory{}) == EndpointClass::Undetermined);
}

TEST_CASE("non-characteristic seeds are rejected") {
  try {
    trace_bicharacteristic(PhasePoint{{0.0}, 0.0, {1.0}, 0.0}, FlowDirection::Forward);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotCharacteristic);
  }
}

TEST_CASE("zero-frequency seed is recorded without a class assertion") {
  // The corner of the characteristic set at zeta = 0: either outcome is
  // acceptable, but the call must not hang or crash.
  try {
    const Trajectory tr = trace_bicharacteristic(PhasePoint{{0.0}, 0.0, {0.0}, 0.0}, FlowDirection::Forward);
    CHECK(!tr.samples.empty());
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoConvergence);
  }
}
