#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "scatlab/errors.hpp"
#include "scatlab/phase_space.hpp"

using namespace scatlab;

namespace {

PhasePoint point1(double z, double t, double zeta, double tau) { return PhasePoint{{z}, t, {zeta}, tau}; }

}  // namespace

TEST_CASE("fiber weight values") {
  CHECK(fiber_weight(std::vector<double>{0.0}, 0.0) == 0.0);
  CHECK(fiber_weight(std::vector<double>{1.0}, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fiber_weight(std::vector<double>{0.0}, 4.0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("fiber weight is parabolically homogeneous of degree one") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::vector<double> zeta{u(rng), u(rng)};
    const double tau = u(rng);
    const double c = std::exp(u(rng));
    const std::vector<double> scaled{c * zeta[0], c * zeta[1]};
    const double lhs = fiber_weight(scaled, c * c * tau);
    const double rhs = c * fiber_weight(zeta, tau);
    CHECK(std::abs(lhs - rhs) <= 1e-14 * std::max(1.0, rhs));
  }
}

TEST_CASE("base defining function") {
  CHECK(rho_base(std::vector<double>{0.0}, 0.0) == 1.0);
  CHECK(rho_base(std::vector<double>{1.0}, 0.0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  double prev = 1.0;
  for (double t = 1.0; t < 1e12; t *= 10.0) {
    const double r = rho_base(std::vector<double>{0.0}, t);
    CHECK(r < prev);
    CHECK(r > 0.0);
    prev = r;
  }
  CHECK(prev < 2e-11);
}

TEST_CASE("fibre defining function") {
  CHECK(rho_fib(std::vector<double>{0.0}, 0.0) == 1.0);
  CHECK(rho_fib(std::vector<double>{0.0}, 4.0) == doctest::Approx(std::pow(17.0, -0.25)));
  // At (c zeta, c^2 tau) with c = 1e3 only the R^4 term survives.
  const std::vector<double> zeta{0.7};
  const double tau = -0.3;
  const double c = 1e3;
  const double scaled = rho_fib(std::vector<double>{c * zeta[0]}, c * c * tau);
  CHECK(scaled * c * fiber_weight(zeta, tau) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("defining functions decrease along rays") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<double> z{u(rng)};
    const double t = u(rng);
    const std::vector<double> zeta{u(rng)};
    const double tau = u(rng);
    double pb = 2.0;
    double pf = 2.0;
    for (double a = 1.0; a < 1e4; a *= 2.0) {
      const double rb = rho_base(std::vector<double>{a * z[0]}, a * t);
      const double rf = rho_fib(std::vector<double>{a * zeta[0]}, a * a * tau);
      CHECK(rb > 0.0);
      CHECK(rb <= 1.0);
      CHECK(rf > 0.0);
      CHECK(rf <= 1.0);
      CHECK(rb < pb);
      CHECK(rf < pf);
      pb = rb;
      pf = rf;
    }
  }
}

TEST_CASE("principal symbol") {
  CHECK(symbol_p(point1(0, 0, 1, -1)) == 0.0);
  CHECK(symbol_p(point1(0, 0, 0, 1)) == 1.0);
  CHECK(symbol_p(point1(0, 0, 2, -1)) == 3.0);
  CHECK_THROWS_AS(symbol_p(PhasePoint{{0.0, 0.0}, 0.0, {1.0, 0.0}, -1.0}, MetricSpec{MetricSpec::Kind::Flat, 1}),
                  Error);
}

TEST_CASE("radial distance at and near the outgoing radial set") {
  const double T = 1e12;
  // w = z/t = 1, zeta = w/2, tau = -|zeta|^2
  CHECK(radial_distance(point1(T, T, 0.5, -0.25), RadialSign::Plus) < 1e-11);
  CHECK(radial_distance(point1(T, T, 0.5, 0.0), RadialSign::Plus) == doctest::Approx(0.25).epsilon(1e-9));
  // Incoming set: zeta = -w/2 with w = z/|t| at t < 0.
  CHECK(radial_distance(point1(T, -T, -0.5, -0.25), RadialSign::Minus) < 1e-11);
}

TEST_CASE("radial distances never both vanish") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double t = std::pow(10.0, 3.0 + 6.0 * std::abs(u(rng)) / 2.0) * (u(rng) > 0 ? 1.0 : -1.0);
    const double zeta = u(rng);
    const PhasePoint p = point1(2.0 * zeta * t + u(rng), t, zeta, -zeta * zeta);
    double dp = 1e300;
    double dm = 1e300;
    try {
      dp = radial_distance(p, RadialSign::Plus);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ChartUndefined);
    }
    try {
      dm = radial_distance(p, RadialSign::Minus);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ChartUndefined);
    }
    CHECK(std::max(dp, dm) > 0.1);
  }
}

TEST_CASE("polar and equatorial charts agree on the radial set inside the overlap") {
  for (double T : {1e9, 1e11}) {
    // |t|/|z| = 1/2 sits in the overlap of both charts.
    const PhasePoint on_plus = point1(2.0 * T, T, 1.0, -1.0);
    const PhasePoint on_minus = point1(2.0 * T, -T, -1.0, -1.0);
    REQUIRE(in_polar_region(on_plus));
    REQUIRE(in_equatorial_region(on_plus));
    const double a = radial_distance_in_chart(on_plus, RadialSign::Plus, Chart::NorthPolar);
    const double b = radial_distance_in_chart(on_plus, RadialSign::Plus, Chart::Equatorial);
    CHECK(a < 1e-8);
    CHECK(std::abs(a - b) < 1e-8);
    const double c = radial_distance_in_chart(on_minus, RadialSign::Minus, Chart::SouthPolar);
    const double d = radial_distance_in_chart(on_minus, RadialSign::Minus, Chart::Equatorial);
    CHECK(c < 1e-8);
    CHECK(std::abs(c - d) < 1e-8);
  }
}

TEST_CASE("chart domains") {
  // t = 0 with z != 0 is equatorial only.
  const PhasePoint eq = point1(5.0, 0.0, 1.0, -1.0);
  CHECK(select_chart(eq, RadialSign::Plus) == Chart::Equatorial);
  CHECK_THROWS_AS(to_chart(eq, Chart::NorthPolar), Error);
  // z = 0 is polar only.
  const PhasePoint pol = point1(0.0, 5.0, 1.0, -1.0);
  CHECK(select_chart(pol, RadialSign::Plus) == Chart::NorthPolar);
  CHECK_THROWS_AS(to_chart(pol, Chart::Equatorial), Error);
  // The origin lies in no chart.
  try {
    select_chart(point1(0.0, 0.0, 1.0, -1.0), RadialSign::Plus);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ChartUndefined);
  }
  // Hand-off at |t| = |z|/2 inside the overlap.
  CHECK(select_chart(point1(10.0, 6.0, 1.0, -1.0), RadialSign::Plus) == Chart::NorthPolar);
  CHECK(select_chart(point1(10.0, 4.0, 1.0, -1.0), RadialSign::Plus) == Chart::Equatorial);
}

TEST_CASE("two-dimensional equatorial frame") {
  const double T = 1e10;
  // z along -y, zeta along -y: outgoing with z_hat . zeta_hat = 1.
  const PhasePoint p{{0.0, -2.0 * T}, T, {0.0, -1.0}, -1.0};
  CHECK(radial_distance_in_chart(p, RadialSign::Plus, Chart::Equatorial) < 1e-8);
  CHECK(radial_distance_in_chart(p, RadialSign::Plus, Chart::NorthPolar) < 1e-8);
}
