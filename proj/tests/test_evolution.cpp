#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "scatlab/errors.hpp"
#include "scatlab/evolution.hpp"
#include "scatlab/random_data.hpp"

using namespace scatlab;

namespace {

constexpr cplx I{0.0, 1.0};

// Small box that still holds the free Gaussian on |t| <= 5.
Grid small_grid(std::size_t M = 400) { return Grid{1, 80.0, 512, -5.0, 5.0, M}; }

// (2 pi (1 + 2 i t))^{-1/2} exp(-z^2 / (2 (1 + 2 i t))), the free solution
// with data exp(-zeta^2/2).
cplx gaussian_exact(double z, double t) {
  const cplx a(1.0, 2.0 * t);
  return std::exp(-z * z / (2.0 * a)) / std::sqrt(2.0 * std::numbers::pi * a);
}

std::vector<cplx> gaussian_slice(const Grid& g, double t) {
  std::vector<cplx> out(g.N);
  for (std::size_t j = 0; j < g.N; ++j) out[j] = gaussian_exact(g.coord(j), t);
  return out;
}

double sup_diff(std::span<const cplx> a, std::span<const cplx> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double l2(std::span<const cplx> a) {
  double acc = 0.0;
  for (const cplx& c : a) acc += std::norm(c);
  return std::sqrt(acc);
}

// C^infinity step rising from 0 at t = a to 1 at t = b.
double smooth_ramp(double t, double a, double b) {
  auto h = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  const double x = (t - a) / (b - a);
  return h(x) / (h(x) + h(1.0 - x));
}

double smooth_ramp_dt(double t, double a, double b) {
  const double e = 1e-6;
  return (smooth_ramp(t + e, a, b) - smooth_ramp(t - e, a, b)) / (2.0 * e);
}

PotentialSpec bump(double amplitude) { return PotentialSpec::compact_bump(amplitude, 3.0, 2.0); }

}  // namespace

TEST_CASE("single Fourier mode picks up the free phase") {
  const Grid g = small_grid();
  const double dxi = g.dxi();
  const int m = 7;
  std::vector<cplx> wave(g.N);
  for (std::size_t j = 0; j < g.N; ++j) wave[j] = std::polar(1.0, m * dxi * g.coord(j));
  const double dt = 0.37;
  const std::vector<cplx> out = step_evolve(wave, g, 0.0, dt, PotentialSpec::zero());
  const cplx phase = std::polar(1.0, -dt * (m * dxi) * (m * dxi));
  for (std::size_t j = 0; j < g.N; ++j) CHECK(std::abs(out[j] - phase * wave[j]) < 1e-12);
}

TEST_CASE("free evolution matches the closed-form Gaussian") {
  for (std::size_t M : {10, 100, 400}) {
    const Grid g = small_grid(M);
    const SpacetimeField u = evolve(gaussian_slice(g, g.t0), g, PotentialSpec::zero());
    double err = 0.0;
    for (std::size_t k = 0; k <= g.M; ++k) err = std::max(err, sup_diff(u.slice(k), gaussian_slice(g, g.time(k))));
    CHECK(err < 1e-10);
  }
}

TEST_CASE("split step preserves the L2 norm for a real potential") {
  const Grid g = small_grid();
  const PotentialSpec V = bump(5.0);
  Propagator prop(g, V);
  std::vector<cplx> u = gaussian_slice(g, -1.0);
  const double n0 = l2(u);
  double worst = 0.0;
  for (std::size_t k = 0; k < 40; ++k) {
    const double before = l2(u);
    prop.step(u, -2.0 + 0.1 * static_cast<double>(k), 0.1);
    worst = std::max(worst, std::abs(l2(u) / before - 1.0));
  }
  CHECK(worst < 1e-12);
  CHECK(std::abs(l2(u) / n0 - 1.0) < 1e-10);
}

TEST_CASE("Strang splitting is second order with a potential") {
  const PotentialSpec V = bump(2.0);
  std::vector<std::vector<cplx>> finals;
  // dt <= 0.05 is inside the asymptotic regime for this bump.
  for (std::size_t M : {200, 400, 800, 1600}) {
    const Grid g = small_grid(M);
    const SpacetimeField u = evolve(gaussian_slice(g, g.t0), g, V);
    const auto last = u.slice(g.M);
    finals.emplace_back(last.begin(), last.end());
  }
  const double e1 = sup_diff(finals[0], finals[1]);
  const double e2 = sup_diff(finals[1], finals[2]);
  const double e3 = sup_diff(finals[2], finals[3]);
  CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(std::log2(e2 / e3) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("negative steps undo positive ones") {
  const Grid g = small_grid();
  const PotentialSpec V = bump(1.0);
  Propagator prop(g, V);
  const std::vector<cplx> u0 = gaussian_slice(g, 0.0);
  std::vector<cplx> u = u0;
  prop.step(u, -1.0, 0.05);
  prop.step(u, -0.95, -0.05);
  CHECK(sup_diff(u, u0) < 1e-13);
}

TEST_CASE("apply_P on exact free solutions") {
  const Grid g{1, 40.0, 256, -2.0, 2.0, 160};
  const double zeta0 = 3.0 * g.dxi();
  SpacetimeField wave(g);
  SpacetimeField twave(g);
  for (std::size_t k = 0; k <= g.M; ++k) {
    const double t = g.time(k);
    for (std::size_t j = 0; j < g.N; ++j) {
      const cplx w = std::polar(1.0, zeta0 * g.coord(j) - t * zeta0 * zeta0);
      wave.slice(k)[j] = w;
      twave.slice(k)[j] = t * w;
    }
  }
  const SpacetimeField Pw = apply_P(wave, PotentialSpec::zero());
  CHECK(Pw.max_abs() < 1e-9);
  const SpacetimeField Ptw = apply_P(twave, PotentialSpec::zero());
  double err = 0.0;
  for (std::size_t i = 0; i < Ptw.values.size(); ++i) err = std::max(err, std::abs(Ptw.values[i] + I * wave.values[i]));
  CHECK(err < 1e-9);
}

TEST_CASE("apply_P of evolved fields converges at second order") {
  const PotentialSpec V = bump(1.0);
  std::vector<double> rel;
  for (std::size_t M : {400, 800, 1600}) {
    const Grid g = small_grid(M);
    const SpacetimeField u = evolve(gaussian_slice(g, g.t0), g, V);
    rel.push_back(apply_P(u, V).norm() / u.norm());
  }
  CHECK(rel[2] < rel[1]);
  CHECK(std::log2(rel[0] / rel[1]) == doctest::Approx(2.0).epsilon(0.1));
  CHECK(std::log2(rel[1] / rel[2]) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("retarded solution inverts P on a ramped solution") {
  // v = P(chi w) = -i chi' w when P w = 0; then R_+ v = chi w.
  const PotentialSpec V = bump(1.0);
  std::vector<double> errs;
  for (std::size_t M : {200, 400}) {
    const Grid g = small_grid(M);
    const SpacetimeField w = evolve(gaussian_slice(g, g.t0), g, V);
    SpacetimeField v(g);
    SpacetimeField target(g);
    for (std::size_t k = 0; k <= g.M; ++k) {
      const double t = g.time(k);
      const double chi = smooth_ramp(t, -3.0, -1.0);
      const double dchi = smooth_ramp_dt(t, -3.0, -1.0);
      for (std::size_t j = 0; j < g.N; ++j) {
        v.slice(k)[j] = -I * dchi * w.slice(k)[j];
        target.slice(k)[j] = chi * w.slice(k)[j];
      }
    }
    const SpacetimeField u = solve_retarded(v, V);
    double err = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) err = std::max(err, std::abs(u.values[i] - target.values[i]));
    errs.push_back(err / target.max_abs());
  }
  CHECK(errs[0] < 1e-3);
  CHECK(std::log2(errs[0] / errs[1]) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("retarded and advanced solutions: residual, support and linearity") {
  const Grid g{1, 120.0, 512, -12.0, 12.0, 960};
  const PotentialSpec V = bump(0.5);
  const SpacetimeField v1 = random_source(g, 17, 0);
  const SpacetimeField v2 = random_source(g, 17, 1);

  // First and last slice where v is nonzero.
  std::size_t first = g.M;
  std::size_t last = 0;
  for (std::size_t k = 0; k <= g.M; ++k) {
    if (v1.slice_norm(k) > kSupportTolerance * v1.max_abs()) {
      first = std::min(first, k);
      last = std::max(last, k);
    }
  }
  REQUIRE(first > 2);
  REQUIRE(last + 2 < g.M);

  const SpacetimeField up = solve_retarded(v1, V);
  const SpacetimeField um = solve_advanced(v1, V);
  CHECK(apply_P(up, V).values.size() == up.values.size());
  auto residual = [&](const SpacetimeField& u) {
    SpacetimeField r = apply_P(u, V);
    for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] -= v1.values[i];
    return r.norm() / v1.norm();
  };
  CHECK(residual(up) < 1e-3);
  CHECK(residual(um) < 1e-3);

  double before = 0.0;
  for (std::size_t k = 0; k + 2 < first; ++k) before = std::max(before, up.slice_norm(k));
  CHECK(before <= 1e-8 * up.max_abs());
  double after = 0.0;
  for (std::size_t k = last + 3; k <= g.M; ++k) after = std::max(after, um.slice_norm(k));
  CHECK(after <= 1e-8 * um.max_abs());

  const cplx a{0.3, -1.2};
  SpacetimeField combo(g);
  for (std::size_t i = 0; i < combo.values.size(); ++i) combo.values[i] = a * v1.values[i] + v2.values[i];
  const SpacetimeField lhs = solve_retarded(combo, V);
  const SpacetimeField u2 = solve_retarded(v2, V);
  double err = 0.0;
  for (std::size_t i = 0; i < lhs.values.size(); ++i) {
    err = std::max(err, std::abs(lhs.values[i] - (a * up.values[i] + u2.values[i])));
  }
  CHECK(err < 1e-12 * lhs.max_abs());
}

TEST_CASE("zero source gives zero solution") {
  const Grid g = small_grid(40);
  const SpacetimeField v(g);
  CHECK(solve_retarded(v, bump(1.0)).max_abs() == 0.0);
  CHECK(solve_advanced(v, bump(1.0)).max_abs() == 0.0);
}

TEST_CASE("sources touching the window edge are rejected") {
  const Grid g = small_grid(40);
  SpacetimeField v(g);
  v.slice(0)[3] = 1.0;
  try {
    solve_retarded(v, PotentialSpec::zero());
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SupportViolation);
  }
  SpacetimeField w(g);
  w.slice(g.M)[3] = 1.0;
  CHECK_THROWS_AS(solve_advanced(w, PotentialSpec::zero()), Error);
}

TEST_CASE("compact bump vanishes outside its ball") {
  PotentialSpec V = PotentialSpec::compact_bump(2.0, 3.0, 2.0);
  V.center_z = {1.0};
  V.center_t = 0.5;
  const std::vector<double> inside{1.5};
  const std::vector<double> edge{4.0};
  CHECK(std::abs(V.value(inside, 0.5)) > 0.0);
  CHECK(V.value(edge, 0.5) == cplx{});
  CHECK(V.value(inside, 2.5) == cplx{});
  CHECK(V.value(std::vector<double>{1.0}, 0.5) == cplx{2.0, 0.0});
  CHECK(V.t_support_min() == doctest::Approx(-1.5));
  CHECK(V.t_support_max() == doctest::Approx(2.5));
}
