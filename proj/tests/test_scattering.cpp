#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "scatlab/errors.hpp"
#include "scatlab/evolution.hpp"
#include "scatlab/random_data.hpp"
#include "scatlab/scattering.hpp"

using namespace scatlab;

namespace {

// Box wide enough for the free Gaussian on |t| <= 5 with a data grid
// covering |zeta| <= 10.
Grid gaussian_grid() { return Grid{1, 80.0, 512, -5.0, 5.0, 100}; }

cplx gaussian_exact(double z, double t) {
  const cplx a(1.0, 2.0 * t);
  return std::exp(-z * z / (2.0 * a)) / std::sqrt(2.0 * std::numbers::pi * a);
}

double sup_error(const DataFunction& a, const DataFunction& b) {
  double m = 0.0;
  for (std::size_t q = 0; q < a.values.size(); ++q) m = std::max(m, std::abs(a.values[q] - b.values[q]));
  return m;
}

double l2_distance(const DataFunction& a, const DataFunction& b) {
  DataFunction d = a;
  for (std::size_t q = 0; q < d.values.size(); ++q) d.values[q] -= b.values[q];
  return d.norm();
}

}  // namespace

TEST_CASE("a single data point gives a plane wave") {
  const Grid g = gaussian_grid();
  const DataGrid dg = DataGrid::for_grid(g, 256);
  DataFunction f(dg);
  const std::size_t k0 = 140;
  f.values[k0] = 1.0;
  const double zeta0 = dg.zeta(k0);
  const SpacetimeField u = free_poisson(f, g);
  // (2 pi)^{-1} dzeta e^{i (z zeta0 - t zeta0^2)} with dzeta = pi / L.
  const double amp = 1.0 / (2.0 * g.L);
  double err = 0.0;
  for (std::size_t k = 0; k <= g.M; k += 10) {
    const double t = g.time(k);
    for (std::size_t j = 0; j < g.N; ++j) {
      const cplx expect = amp * std::polar(1.0, g.coord(j) * zeta0 - t * zeta0 * zeta0);
      err = std::max(err, std::abs(u.slice(k)[j] - expect));
    }
  }
  CHECK(err < 1e-15);
}

TEST_CASE("free Poisson operator on a Gaussian") {
  const Grid g = gaussian_grid();
  const DataGrid dg = DataGrid::for_grid(g, 512);
  const SpacetimeField u = free_poisson(gaussian_data(dg, 1.0), g);
  double err = 0.0;
  for (std::size_t k = 0; k <= g.M; ++k) {
    for (std::size_t j = 0; j < g.N; ++j) {
      err = std::max(err, std::abs(u.slice(k)[j] - gaussian_exact(g.coord(j), g.time(k))));
    }
  }
  CHECK(err < 1e-12);
  const double n0 = u.slice_norm(0);
  for (std::size_t k = 0; k <= g.M; ++k) CHECK(std::abs(u.slice_norm(k) / n0 - 1.0) < 1e-13);
}

TEST_CASE("P annihilates the free Poisson field up to the time stencil error") {
  std::vector<double> rel;
  for (std::size_t M : {400, 800, 1600}) {
    const Grid g{1, 80.0, 512, -5.0, 5.0, M};
    const SpacetimeField u = free_poisson(gaussian_data(DataGrid::for_grid(g, 512), 1.0), g);
    rel.push_back(apply_P(u, PotentialSpec::zero()).norm() / u.norm());
  }
  CHECK(rel[2] < 1e-5);
  CHECK(std::log2(rel[0] / rel[1]) == doctest::Approx(4.0).epsilon(0.1));
  CHECK(std::log2(rel[1] / rel[2]) == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("extraction recovers free data") {
  const Grid g;
  const DataGrid dg = DataGrid::for_grid(g, 1536);
  const DataFunction f = gaussian_data(dg, 0.6);
  const SpacetimeField u = free_poisson(f, g);
  for (RadialSign sign : {RadialSign::Plus, RadialSign::Minus}) {
    const ExtractionReport rep = extract_data(u, sign, dg);
    CHECK(sup_error(rep.limit, f) / f.max_abs() < 1e-3);
    CHECK(rep.fitted_rate > 0.0);
    CHECK(!rep.times_used.empty());
    for (double t : rep.times_used) CHECK(t * sign_value(sign) > 0.0);
    // Deviation shrinks over the fitted tail.
    CHECK(rep.residual_curve.back().deviation < rep.residual_curve.front().deviation);
  }
}

TEST_CASE("extraction edge cases") {
  const Grid g;
  const DataGrid dg = DataGrid::for_grid(g, 1536);
  const SpacetimeField zero(g);
  CHECK(extract_data(zero, RadialSign::Plus, dg).limit.max_abs() == 0.0);

  const std::vector<double> wrong_sign{-20.0, 25.0};
  try {
    extract_data(zero, RadialSign::Plus, wrong_sign, dg);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConfigInvalid);
  }

  // zeta_max = 10 on this grid, so 2 t zeta_max exceeds L = 80 at t = 5.
  const Grid small = gaussian_grid();
  const DataGrid wide = DataGrid::for_grid(small, 512);
  const std::vector<double> late{5.0};
  try {
    extract_data(SpacetimeField(small), RadialSign::Plus, late, wide);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::WindowTooSmall);
  }
}

TEST_CASE("retarded solutions carry no incoming data") {
  const Grid g;
  const DataGrid dg = DataGrid::for_grid(g, 1536);
  const PotentialSpec V = PotentialSpec::compact_bump(0.5);
  const SpacetimeField u = solve_retarded(random_source(g, 4, 0), V);
  const double out = extract_data(u, RadialSign::Plus, dg).limit.max_abs();
  const double in = extract_data(u, RadialSign::Minus, dg).limit.max_abs();
  CHECK(out > 1e-2);
  CHECK(in < 1e-12 * out);
}

TEST_CASE("perturbed Poisson operators") {
  const Grid g;
  const DataGrid dg = DataGrid::for_grid(g, 1536);
  const DataFunction f = scatlab::random_data(dg, 8, 0);

  const SpacetimeField u0 = free_poisson(f, g);
  const SpacetimeField free_minus = perturbed_poisson(f, RadialSign::Minus, g, PotentialSpec::zero());
  CHECK(free_minus.values == u0.values);

  const PotentialSpec V = PotentialSpec::compact_bump(0.5);
  const SpacetimeField um = perturbed_poisson(f, RadialSign::Minus, g, V);
  CHECK(apply_P(um, V).norm() / um.norm() < 1e-3);
  CHECK(sup_error(extract_data(um, RadialSign::Minus, dg).limit, f) / f.max_abs() < 1e-3);

  const SpacetimeField up = perturbed_poisson(f, RadialSign::Plus, g, V);
  CHECK(sup_error(extract_data(up, RadialSign::Plus, dg).limit, f) / f.max_abs() < 1e-3);
}

TEST_CASE("scattering matrix sanity") {
  const Grid g;
  const DataGrid dg = DataGrid::for_grid(g, 1536);
  const DataFunction f = scatlab::random_data(dg, 9, 0);
  CHECK(l2_distance(scattering_matrix(f, g, PotentialSpec::zero()), f) / f.norm() < 1e-3);
  const DataFunction Sf = scattering_matrix(f, g, PotentialSpec::compact_bump(0.5));
  CHECK(std::abs(Sf.norm() / f.norm() - 1.0) < 1e-3);
  CHECK(l2_distance(Sf, f) / f.norm() > 1e-3);
}

TEST_CASE("pairing identity: trivial cases") {
  const Grid g;
  const DataGrid dg = DataGrid::for_grid(g, 1536);
  const DataFunction f = scatlab::random_data(dg, 10, 0);
  const SpacetimeField u = free_poisson(f, g);
  PairingData data{f, f, f, f};
  const PairingResult r = pairing_check(u, u, data, PotentialSpec::zero());
  CHECK(r.rhs == cplx{});
  CHECK(std::abs(r.lhs) < 1e-6 * u.norm() * u.norm());

  const SpacetimeField zero(g);
  const DataFunction none(dg);
  const PairingResult z = pairing_check(zero, zero, zero, zero, PairingData{none, none, none, none});
  CHECK(z.lhs == cplx{});
  CHECK(z.rhs == cplx{});
  CHECK(z.relative_discrepancy() == 0.0);
}

TEST_CASE("pairing identity on a Poisson and an advanced solution") {
  const Grid g;
  const DataGrid dg = DataGrid::for_grid(g, 1536);
  const PotentialSpec V = PotentialSpec::compact_bump(0.5);
  const DataFunction a = scatlab::random_data(dg, 12, 0);
  const SpacetimeField v = random_source(g, 12, 0);
  const SpacetimeField u1 = perturbed_poisson(a, RadialSign::Minus, g, V);
  const SpacetimeField u2 = solve_advanced(v, V);
  PairingData data;
  data.f1_minus = a;
  data.f1_plus = extract_data(u1, RadialSign::Plus, dg).limit;
  data.f2_plus = extract_data(u2, RadialSign::Plus, dg).limit;
  data.f2_minus = extract_data(u2, RadialSign::Minus, dg).limit;
  const PairingResult exact = pairing_check(u1, SpacetimeField(g), u2, v, data);
  CHECK(exact.relative_discrepancy() < 1e-2);
  CHECK(std::abs(exact.rhs) > 1e-3);
  // Same identity with P u evaluated by finite differences.
  CHECK(pairing_check(u1, u2, data, V).relative_discrepancy() < 1e-2);
}

TEST_CASE("P P* identity in weak form") {
  const Grid g;
  const DataGrid dg = DataGrid::for_grid(g, 1536);
  const auto tests = make_weak_test_functions(g, 10, 21);
  SpacetimeField v = random_source(g, 21, 0);
  const PPStarResult free = pp_star_check(v, PotentialSpec::zero(), dg, tests);
  CHECK(free.weak_discrepancy < 1e-2);
  const PPStarResult bumped = pp_star_check(v, PotentialSpec::compact_bump(0.5), dg, tests);
  CHECK(bumped.weak_discrepancy < 1e-2);
  CHECK(bumped.field_discrepancy < 1e-2);

  for (cplx& c : v.values) c = 0.0;
  const PPStarResult none = pp_star_check(v, PotentialSpec::zero(), dg, tests);
  CHECK(none.left.max_abs() == 0.0);
  CHECK(none.right.max_abs() == 0.0);
}
