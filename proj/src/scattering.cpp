#include "scatlab/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "scatlab/errors.hpp"
#include "scatlab/evolution.hpp"
#include "scatlab/fft.hpp"

namespace scatlab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_matching(const DataGrid& dg, const Grid& grid) {
  if (dg.n != grid.n) throw Error(ErrorKind::DimensionMismatch, "data and spacetime dimensions differ");
  if (dg.Np > grid.N) throw Error(ErrorKind::DimensionMismatch, "data grid has more points than the FFT grid");
  if (std::abs(dg.dzeta - grid.dxi()) > 1e-12 * grid.dxi()) {
    throw Error(ErrorKind::DimensionMismatch, "data spacing must equal pi/L of the spacetime grid");
  }
}

// FFT index and sign (-1)^{m'} for data lattice index k on one axis.
std::pair<std::size_t, double> fft_slot(std::size_t k, std::size_t Np, std::size_t N) {
  const long long shifted = static_cast<long long>(k) - static_cast<long long>(Np / 2);
  const long long m = shifted >= 0 ? shifted : shifted + static_cast<long long>(N);
  const double sign = (shifted % 2 == 0) ? 1.0 : -1.0;
  return {static_cast<std::size_t>(m), sign};
}

double trapezoid_weight(std::size_t k, std::size_t M) { return (k == 0 || k == M) ? 0.5 : 1.0; }

std::vector<std::size_t> spatial_shape(const Grid& grid) { return std::vector<std::size_t>(grid.n, grid.N); }

// Rows k: exp(i xi_m (z_k + L)) / N at z_k = 2 t zeta_k, one axis.
std::vector<cplx> interpolation_matrix(const Grid& grid, const DataGrid& dg, double t) {
  const std::size_t N = grid.N;
  const std::size_t Np = dg.Np;
  std::vector<cplx> E(Np * N);
  const double inv_n = 1.0 / static_cast<double>(N);
  const double step = 2.0 * t * dg.dzeta;
  for (std::size_t m = 0; m < N; ++m) {
    const double xi = grid.freq(m);
    const bool nyquist = (m == N / 2);
    cplx ratio = std::polar(1.0, xi * step);
    cplx cur;
    for (std::size_t k = 0; k < Np; ++k) {
      // Re-anchor every 32 rows to keep the recurrence at roundoff level.
      if (k % 32 == 0) cur = std::polar(1.0, xi * (2.0 * t * dg.zeta(k) + grid.L));
      E[k * N + m] = nyquist ? cplx(cur.real() * inv_n, 0.0) : cur * inv_n;
      cur *= ratio;
    }
  }
  return E;
}

}  // namespace

std::vector<cplx> data_to_spectrum(const DataFunction& f, const Grid& grid) {
  require_matching(f.grid, grid);
  const std::size_t n = grid.n;
  const std::size_t N = grid.N;
  const std::size_t Np = f.grid.Np;
  std::vector<cplx> spec(grid.slice_size());
  const double scale = std::pow(1.0 / (2.0 * grid.L), static_cast<double>(n));
  for (std::size_t idx = 0; idx < f.values.size(); ++idx) {
    std::size_t rem = idx;
    std::size_t target = 0;
    std::size_t stride = 1;
    double sign = 1.0;
    for (std::size_t a = 0; a < n; ++a) {
      const auto [m, s] = fft_slot(rem % Np, Np, N);
      target += m * stride;
      sign *= s;
      rem /= Np;
      stride *= N;
    }
    spec[target] = f.values[idx] * (sign * scale);
  }
  return spec;
}

SpacetimeField free_poisson(const DataFunction& f, const Grid& grid) {
  grid.validate();
  const std::vector<cplx> spec = data_to_spectrum(f, grid);
  Propagator prop(grid, PotentialSpec::zero());
  const std::vector<double>& xi2 = prop.xi_squared();
  SpacetimeField u(grid);
  for (std::size_t k = 0; k <= grid.M; ++k) {
    const double t = grid.time(k);
    auto s = u.slice(k);
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = spec[j] * std::polar(1.0, -t * xi2[j]);
    prop.plan().backward(s.data());
  }
  return u;
}

DataFunction rescaled_profile(const SpacetimeField& u, double t, const DataGrid& target) {
  const Grid& grid = u.grid;
  if (target.n != grid.n) throw Error(ErrorKind::DimensionMismatch, "data and spacetime dimensions differ");
  if (t < grid.t0 || t > grid.t1) throw Error(ErrorKind::WindowTooSmall, "extraction time outside the grid window");
  const std::size_t k = grid.nearest_slice(t);
  const double tk = grid.time(k);
  if (2.0 * std::abs(tk) * target.zeta_max() > grid.L) {
    throw Error(ErrorKind::WindowTooSmall, "2|t| zeta_max exceeds the box half-width at t = " + std::to_string(tk));
  }
  const std::size_t N = grid.N;
  const std::size_t Np = target.Np;
  std::vector<cplx> coeff(u.slice(k).begin(), u.slice(k).end());
  FftPlan plan(spatial_shape(grid));
  plan.forward(coeff.data());
  std::vector<cplx> values;
  if (grid.n == 1) {
    values.assign(Np, cplx{});
    const double inv_n = 1.0 / static_cast<double>(N);
    for (std::size_t q = 0; q < Np; ++q) {
      const double shift = 2.0 * tk * target.zeta(q) + grid.L;
      const cplx ratio = std::polar(1.0, grid.dxi() * shift);
      // Non-negative frequencies below Nyquist, then the negative ones, both
      // walked outward from zero with the recurrence re-anchored every 32 terms.
      cplx acc = coeff[0];
      cplx cur{1.0, 0.0};
      for (std::size_t m = 1; m < N / 2; ++m) {
        cur = (m % 32 == 0) ? std::polar(1.0, grid.freq(m) * shift) : cur * ratio;
        acc += cur * coeff[m];
      }
      const cplx back = std::conj(ratio);
      cur = cplx{1.0, 0.0};
      for (std::size_t j = 1; j < N / 2; ++j) {
        cur = (j % 32 == 0) ? std::polar(1.0, grid.freq(N - j) * shift) : cur * back;
        acc += cur * coeff[N - j];
      }
      acc += std::cos(grid.freq(N / 2) * shift) * coeff[N / 2];
      values[q] = acc * inv_n;
    }
  } else {
    const std::vector<cplx> E = interpolation_matrix(grid, target, tk);
    // Contract the last axis, then the first.
    std::vector<cplx> W(N * Np);
    for (std::size_t m0 = 0; m0 < N; ++m0) {
      for (std::size_t q1 = 0; q1 < Np; ++q1) {
        cplx acc;
        for (std::size_t m1 = 0; m1 < N; ++m1) acc += E[q1 * N + m1] * coeff[m0 * N + m1];
        W[m0 * Np + q1] = acc;
      }
    }
    values.assign(Np * Np, cplx{});
    for (std::size_t q0 = 0; q0 < Np; ++q0) {
      for (std::size_t m0 = 0; m0 < N; ++m0) {
        const cplx e = E[q0 * N + m0];
        for (std::size_t q1 = 0; q1 < Np; ++q1) values[q0 * Np + q1] += e * W[m0 * Np + q1];
      }
    }
  }

  const cplx base = std::sqrt(cplx(0.0, 4.0 * std::numbers::pi * tk));
  const cplx prefactor = grid.n == 1 ? base : base * base;
  DataFunction out(target);
  for (std::size_t idx = 0; idx < values.size(); ++idx) {
    std::size_t rem = idx;
    double zeta2 = 0.0;
    for (std::size_t a = 0; a < grid.n; ++a) {
      const double z = target.zeta(rem % Np);
      zeta2 += z * z;
      rem /= Np;
    }
    out.values[idx] = prefactor * std::polar(1.0, -tk * zeta2) * values[idx];
  }
  return out;
}

ExtractionReport extract_data(const SpacetimeField& u, RadialSign sign, std::span<const double> t_list,
                              const DataGrid& target, const ExtractionOptions& opts) {
  const Grid& grid = u.grid;
  if (t_list.empty()) throw Error(ErrorKind::WindowTooSmall, "no extraction times given");
  std::vector<double> times;
  for (double t : t_list) {
    if ((sign == RadialSign::Plus && !(t > 0.0)) || (sign == RadialSign::Minus && !(t < 0.0))) {
      throw Error(ErrorKind::ConfigInvalid, "extraction time has the wrong sign for the requested limit");
    }
    if (t < grid.t0 || t > grid.t1) throw Error(ErrorKind::WindowTooSmall, "extraction time outside the grid window");
    times.push_back(grid.time(grid.nearest_slice(t)));
  }
  std::sort(times.begin(), times.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  times.erase(std::unique(times.begin(), times.end()), times.end());

  std::vector<DataFunction> profiles;
  profiles.reserve(times.size());
  for (double t : times) profiles.push_back(rescaled_profile(u, t, target));

  const std::size_t count = times.size();
  const std::size_t terms = std::max<std::size_t>(1, std::min(opts.fit_terms, count));
  std::size_t tail = static_cast<std::size_t>(std::ceil(opts.tail_fraction * static_cast<double>(count)));
  tail = std::clamp(tail, terms, count);
  const std::size_t first = count - tail;

  const double t_ref = std::abs(times[first]);
  Eigen::MatrixXd A(tail, terms);
  for (std::size_t r = 0; r < tail; ++r) {
    const double x = t_ref / std::abs(times[first + r]);
    double p = 1.0;
    for (std::size_t c = 0; c < terms; ++c) {
      A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = p;
      p *= x;
    }
  }
  const Eigen::MatrixXd pinv = A.colPivHouseholderQr().solve(Eigen::MatrixXd::Identity(tail, tail));

  ExtractionReport report;
  report.limit = DataFunction(target);
  for (std::size_t r = 0; r < tail; ++r) {
    const double w = pinv(0, static_cast<Eigen::Index>(r));
    const auto& vals = profiles[first + r].values;
    for (std::size_t q = 0; q < vals.size(); ++q) report.limit.values[q] += w * vals[q];
  }
  report.times_used = times;
  report.fit_times.assign(times.begin() + static_cast<std::ptrdiff_t>(first), times.end());

  const double cell = std::pow(target.dzeta, static_cast<double>(target.n));
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < count; ++i) {
    double acc = 0.0;
    for (std::size_t q = 0; q < profiles[i].values.size(); ++q) {
      acc += std::norm(profiles[i].values[q] - report.limit.values[q]);
    }
    const double dev = std::sqrt(acc * cell);
    report.residual_curve.push_back({times[i], dev});
    if (dev > 0.0) {
      lx.push_back(std::log(std::abs(times[i])));
      ly.push_back(std::log(dev));
    }
  }
  report.fitted_rate = std::numeric_limits<double>::quiet_NaN();
  if (lx.size() >= 2) {
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (sxx > 0.0) report.fitted_rate = -sxy / sxx;
  }
  return report;
}

std::vector<double> default_extraction_times(const Grid& grid, RadialSign sign, const DataGrid& target,
                                             std::size_t max_count, double t_min_fraction) {
  const double far = sign == RadialSign::Plus ? grid.t1 : -grid.t0;
  if (!(far > 0.0)) throw Error(ErrorKind::WindowTooSmall, "grid window does not reach the requested time direction");
  const double admissible = grid.L / (2.0 * target.zeta_max());
  const double hi = std::min(far, admissible);
  const double lo = t_min_fraction * hi;
  std::vector<double> all;
  for (std::size_t k = 0; k <= grid.M; ++k) {
    const double t = grid.time(k);
    const double a = sign == RadialSign::Plus ? t : -t;
    if (a >= lo && a <= hi && a > 0.0) all.push_back(t);
  }
  if (all.empty()) throw Error(ErrorKind::WindowTooSmall, "no grid times satisfy 2|t| zeta_max <= L");
  if (max_count < 2 || all.size() <= max_count) return all;
  std::vector<double> out;
  for (std::size_t i = 0; i < max_count; ++i) {
    const std::size_t idx = (i * (all.size() - 1)) / (max_count - 1);
    out.push_back(all[idx]);
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ExtractionReport extract_data(const SpacetimeField& u, RadialSign sign, const DataGrid& target,
                              const ExtractionOptions& opts) {
  const std::vector<double> times = default_extraction_times(u.grid, sign, target);
  return extract_data(u, sign, times, target, opts);
}

SpacetimeField perturbed_poisson(const DataFunction& f, RadialSign sign, const Grid& grid,
                                 const PotentialSpec& potential) {
  SpacetimeField u0 = free_poisson(f, grid);
  if (potential.is_zero()) return u0;
  SpacetimeField w(grid);
  for (std::size_t k = 0; k <= grid.M; ++k) {
    const double t = grid.time(k);
    if (t <= potential.t_support_min() || t >= potential.t_support_max()) continue;
    const std::vector<cplx> v = potential.slice(grid, t);
    auto ws = w.slice(k);
    const auto us = u0.slice(k);
    for (std::size_t j = 0; j < ws.size(); ++j) ws[j] = v[j] * us[j];
  }
  const SpacetimeField corr = sign == RadialSign::Minus ? solve_retarded(w, potential) : solve_advanced(w, potential);
  for (std::size_t i = 0; i < u0.values.size(); ++i) u0.values[i] -= corr.values[i];
  return u0;
}

ExtractionReport scattering_report(const DataFunction& f_minus, const Grid& grid, const PotentialSpec& potential,
                                   const ExtractionOptions& opts) {
  const SpacetimeField u = perturbed_poisson(f_minus, RadialSign::Minus, grid, potential);
  return extract_data(u, RadialSign::Plus, f_minus.grid, opts);
}

DataFunction scattering_matrix(const DataFunction& f_minus, const Grid& grid, const PotentialSpec& potential,
                               const ExtractionOptions& opts) {
  return scattering_report(f_minus, grid, potential, opts).limit;
}

double PairingResult::relative_discrepancy() const {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  if (scale == 0.0) return 0.0;
  return std::abs(lhs - rhs) / scale;
}

PairingResult pairing_check(const SpacetimeField& u1, const SpacetimeField& Pu1, const SpacetimeField& u2,
                            const SpacetimeField& Pu2, const PairingData& data) {
  const Grid& g = u1.grid;
  if (!(u2.grid == g) || !(Pu1.grid == g) || !(Pu2.grid == g)) {
    throw Error(ErrorKind::DimensionMismatch, "pairing fields live on different grids");
  }
  const DataGrid& dg = data.f1_plus.grid;
  for (const DataFunction* f : {&data.f1_minus, &data.f2_plus, &data.f2_minus}) {
    if (!(f->grid == dg)) throw Error(ErrorKind::DimensionMismatch, "pairing data live on different grids");
  }
  const std::size_t size = g.slice_size();
  cplx lhs;
  for (std::size_t k = 0; k <= g.M; ++k) {
    cplx acc;
    for (std::size_t j = 0; j < size; ++j) {
      const std::size_t i = k * size + j;
      acc += u1.values[i] * std::conj(Pu2.values[i]) - Pu1.values[i] * std::conj(u2.values[i]);
    }
    lhs += trapezoid_weight(k, g.M) * acc;
  }
  lhs *= std::pow(g.dz(), static_cast<double>(g.n)) * g.dt();

  cplx rhs;
  for (std::size_t q = 0; q < dg.size(); ++q) {
    rhs += data.f1_plus.values[q] * std::conj(data.f2_plus.values[q]) -
           data.f1_minus.values[q] * std::conj(data.f2_minus.values[q]);
  }
  rhs *= cplx(0.0, 1.0) * std::pow(kTwoPi, -static_cast<double>(dg.n)) * std::pow(dg.dzeta, static_cast<double>(dg.n));
  return {lhs, rhs};
}

PairingResult pairing_check(const SpacetimeField& u1, const SpacetimeField& u2, const PairingData& data,
                            const PotentialSpec& potential) {
  return pairing_check(u1, apply_P(u1, potential), u2, apply_P(u2, potential), data);
}

cplx WeakTestFunction::operator()(std::span<const double> z, double t) const {
  double r2 = 0.0;
  double phase = tau * t;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double d = z[i] - center_z[i];
    r2 += d * d / (width_z * width_z);
    phase += xi[i] * z[i];
  }
  const double dt = (t - center_t) / width_t;
  r2 += dt * dt;
  return std::polar(std::exp(-0.5 * r2), phase);
}

std::vector<WeakTestFunction> make_weak_test_functions(const Grid& grid, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double t_mid = 0.5 * (grid.t0 + grid.t1);
  const double t_half = 0.5 * (grid.t1 - grid.t0);
  std::vector<WeakTestFunction> out;
  for (std::size_t c = 0; c < count; ++c) {
    WeakTestFunction phi;
    phi.center_t = t_mid + 0.5 * t_half * unit(rng);
    phi.width_t = 0.05 * t_half * (1.5 + 0.5 * unit(rng));
    phi.width_z = 0.04 * grid.L * (1.5 + 0.5 * unit(rng));
    phi.center_z.resize(grid.n);
    phi.xi.resize(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
      phi.center_z[i] = 0.25 * grid.L * unit(rng);
      phi.xi[i] = 0.5 * unit(rng);
    }
    phi.tau = 0.25 * unit(rng);
    out.push_back(std::move(phi));
  }
  return out;
}

cplx weak_pairing(const SpacetimeField& u, const WeakTestFunction& phi) {
  const Grid& g = u.grid;
  const std::size_t size = g.slice_size();
  std::vector<std::vector<double>> coords(size);
  for (std::size_t j = 0; j < size; ++j) coords[j] = point_coords(g, j);
  cplx total;
  for (std::size_t k = 0; k <= g.M; ++k) {
    const double t = g.time(k);
    if (std::abs(t - phi.center_t) > 12.0 * phi.width_t) continue;
    cplx acc;
    const auto s = u.slice(k);
    for (std::size_t j = 0; j < size; ++j) acc += s[j] * std::conj(phi(coords[j], t));
    total += trapezoid_weight(k, g.M) * acc;
  }
  return total * std::pow(g.dz(), static_cast<double>(g.n)) * g.dt();
}

PPStarResult pp_star_check(const SpacetimeField& v, const PotentialSpec& potential, const DataGrid& target,
                           std::span<const WeakTestFunction> tests, const ExtractionOptions& opts) {
  const Grid& g = v.grid;
  const cplx c = cplx(0.0, 1.0) * std::pow(kTwoPi, -static_cast<double>(g.n));

  const SpacetimeField back = solve_advanced(v, potential);
  const SpacetimeField fwd = solve_retarded(v, potential);

  PPStarResult out;
  out.right = SpacetimeField(g);
  for (std::size_t i = 0; i < v.values.size(); ++i) out.right.values[i] = c * (back.values[i] - fwd.values[i]);

  DataFunction incoming = extract_data(back, RadialSign::Minus, target, opts).limit;
  for (cplx& x : incoming.values) x *= c;
  out.left = perturbed_poisson(incoming, RadialSign::Minus, g, potential);

  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < v.values.size(); ++i) {
    diff += std::norm(out.left.values[i] - out.right.values[i]);
    ref += std::norm(out.right.values[i]);
  }
  out.field_discrepancy = ref > 0.0 ? std::sqrt(diff / ref) : std::sqrt(diff);

  double wdiff = 0.0;
  double wref = 0.0;
  for (const WeakTestFunction& phi : tests) {
    const cplx l = weak_pairing(out.left, phi);
    const cplx r = weak_pairing(out.right, phi);
    out.weak_left.push_back(l);
    out.weak_right.push_back(r);
    wdiff += std::norm(l - r);
    wref += std::norm(r);
  }
  out.weak_discrepancy = wref > 0.0 ? std::sqrt(wdiff / wref) : std::sqrt(wdiff);
  return out;
}

}  // namespace scatlab
