#include "scatlab/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "scatlab/errors.hpp"
#include "scatlab/evolution.hpp"
#include "scatlab/fft.hpp"
#include "scatlab/scattering.hpp"

namespace scatlab {
namespace {

void check_index(std::size_t idx, std::size_t n) {
  if (idx >= n) throw Error(ErrorKind::DimensionMismatch, "generator index out of range");
}

void check_pair(std::size_t i, std::size_t j, std::size_t n) {
  if (n < 2) throw Error(ErrorKind::DimensionMismatch, "rotations need n >= 2");
  check_index(i, n);
  check_index(j, n);
  if (i == j) throw Error(ErrorKind::DimensionMismatch, "rotation indices must differ");
}

// D_{z_axis} of every slice.
SpacetimeField spatial_derivative(const SpacetimeField& u, std::size_t axis) {
  Propagator prop(u.grid, PotentialSpec::zero());
  SpacetimeField out = u;
  for (std::size_t k = 0; k <= u.grid.M; ++k) prop.derivative(out.slice(k), axis);
  return out;
}

std::vector<double> axis_coords(const Grid& g, std::size_t axis) {
  const std::size_t size = g.slice_size();
  std::vector<double> z(size);
  const std::size_t stride = ipow(g.N, g.n - 1 - axis);
  for (std::size_t j = 0; j < size; ++j) z[j] = g.coord((j / stride) % g.N);
  return z;
}

// (a t + b) D_i u + c z_i u, with a, b, c applied slice-wise.
SpacetimeField galilean(const SpacetimeField& u, std::size_t axis, double a, double c) {
  const Grid& g = u.grid;
  SpacetimeField out = spatial_derivative(u, axis);
  const std::vector<double> z = axis_coords(g, axis);
  const std::size_t size = g.slice_size();
  for (std::size_t k = 0; k <= g.M; ++k) {
    const double t = g.time(k);
    auto o = out.slice(k);
    const auto s = u.slice(k);
    for (std::size_t j = 0; j < size; ++j) o[j] = a * t * o[j] + c * z[j] * s[j];
  }
  return out;
}

// (1 + |zeta|^4 + tau^2)^{power} over the (n+1)-dimensional grid, in place.
void spacetime_multiplier(SpacetimeField& w, double power) {
  const Grid& g = w.grid;
  std::vector<std::size_t> shape{g.M + 1};
  for (std::size_t a = 0; a < g.n; ++a) shape.push_back(g.N);
  FftPlan plan(shape);
  plan.forward(w.values.data());
  Propagator prop(g, PotentialSpec::zero());
  const std::vector<double>& xi2 = prop.xi_squared();
  const std::size_t K = g.M + 1;
  const double period = static_cast<double>(K) * g.dt();
  const double scale = 1.0 / static_cast<double>(plan.size());
  const std::size_t size = g.slice_size();
  for (std::size_t k = 0; k < K; ++k) {
    const long long kk = static_cast<long long>(k);
    const long long shifted = kk <= static_cast<long long>(K - 1) / 2 ? kk : kk - static_cast<long long>(K);
    const double tau = 2.0 * std::numbers::pi * static_cast<double>(shifted) / period;
    auto s = w.slice(k);
    for (std::size_t j = 0; j < size; ++j) {
      s[j] *= std::pow(1.0 + xi2[j] * xi2[j] + tau * tau, power) * scale;
    }
  }
  plan.backward(w.values.data());
}

void apply_taper(SpacetimeField& w, double flank_fraction) {
  if (flank_fraction <= 0.0) return;
  const std::vector<double> win = tukey_window(w.grid.M + 1, flank_fraction);
  for (std::size_t k = 0; k <= w.grid.M; ++k) {
    for (cplx& c : w.slice(k)) c *= win[k];
  }
}

// Applies op to every line along `axis` of a row-major Np^n array.
void for_each_line(std::vector<cplx>& data, std::size_t Np, std::size_t n, std::size_t axis,
                   const std::function<void(std::vector<cplx>&)>& op) {
  const std::size_t stride = ipow(Np, n - 1 - axis);
  const std::size_t total = data.size();
  std::vector<cplx> line(Np);
  for (std::size_t base = 0; base < total; ++base) {
    if ((base / stride) % Np != 0) continue;
    for (std::size_t q = 0; q < Np; ++q) line[q] = data[base + q * stride];
    op(line);
    for (std::size_t q = 0; q < Np; ++q) data[base + q * stride] = line[q];
  }
}

std::vector<cplx> data_derivative(const DataFunction& f, std::size_t axis) {
  const DataGrid& dg = f.grid;
  std::vector<cplx> out = f.values;
  FftPlan plan({dg.Np});
  const double scale = 1.0 / static_cast<double>(dg.Np);
  const double dx = 2.0 * std::numbers::pi / (static_cast<double>(dg.Np) * dg.dzeta);
  for_each_line(out, dg.Np, dg.n, axis, [&](std::vector<cplx>& line) {
    plan.forward(line.data());
    for (std::size_t m = 0; m < dg.Np; ++m) {
      const long long mm = static_cast<long long>(m);
      const long long half = static_cast<long long>(dg.Np / 2);
      const double x = (mm == half) ? 0.0 : static_cast<double>(mm < half ? mm : mm - 2 * half) * dx;
      line[m] *= x * scale;
    }
    plan.backward(line.data());
  });
  return out;
}

std::vector<double> data_axis_coords(const DataGrid& dg, std::size_t axis) {
  std::vector<double> z(dg.size());
  const std::size_t stride = ipow(dg.Np, dg.n - 1 - axis);
  for (std::size_t q = 0; q < z.size(); ++q) z[q] = dg.zeta((q / stride) % dg.Np);
  return z;
}

double l2_sq(const std::vector<cplx>& v) {
  double acc = 0.0;
  for (const cplx& c : v) acc += std::norm(c);
  return acc;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

bool GeneratorId::acts_on_spacetime() const {
  switch (kind) {
    case GeneratorKind::DataRotation:
    case GeneratorKind::DataDeriv:
    case GeneratorKind::DataMult: return false;
    default: return true;
  }
}

bool GeneratorId::acts_on_data() const {
  switch (kind) {
    case GeneratorKind::Identity:
    case GeneratorKind::DataRotation:
    case GeneratorKind::DataDeriv:
    case GeneratorKind::DataMult: return true;
    default: return false;
  }
}

std::string GeneratorId::name() const {
  const std::string a = std::to_string(i);
  const std::string b = std::to_string(j);
  switch (kind) {
    case GeneratorKind::Identity: return "Identity";
    case GeneratorKind::Rotation: return "Rotation(" + a + "," + b + ")";
    case GeneratorKind::GalileanHalf: return "GalileanHalf(" + a + ")";
    case GeneratorKind::Galilean2: return "Galilean2(" + a + ")";
    case GeneratorKind::Translation: return "Translation(" + a + ")";
    case GeneratorKind::FibreElliptic: return "FibreElliptic";
    case GeneratorKind::DataRotation: return "DataRotation(" + a + "," + b + ")";
    case GeneratorKind::DataDeriv: return "DataDeriv(" + a + ")";
    case GeneratorKind::DataMult: return "DataMult(" + a + ")";
  }
  return "Identity";
}

std::vector<double> tukey_window(std::size_t count, double flank_fraction) {
  std::vector<double> w(count, 1.0);
  if (flank_fraction <= 0.0 || count < 2) return w;
  const double f = std::min(flank_fraction, 0.5);
  for (std::size_t k = 0; k < count; ++k) {
    const double x = static_cast<double>(k) / static_cast<double>(count - 1);
    const double edge = std::min(x, 1.0 - x);
    if (edge < f) w[k] = 0.5 * (1.0 - std::cos(std::numbers::pi * edge / f));
  }
  return w;
}

SpacetimeField apply_generator(const GeneratorId& g, const SpacetimeField& u, const TaperOptions& taper) {
  const std::size_t n = u.grid.n;
  switch (g.kind) {
    case GeneratorKind::Identity: return u;
    case GeneratorKind::Translation: check_index(g.i, n); return spatial_derivative(u, g.i);
    case GeneratorKind::Galilean2: check_index(g.i, n); return galilean(u, g.i, 2.0, -1.0);
    case GeneratorKind::GalileanHalf: check_index(g.i, n); return galilean(u, g.i, 1.0, -0.5);
    case GeneratorKind::Rotation: {
      check_pair(g.i, g.j, n);
      SpacetimeField di = spatial_derivative(u, g.i);
      const SpacetimeField dj = spatial_derivative(u, g.j);
      const std::vector<double> zi = axis_coords(u.grid, g.i);
      const std::vector<double> zj = axis_coords(u.grid, g.j);
      for (std::size_t k = 0; k <= u.grid.M; ++k) {
        auto a = di.slice(k);
        const auto b = dj.slice(k);
        for (std::size_t p = 0; p < a.size(); ++p) a[p] = zi[p] * b[p] - zj[p] * a[p];
      }
      return di;
    }
    case GeneratorKind::FibreElliptic: {
      SpacetimeField w = u;
      apply_taper(w, taper.flank_fraction);
      spacetime_multiplier(w, 0.25);
      return w;
    }
    default: break;
  }
  throw Error(ErrorKind::DimensionMismatch, g.name() + " acts on data functions, not spacetime fields");
}

DataFunction apply_generator(const GeneratorId& g, const DataFunction& f) {
  const std::size_t n = f.grid.n;
  DataFunction out(f.grid);
  switch (g.kind) {
    case GeneratorKind::Identity: return f;
    case GeneratorKind::DataMult: {
      check_index(g.i, n);
      const std::vector<double> z = data_axis_coords(f.grid, g.i);
      for (std::size_t q = 0; q < z.size(); ++q) out.values[q] = z[q] * f.values[q];
      return out;
    }
    case GeneratorKind::DataDeriv:
      check_index(g.i, n);
      out.values = data_derivative(f, g.i);
      return out;
    case GeneratorKind::DataRotation: {
      check_pair(g.i, g.j, n);
      const std::vector<cplx> di = data_derivative(f, g.i);
      const std::vector<cplx> dj = data_derivative(f, g.j);
      const std::vector<double> zi = data_axis_coords(f.grid, g.i);
      const std::vector<double> zj = data_axis_coords(f.grid, g.j);
      for (std::size_t q = 0; q < di.size(); ++q) out.values[q] = zi[q] * dj[q] - zj[q] * di[q];
      return out;
    }
    default: break;
  }
  throw Error(ErrorKind::DimensionMismatch, g.name() + " acts on spacetime fields, not data functions");
}

std::vector<GeneratorId> data_alphabet(std::size_t n) {
  std::vector<GeneratorId> out{GeneratorId::identity()};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) out.push_back(GeneratorId::data_rotation(i, j));
  }
  for (std::size_t i = 0; i < n; ++i) out.push_back(GeneratorId::data_deriv(i));
  for (std::size_t i = 0; i < n; ++i) out.push_back(GeneratorId::data_mult(i));
  return out;
}

double data_norm_Wk(const DataFunction& f, int k) {
  if (k < 0) throw Error(ErrorKind::ConfigInvalid, "negative W^k orders are not supported");
  if (k > 3) throw Error(ErrorKind::ConfigInvalid, "W^k norms are limited to k <= 3");
  const std::vector<GeneratorId> alphabet = data_alphabet(f.grid.n);
  double total = 0.0;
  std::function<void(const DataFunction&, int)> visit = [&](const DataFunction& g, int depth) {
    total += l2_sq(g.values);
    if (depth == k) return;
    for (const GeneratorId& a : alphabet) visit(apply_generator(a, g), depth + 1);
  };
  visit(f, 0);
  return std::sqrt(total * std::pow(f.grid.dzeta, static_cast<double>(f.grid.n)));
}

double parabolic_norm(const SpacetimeField& u, double s, double l, const TaperOptions& taper) {
  const Grid& g = u.grid;
  SpacetimeField w = u;
  apply_taper(w, taper.flank_fraction);
  if (s != 0.0) spacetime_multiplier(w, 0.25 * s);
  const std::size_t size = g.slice_size();
  std::vector<double> z2(size, 0.0);
  for (std::size_t a = 0; a < g.n; ++a) {
    const std::vector<double> za = axis_coords(g, a);
    for (std::size_t j = 0; j < size; ++j) z2[j] += za[j] * za[j];
  }
  double acc = 0.0;
  for (std::size_t k = 0; k <= g.M; ++k) {
    const double t = g.time(k);
    const auto sl = w.slice(k);
    for (std::size_t j = 0; j < size; ++j) {
      const double weight = l == 0.0 ? 1.0 : std::pow(1.0 + z2[j] + t * t, l);
      acc += weight * std::norm(sl[j]);
    }
  }
  return std::sqrt(acc * std::pow(g.dz(), static_cast<double>(g.n)) * g.dt());
}

void NormOrder::validate() const {
  if (kappa < 0 || k < 0) throw Error(ErrorKind::ConfigInvalid, "norm orders kappa and k must be >= 0");
  if (kappa + k > 3) throw Error(ErrorKind::ConfigInvalid, "kappa + k must not exceed 3");
}

std::vector<GeneratorId> module_alphabet(std::size_t n) {
  std::vector<GeneratorId> out{GeneratorId::identity()};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) out.push_back(GeneratorId::rotation(i, j));
  }
  for (std::size_t i = 0; i < n; ++i) out.push_back(GeneratorId::galilean_half(i));
  out.push_back(GeneratorId::fibre_elliptic());
  return out;
}

ModuleNormResult module_norm(const SpacetimeField& u, const NormOrder& order, RadialSign /*sign*/,
                             const TaperOptions& taper) {
  order.validate();
  ModuleNormResult result;
  result.alphabet_fallback = order.kappa > 0;
  result.flank_fraction = taper.flank_fraction;
  const int depth_max = order.kappa + order.k;
  const std::vector<GeneratorId> alphabet = module_alphabet(u.grid.n);
  const TaperOptions none{0.0};

  SpacetimeField base = u;
  apply_taper(base, taper.flank_fraction);
  double total = 0.0;
  std::function<void(const SpacetimeField&, int)> visit = [&](const SpacetimeField& w, int depth) {
    const double p = parabolic_norm(w, order.s, order.l, none);
    total += p * p;
    ++result.words;
    if (depth == depth_max) return;
    for (const GeneratorId& a : alphabet) visit(apply_generator(a, w, none), depth + 1);
  };
  visit(base, 0);
  result.value = std::sqrt(total);
  return result;
}

double threshold_integral(const SpacetimeField& u, double l, double T) {
  const Grid& g = u.grid;
  if (1.0 < g.t0 || T > g.t1 + 1e-9 * g.dt() || !(T > 1.0)) {
    throw Error(ErrorKind::WindowTooSmall, "threshold interval [1, T] must lie inside the grid window");
  }
  const std::size_t size = g.slice_size();
  std::vector<double> z2(size, 0.0);
  for (std::size_t a = 0; a < g.n; ++a) {
    const std::vector<double> za = axis_coords(g, a);
    for (std::size_t j = 0; j < size; ++j) z2[j] += za[j] * za[j];
  }
  const double eps = 1e-9 * g.dt();
  std::vector<std::size_t> ks;
  for (std::size_t k = 0; k <= g.M; ++k) {
    const double t = g.time(k);
    if (t >= 1.0 - eps && t <= T + eps) ks.push_back(k);
  }
  if (ks.size() < 2) throw Error(ErrorKind::WindowTooSmall, "threshold interval covers fewer than two slices");
  double total = 0.0;
  for (std::size_t idx = 0; idx < ks.size(); ++idx) {
    const std::size_t k = ks[idx];
    const double t = g.time(k);
    const auto sl = u.slice(k);
    double acc = 0.0;
    for (std::size_t j = 0; j < size; ++j) acc += std::pow(1.0 + z2[j] + t * t, l) * std::norm(sl[j]);
    const double w = (idx == 0 || idx + 1 == ks.size()) ? 0.5 : 1.0;
    total += w * acc;
  }
  return total * std::pow(g.dz(), static_cast<double>(g.n)) * g.dt();
}

ThresholdResult threshold_scan(const SpacetimeField& u, double l, std::span<const double> T_list) {
  ThresholdResult result;
  std::vector<double> lx;
  std::vector<double> ly;
  for (double T : T_list) {
    const double I = threshold_integral(u, l, T);
    result.T.push_back(T);
    result.integrals.push_back(I);
    if (I > 0.0) {
      lx.push_back(std::log(T));
      ly.push_back(std::log(I));
    } else {
      result.degenerate = true;
    }
  }
  if (result.degenerate || lx.size() < 2) {
    result.degenerate = true;
    result.slope = std::numeric_limits<double>::quiet_NaN();
  } else {
    result.slope = least_squares_slope(lx, ly);
  }
  return result;
}

SplitResult microlocal_split(const SpacetimeField& u, const SplitOptions& opts) {
  const Grid& g = u.grid;
  const std::size_t B = opts.blocks;
  if (B < 2) throw Error(ErrorKind::ConfigInvalid, "microlocal_split needs at least two blocks per axis");
  const std::size_t n = g.n;
  const std::size_t N = g.N;
  const std::size_t size = g.slice_size();
  const double h = 2.0 * g.L / static_cast<double>(B);

  // Per-axis block windows w[b][i] and centres.
  std::vector<std::vector<double>> window(B, std::vector<double>(N, 0.0));
  std::vector<double> centre(B);
  for (std::size_t b = 0; b < B; ++b) {
    centre[b] = -g.L + h * (static_cast<double>(b) + 0.5);
    for (std::size_t i = 0; i < N; ++i) {
      double d = g.coord(i) - centre[b];
      d -= 2.0 * g.L * std::round(d / (2.0 * g.L));
      if (std::abs(d) < h) {
        const double c = std::cos(0.5 * std::numbers::pi * d / h);
        window[b][i] = c * c;
      }
    }
  }

  // Unit frequency directions.
  std::vector<std::vector<double>> xi_hat(size, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < size; ++j) {
    std::size_t rem = j;
    double r2 = 0.0;
    for (std::size_t a = n; a-- > 0;) {
      xi_hat[j][a] = g.freq(rem % N);
      r2 += xi_hat[j][a] * xi_hat[j][a];
      rem /= N;
    }
    const double r = std::sqrt(r2);
    for (double& x : xi_hat[j]) x = r > 0.0 ? x / r : 0.0;
  }

  const std::size_t block_count = ipow(B, n);
  std::vector<std::vector<double>> weights(block_count, std::vector<double>(size, 1.0));
  std::vector<std::vector<double>> chi_plus(block_count, std::vector<double>(size));
  std::vector<std::vector<double>> chi_minus(block_count, std::vector<double>(size));
  for (std::size_t blk = 0; blk < block_count; ++blk) {
    std::vector<std::size_t> bidx(n);
    std::size_t rem = blk;
    for (std::size_t a = n; a-- > 0;) {
      bidx[a] = rem % B;
      rem /= B;
    }
    std::vector<double> zhat(n);
    double r2 = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      zhat[a] = centre[bidx[a]];
      r2 += zhat[a] * zhat[a];
    }
    for (double& x : zhat) x /= std::sqrt(r2);
    for (std::size_t j = 0; j < size; ++j) {
      std::size_t r = j;
      double w = 1.0;
      for (std::size_t a = n; a-- > 0;) {
        w *= window[bidx[a]][r % N];
        r /= N;
      }
      weights[blk][j] = w;
      double x = 0.0;
      for (std::size_t a = 0; a < n; ++a) x += zhat[a] * xi_hat[j][a];
      chi_plus[blk][j] = 0.5 * (1.0 + std::sin(0.5 * std::numbers::pi * x));
      chi_minus[blk][j] = 0.5 * (1.0 - std::sin(0.5 * std::numbers::pi * x));
    }
  }

  FftPlan plan(std::vector<std::size_t>(n, N));
  const double scale = 1.0 / static_cast<double>(plan.size());
  SplitResult out{SpacetimeField(g), SpacetimeField(g), 0.0};
  std::vector<cplx> piece(size);
  std::vector<cplx> part(size);
  for (std::size_t k = 0; k <= g.M; ++k) {
    const auto us = u.slice(k);
    auto ps = out.plus.slice(k);
    auto ms = out.minus.slice(k);
    for (std::size_t blk = 0; blk < block_count; ++blk) {
      bool any = false;
      for (std::size_t j = 0; j < size; ++j) {
        piece[j] = weights[blk][j] * us[j];
        any = any || piece[j] != cplx{};
      }
      if (!any) continue;
      plan.forward(piece.data());
      for (std::size_t j = 0; j < size; ++j) part[j] = piece[j] * (chi_plus[blk][j] * scale);
      plan.backward(part.data());
      for (std::size_t j = 0; j < size; ++j) ps[j] += part[j];
      for (std::size_t j = 0; j < size; ++j) part[j] = piece[j] * (chi_minus[blk][j] * scale);
      plan.backward(part.data());
      for (std::size_t j = 0; j < size; ++j) ms[j] += part[j];
    }
  }
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    diff += std::norm(out.plus.values[i] + out.minus.values[i] - u.values[i]);
    ref += std::norm(u.values[i]);
  }
  out.reconstruction_residual = ref > 0.0 ? std::sqrt(diff / ref) : std::sqrt(diff);
  return out;
}

GeneratorId data_counterpart(const GeneratorId& g) {
  switch (g.kind) {
    case GeneratorKind::Identity: return GeneratorId::identity();
    case GeneratorKind::Rotation: return GeneratorId::data_rotation(g.i, g.j);
    case GeneratorKind::Galilean2: return GeneratorId::data_deriv(g.i);
    case GeneratorKind::Translation: return GeneratorId::data_mult(g.i);
    default: break;
  }
  throw Error(ErrorKind::NoCounterpart, g.name() + " has no data-side counterpart under the free Poisson operator");
}

double commutation_residual(const GeneratorId& g, const DataFunction& f, const Grid& grid) {
  const GeneratorId counterpart = data_counterpart(g);
  const SpacetimeField lhs = apply_generator(g, free_poisson(f, grid));
  const SpacetimeField rhs = free_poisson(apply_generator(counterpart, f), grid);
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < lhs.values.size(); ++i) {
    diff += std::norm(lhs.values[i] - rhs.values[i]);
    ref += std::norm(lhs.values[i]);
  }
  return ref > 0.0 ? std::sqrt(diff / ref) : std::sqrt(diff);
}

}  // namespace scatlab
