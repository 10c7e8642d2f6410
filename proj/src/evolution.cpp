#include "scatlab/evolution.hpp"

#include <algorithm>
#include <cmath>

#include "scatlab/errors.hpp"

namespace scatlab {
namespace {

std::vector<std::size_t> spatial_shape(const Grid& grid) { return std::vector<std::size_t>(grid.n, grid.N); }

// Midpoint value v(t_k + dt/2): cubic from four slices where available.
void midpoint_source(const SpacetimeField& v, std::size_t k, std::vector<cplx>& out) {
  const std::size_t M = v.grid.M;
  const auto a = v.slice(k);
  const auto b = v.slice(k + 1);
  if (k >= 1 && k + 2 <= M) {
    const auto am = v.slice(k - 1);
    const auto bp = v.slice(k + 2);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = (9.0 * (a[j] + b[j]) - am[j] - bp[j]) / 16.0;
  } else {
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = 0.5 * (a[j] + b[j]);
  }
}

void check_support(const SpacetimeField& v) {
  const double vmax = v.max_abs();
  if (vmax == 0.0) return;
  const double limit = kSupportTolerance * vmax;
  for (std::size_t k : {std::size_t{0}, v.grid.M}) {
    for (const cplx& c : v.slice(k)) {
      if (std::abs(c) > limit) {
        throw Error(ErrorKind::SupportViolation, "source does not vanish on the time boundary of the grid");
      }
    }
  }
}

}  // namespace

Propagator::Propagator(const Grid& grid, const PotentialSpec& potential)
    : grid_(grid), potential_(potential), plan_(spatial_shape(grid)) {
  grid_.validate();
  const std::size_t size = grid_.slice_size();
  xi2_.assign(size, 0.0);
  for (std::size_t j = 0; j < size; ++j) {
    std::size_t rem = j;
    double acc = 0.0;
    for (std::size_t a = 0; a < grid_.n; ++a) {
      const double xi = grid_.freq(rem % grid_.N);
      acc += xi * xi;
      rem /= grid_.N;
    }
    xi2_[j] = acc;
  }
}

void Propagator::potential_half(std::span<cplx> slice, double t_mid, double dt) const {
  if (potential_.is_zero()) return;
  if (t_mid <= potential_.t_support_min() || t_mid >= potential_.t_support_max()) return;
  const std::vector<cplx> v = potential_.slice(grid_, t_mid);
  const cplx factor(0.0, -0.5 * dt);
  for (std::size_t j = 0; j < slice.size(); ++j) {
    if (v[j] != cplx{}) slice[j] *= std::exp(factor * v[j]);
  }
}

const std::vector<cplx>& Propagator::kinetic_phase(double dt) {
  for (const KineticCache& c : kinetic_) {
    if (c.dt == dt) return c.phase;
  }
  if (kinetic_.size() >= 4) kinetic_.erase(kinetic_.begin());
  KineticCache entry{dt, std::vector<cplx>(xi2_.size())};
  const double scale = 1.0 / static_cast<double>(plan_.size());
  for (std::size_t j = 0; j < xi2_.size(); ++j) entry.phase[j] = std::polar(scale, -dt * xi2_[j]);
  kinetic_.push_back(std::move(entry));
  return kinetic_.back().phase;
}

void Propagator::step(std::span<cplx> slice, double t, double dt) {
  const std::vector<cplx>& kinetic = kinetic_phase(dt);
  const double t_mid = t + 0.5 * dt;
  potential_half(slice, t_mid, dt);
  plan_.forward(slice.data());
  for (std::size_t j = 0; j < slice.size(); ++j) slice[j] *= kinetic[j];
  plan_.backward(slice.data());
  potential_half(slice, t_mid, dt);
}

void Propagator::laplacian(std::span<cplx> slice) const {
  const double scale = 1.0 / static_cast<double>(plan_.size());
  plan_.forward(slice.data());
  for (std::size_t j = 0; j < slice.size(); ++j) slice[j] *= xi2_[j] * scale;
  plan_.backward(slice.data());
}

void Propagator::derivative(std::span<cplx> slice, std::size_t axis) const {
  if (axis >= grid_.n) throw Error(ErrorKind::DimensionMismatch, "derivative axis out of range");
  const double scale = 1.0 / static_cast<double>(plan_.size());
  const std::size_t stride = ipow(grid_.N, grid_.n - 1 - axis);
  plan_.forward(slice.data());
  for (std::size_t j = 0; j < slice.size(); ++j) {
    const std::size_t m = (j / stride) % grid_.N;
    // The Nyquist mode has no consistent real derivative; drop it.
    const double xi = (m == grid_.N / 2) ? 0.0 : grid_.freq(m);
    slice[j] *= xi * scale;
  }
  plan_.backward(slice.data());
}

std::vector<cplx> step_evolve(std::span<const cplx> slice, const Grid& grid, double t, double dt,
                              const PotentialSpec& potential) {
  if (slice.size() != grid.slice_size()) throw Error(ErrorKind::DimensionMismatch, "slice size does not match grid");
  Propagator prop(grid, potential);
  std::vector<cplx> out(slice.begin(), slice.end());
  prop.step(out, t, dt);
  return out;
}

SpacetimeField evolve(std::span<const cplx> initial, const Grid& grid, const PotentialSpec& potential) {
  if (initial.size() != grid.slice_size()) {
    throw Error(ErrorKind::DimensionMismatch, "initial slice size does not match grid");
  }
  Propagator prop(grid, potential);
  SpacetimeField u(grid);
  std::copy(initial.begin(), initial.end(), u.slice(0).begin());
  const double dt = grid.dt();
  for (std::size_t k = 0; k < grid.M; ++k) {
    auto next = u.slice(k + 1);
    const auto cur = u.slice(k);
    std::copy(cur.begin(), cur.end(), next.begin());
    prop.step(next, grid.time(k), dt);
  }
  return u;
}

SpacetimeField apply_P(const SpacetimeField& u, const PotentialSpec& potential) {
  const Grid& g = u.grid;
  if (g.M < 4) throw Error(ErrorKind::DimensionMismatch, "apply_P needs at least 5 time slices");
  Propagator prop(g, potential);
  SpacetimeField out(g);
  const std::size_t M = g.M;
  const std::size_t size = g.slice_size();
  const cplx minus_i_over(0.0, -1.0 / (12.0 * g.dt()));

  for (std::size_t k = 0; k <= M; ++k) {
    auto o = out.slice(k);
    auto at = [&](std::size_t idx, std::size_t j) { return u.values[idx * size + j]; };
    for (std::size_t j = 0; j < size; ++j) {
      cplx d;
      if (k >= 2 && k + 2 <= M) {
        d = at(k - 2, j) - 8.0 * at(k - 1, j) + 8.0 * at(k + 1, j) - at(k + 2, j);
      } else if (k == 0) {
        d = -25.0 * at(0, j) + 48.0 * at(1, j) - 36.0 * at(2, j) + 16.0 * at(3, j) - 3.0 * at(4, j);
      } else if (k == 1) {
        d = -3.0 * at(0, j) - 10.0 * at(1, j) + 18.0 * at(2, j) - 6.0 * at(3, j) + at(4, j);
      } else if (k == M) {
        d = -(-25.0 * at(M, j) + 48.0 * at(M - 1, j) - 36.0 * at(M - 2, j) + 16.0 * at(M - 3, j) - 3.0 * at(M - 4, j));
      } else {
        d = -(-3.0 * at(M, j) - 10.0 * at(M - 1, j) + 18.0 * at(M - 2, j) - 6.0 * at(M - 3, j) + at(M - 4, j));
      }
      o[j] = minus_i_over * d;
    }
    std::vector<cplx> lap(u.slice(k).begin(), u.slice(k).end());
    prop.laplacian(lap);
    for (std::size_t j = 0; j < size; ++j) o[j] += lap[j];
    if (!potential.is_zero()) {
      const std::vector<cplx> v = potential.slice(g, g.time(k));
      const auto uk = u.slice(k);
      for (std::size_t j = 0; j < size; ++j) o[j] += v[j] * uk[j];
    }
  }
  return out;
}

SpacetimeField solve_retarded(const SpacetimeField& v, const PotentialSpec& potential) {
  check_support(v);
  const Grid& g = v.grid;
  Propagator prop(g, potential);
  SpacetimeField u(g);
  const double dt = g.dt();
  std::vector<cplx> cur(g.slice_size());
  std::vector<cplx> src(g.slice_size());
  const cplx idt(0.0, dt);
  for (std::size_t k = 0; k < g.M; ++k) {
    midpoint_source(v, k, src);
    const bool has_source = std::any_of(src.begin(), src.end(), [](const cplx& c) { return c != cplx{}; });
    const bool has_state = std::any_of(cur.begin(), cur.end(), [](const cplx& c) { return c != cplx{}; });
    if (has_state) prop.step(cur, g.time(k), dt);
    if (has_source) {
      const double t_mid = g.time(k) + 0.5 * dt;
      prop.step(src, t_mid, 0.5 * dt);
      for (std::size_t j = 0; j < cur.size(); ++j) cur[j] += idt * src[j];
    }
    std::copy(cur.begin(), cur.end(), u.slice(k + 1).begin());
  }
  return u;
}

SpacetimeField solve_advanced(const SpacetimeField& v, const PotentialSpec& potential) {
  check_support(v);
  const Grid& g = v.grid;
  Propagator prop(g, potential);
  SpacetimeField u(g);
  const double dt = g.dt();
  std::vector<cplx> cur(g.slice_size());
  std::vector<cplx> src(g.slice_size());
  const cplx idt(0.0, dt);
  for (std::size_t k = g.M; k > 0; --k) {
    midpoint_source(v, k - 1, src);
    const bool has_source = std::any_of(src.begin(), src.end(), [](const cplx& c) { return c != cplx{}; });
    const bool has_state = std::any_of(cur.begin(), cur.end(), [](const cplx& c) { return c != cplx{}; });
    if (has_state) prop.step(cur, g.time(k), -dt);
    if (has_source) {
      const double t_mid = g.time(k) - 0.5 * dt;
      prop.step(src, t_mid, -0.5 * dt);
      for (std::size_t j = 0; j < cur.size(); ++j) cur[j] -= idt * src[j];
    }
    std::copy(cur.begin(), cur.end(), u.slice(k - 1).begin());
  }
  return u;
}

}  // namespace scatlab
