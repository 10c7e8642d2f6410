#pragma once

#include <span>
#include <vector>

#include "scatlab/fft.hpp"
#include "scatlab/grid.hpp"

namespace scatlab {

/// Split-step propagator for i du/dt = (Delta + V(z, t)) u on a periodic box.
/// Holds the FFT plan and the |xi|^2 table. Kinetic phases are cached per
/// step size, so a Propagator must not be shared between threads.
class Propagator {
 public:
  Propagator(const Grid& grid, const PotentialSpec& potential);

  const Grid& grid() const { return grid_; }
  const PotentialSpec& potential() const { return potential_; }

  /// One Strang step from t to t + dt, in place. dt may be negative, which
  /// runs the evolution backwards.
  void step(std::span<cplx> slice, double t, double dt);

  /// Spectral Laplacian (symbol |xi|^2), in place.
  void laplacian(std::span<cplx> slice) const;
  /// D_{z_axis} = -i d/dz_axis, spectrally, in place.
  void derivative(std::span<cplx> slice, std::size_t axis) const;

  const std::vector<double>& xi_squared() const { return xi2_; }
  const FftPlan& plan() const { return plan_; }

 private:
  void potential_half(std::span<cplx> slice, double t_mid, double dt) const;

  Grid grid_;
  PotentialSpec potential_;
  FftPlan plan_;
  std::vector<double> xi2_;
  const std::vector<cplx>& kinetic_phase(double dt);

  struct KineticCache {
    double dt;
    std::vector<cplx> phase;
  };
  std::vector<KineticCache> kinetic_;
};

/// One split-step from t to t + dt.
std::vector<cplx> step_evolve(std::span<const cplx> slice, const Grid& grid, double t, double dt,
                              const PotentialSpec& potential);

/// Evolves `initial` (the slice at grid.t0) through all M steps.
SpacetimeField evolve(std::span<const cplx> initial, const Grid& grid, const PotentialSpec& potential);

/// (D_t + Delta + V) u with a fourth-order finite difference in t. Slices 0,
/// 1, M-1 and M use one-sided fourth-order stencils. Requires M >= 4.
SpacetimeField apply_P(const SpacetimeField& u, const PotentialSpec& potential);

/// Relative size below which v counts as vanishing on a boundary slice.
inline constexpr double kSupportTolerance = 1e-14;

/// Forward solution u(t) = i int_{t0}^{t} U(t, s) v(s) ds by midpoint
/// Duhamel marching. Throws SupportViolation if v does not vanish on the
/// first and last time slices.
SpacetimeField solve_retarded(const SpacetimeField& v, const PotentialSpec& potential);

/// Backward solution, marching from t1 down to t0.
SpacetimeField solve_advanced(const SpacetimeField& v, const PotentialSpec& potential);

}  // namespace scatlab
