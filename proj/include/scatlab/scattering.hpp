#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "scatlab/grid.hpp"
#include "scatlab/phase_space.hpp"

namespace scatlab {

/// Data f on the frequency lattice placed onto the FFT layout of `grid`,
/// scaled so that one unnormalized inverse FFT of e^{-it|xi|^2} times the
/// result gives the free solution at time t. Requires data.dzeta == pi/L and
/// Np <= N; throws DimensionMismatch otherwise.
std::vector<cplx> data_to_spectrum(const DataFunction& f, const Grid& grid);

/// Free solution u(z, t) = (2 pi)^{-n} int e^{i z.xi - i t |xi|^2} f(xi) dxi
/// on every slice of the grid.
SpacetimeField free_poisson(const DataFunction& f, const Grid& grid);

struct ExtractionOptions {
  /// Number of terms in the tail model c0 + c1/t + ... .
  std::size_t fit_terms = 4;
  /// Fraction of the sampled times (largest |t|) used in the fit.
  double tail_fraction = 1.0 / 3.0;
};

struct ResidualPoint {
  double t = 0.0;
  double deviation = 0.0;
};

struct ExtractionReport {
  DataFunction limit;
  std::vector<double> times_used;
  std::vector<double> fit_times;
  /// Negative slope of log |f_t - limit| against log |t|; NaN when undefined.
  double fitted_rate = 0.0;
  std::vector<ResidualPoint> residual_curve;
};

/// Rescaled profile (4 pi i t)^{n/2} e^{-it|zeta|^2} u(2 t zeta, t) on the
/// data grid, with u evaluated by trigonometric interpolation. t is snapped
/// to the nearest grid slice. Throws WindowTooSmall if 2|t| zeta_max > L.
DataFunction rescaled_profile(const SpacetimeField& u, double t, const DataGrid& target);

/// Estimates the t -> +/- infinity limit of the rescaled profile from the
/// times in t_list (which must all carry the requested sign).
ExtractionReport extract_data(const SpacetimeField& u, RadialSign sign, std::span<const double> t_list,
                              const DataGrid& target, const ExtractionOptions& opts = {});

/// Grid times with |t| in [t_min_fraction * T, T], where T is the largest
/// admissible |t| of the requested sign, thinned to at most max_count.
std::vector<double> default_extraction_times(const Grid& grid, RadialSign sign, const DataGrid& target,
                                             std::size_t max_count = 48, double t_min_fraction = 1.0 / 3.0);

/// extract_data over default_extraction_times.
ExtractionReport extract_data(const SpacetimeField& u, RadialSign sign, const DataGrid& target,
                              const ExtractionOptions& opts = {});

/// Minus: P0 f - R_+ (V P0 f), the solution with incoming data f.
/// Plus:  P0 f - R_- (V P0 f), the solution with outgoing data f.
SpacetimeField perturbed_poisson(const DataFunction& f, RadialSign sign, const Grid& grid,
                                 const PotentialSpec& potential);

/// Outgoing data of the solution with incoming data f_minus.
ExtractionReport scattering_report(const DataFunction& f_minus, const Grid& grid, const PotentialSpec& potential,
                                   const ExtractionOptions& opts = {});
DataFunction scattering_matrix(const DataFunction& f_minus, const Grid& grid, const PotentialSpec& potential,
                               const ExtractionOptions& opts = {});

struct PairingData {
  DataFunction f1_plus;
  DataFunction f1_minus;
  DataFunction f2_plus;
  DataFunction f2_minus;
};

struct PairingResult {
  cplx lhs;
  cplx rhs;
  /// |lhs - rhs| / max(|lhs|, |rhs|), zero when both vanish.
  double relative_discrepancy() const;
};

/// lhs = int (u1 conj(P u2) - P u1 conj(u2)) dz dt (trapezoid in t),
/// rhs = i (2 pi)^{-n} int (f1+ conj(f2+) - f1- conj(f2-)) dzeta.
PairingResult pairing_check(const SpacetimeField& u1, const SpacetimeField& Pu1, const SpacetimeField& u2,
                            const SpacetimeField& Pu2, const PairingData& data);
/// Same, with P u computed by apply_P.
PairingResult pairing_check(const SpacetimeField& u1, const SpacetimeField& u2, const PairingData& data,
                            const PotentialSpec& potential);

/// Modulated Gaussian test function in (z, t) used for weak-form comparisons.
struct WeakTestFunction {
  std::vector<double> center_z;
  double center_t = 0.0;
  double width_z = 1.0;
  double width_t = 1.0;
  std::vector<double> xi;
  double tau = 0.0;

  cplx operator()(std::span<const double> z, double t) const;
};

std::vector<WeakTestFunction> make_weak_test_functions(const Grid& grid, std::size_t count, std::uint64_t seed);

/// <u, phi> = int u conj(phi) dz dt (trapezoid in t).
cplx weak_pairing(const SpacetimeField& u, const WeakTestFunction& phi);

struct PPStarResult {
  SpacetimeField left;
  SpacetimeField right;
  std::vector<cplx> weak_left;
  std::vector<cplx> weak_right;
  /// ||left - right|| / ||right|| over the whole grid.
  double field_discrepancy = 0.0;
  /// Relative l2 discrepancy of the weak-form values.
  double weak_discrepancy = 0.0;
};

/// left  = P_-(i (2 pi)^{-n} L_-(R_- v)), i.e. P_- applied to P_-^* v.
/// right = i (2 pi)^{-n} (R_- - R_+) v.
PPStarResult pp_star_check(const SpacetimeField& v, const PotentialSpec& potential, const DataGrid& target,
                           std::span<const WeakTestFunction> tests, const ExtractionOptions& opts = {});

}  // namespace scatlab
