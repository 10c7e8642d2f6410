#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "scatlab/grid.hpp"
#include "scatlab/phase_space.hpp"

namespace scatlab {

enum class GeneratorKind {
  Identity,
  Rotation,       // z_i D_{z_j} - z_j D_{z_i}
  GalileanHalf,   // t D_{z_i} - z_i / 2
  Galilean2,      // 2 t D_{z_i} - z_i
  Translation,    // D_{z_i}
  FibreElliptic,  // Fourier multiplier (1 + |zeta|^4 + tau^2)^{1/4}
  DataRotation,   // xi_i D_{xi_j} - xi_j D_{xi_i}
  DataDeriv,      // D_{xi_i}
  DataMult,       // xi_i
};

struct GeneratorId {
  GeneratorKind kind = GeneratorKind::Identity;
  std::size_t i = 0;
  std::size_t j = 0;

  static GeneratorId identity() { return {}; }
  static GeneratorId rotation(std::size_t i, std::size_t j) { return {GeneratorKind::Rotation, i, j}; }
  static GeneratorId galilean_half(std::size_t i) { return {GeneratorKind::GalileanHalf, i, 0}; }
  static GeneratorId galilean2(std::size_t i) { return {GeneratorKind::Galilean2, i, 0}; }
  static GeneratorId translation(std::size_t i) { return {GeneratorKind::Translation, i, 0}; }
  static GeneratorId fibre_elliptic() { return {GeneratorKind::FibreElliptic, 0, 0}; }
  static GeneratorId data_rotation(std::size_t i, std::size_t j) { return {GeneratorKind::DataRotation, i, j}; }
  static GeneratorId data_deriv(std::size_t i) { return {GeneratorKind::DataDeriv, i, 0}; }
  static GeneratorId data_mult(std::size_t i) { return {GeneratorKind::DataMult, i, 0}; }

  /// Identity acts on both kinds of object.
  bool acts_on_spacetime() const;
  bool acts_on_data() const;
  std::string name() const;
};

/// Time taper with raised-cosine flanks, each covering `flank_fraction` of
/// the window. A fraction of 0 gives all ones.
std::vector<double> tukey_window(std::size_t count, double flank_fraction);

struct TaperOptions {
  double flank_fraction = 0.1;
};

/// Derivatives are spectral, multiplications pointwise. FibreElliptic tapers
/// u in time before the (n+1)-dimensional transform. Throws
/// DimensionMismatch for data generators or out-of-range indices.
SpacetimeField apply_generator(const GeneratorId& g, const SpacetimeField& u, const TaperOptions& taper = {});
DataFunction apply_generator(const GeneratorId& g, const DataFunction& f);

/// Identity, DataRotation(i<j), DataDeriv(i), DataMult(i).
std::vector<GeneratorId> data_alphabet(std::size_t n);

/// sqrt of the sum of ||A_1...A_j f||^2 over all words of length j <= k in
/// data_alphabet. Throws ConfigInvalid for k < 0 or k > 3.
double data_norm_Wk(const DataFunction& f, int k);

/// || <Z>^l F^{-1}[(1 + |zeta|^4 + tau^2)^{s/4} F(w u)] ||_{L^2(dz dt)} with w
/// the Tukey taper in t; the time period of the transform is (M+1) dt.
double parabolic_norm(const SpacetimeField& u, double s, double l, const TaperOptions& taper = {});

struct NormOrder {
  double s = 0.0;
  double l = 0.0;
  int kappa = 0;
  int k = 0;
  /// Throws ConfigInvalid unless kappa, k >= 0 and kappa + k <= 3.
  void validate() const;
};

/// Identity, Rotation (n >= 2), GalileanHalf, FibreElliptic.
std::vector<GeneratorId> module_alphabet(std::size_t n);

struct ModuleNormResult {
  double value = 0.0;
  /// kappa > 0 was requested; the sign-specific generators are not
  /// available, so words of length kappa + k over module_alphabet were used.
  bool alphabet_fallback = false;
  std::size_t words = 0;
  double flank_fraction = 0.0;
};

ModuleNormResult module_norm(const SpacetimeField& u, const NormOrder& order, RadialSign sign,
                             const TaperOptions& taper = {});

struct ThresholdResult {
  double slope = 0.0;
  /// I(T) vanished or was not positive for some T; slope is NaN.
  bool degenerate = false;
  std::vector<double> T;
  std::vector<double> integrals;
};

/// I(T) = int_1^T int <(z,t)>^{2l} |u|^2 dz dt, trapezoid over the slices in
/// [1, T]. Throws WindowTooSmall if 1 or T lies outside the grid window.
double threshold_integral(const SpacetimeField& u, double l, double T);

/// Least-squares slope of log I(T) against log T.
ThresholdResult threshold_scan(const SpacetimeField& u, double l, std::span<const double> T_list);

struct SplitOptions {
  std::size_t blocks = 8;
};

struct SplitResult {
  SpacetimeField plus;
  SpacetimeField minus;
  /// ||plus + minus - u|| / ||u||.
  double reconstruction_residual = 0.0;
};

/// Windowed-Fourier partition: each slice is cut by raised-cosine spatial
/// blocks and every piece is multiplied in frequency by chi(zhat_b . zetahat)
/// for plus and chi(-zhat_b . zetahat) for minus, chi(x) = (1 + sin(pi x/2))/2.
SplitResult microlocal_split(const SpacetimeField& u, const SplitOptions& opts = {});

/// Data generator intertwined with g by the free Poisson operator. Throws
/// NoCounterpart for generators without one.
GeneratorId data_counterpart(const GeneratorId& g);

/// ||g P0 f - P0 (counterpart(g) f)|| / ||g P0 f|| over the grid.
double commutation_residual(const GeneratorId& g, const DataFunction& f, const Grid& grid);

}  // namespace scatlab
