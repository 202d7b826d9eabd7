#pragma once

// Bound states of the reduced two-dimensional problem (m = 0, beta' = 0):
// zeros of h(omega) = F(a*, b*; 1; (2 omega - 1) / (2 omega)), the
// large-momentum asymptotic spectrum and a comparison of the two.

#include <string>
#include <vector>

#include "mlqm/core.hpp"

namespace mlqm {

enum class GridKind { linear, logarithmic };

struct ScanConfig {
  double omega_min = 1e-8;
  double omega_max = 5.0;
  GridKind grid = GridKind::logarithmic;
  int grid_points = 2000;
  double root_tol = 1e-10;
  double exclusion_half_width = kDefaultExclusionHalfWidth;

  /// Throws DomainError naming the offending field.
  void validate() const;
};

/// Grid nodes of cfg, ascending, with nodes inside the exclusion band removed.
/// The two band edges are added unless include_band_edges is false.
std::vector<double> scan_grid(const ScanConfig& cfg, bool include_band_edges = true);

struct BoundState {
  int index = 0;
  double omega = 0.0;
  double energy = 0.0;    // -omega / (M omega1)
  double residual = 0.0;  // |h(omega)|
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

struct ScanResult {
  std::vector<BoundState> states;  // ground state (largest omega) first
  std::vector<std::string> warnings;
};

/// h(omega) from the closed form of the reduced parameters.
double quantization_h(double omega, double kappa, double exclusion_half_width = kDefaultExclusionHalfWidth);

/// h(omega) through the full chain: dipole Heun map for m = 0, reduction to
/// 2F1 and evaluation at xi = 1. Requires beta' = 0.
double quantization_h(double omega, double kappa, const DeformationParams& d,
                      double exclusion_half_width = kDefaultExclusionHalfWidth);

/// All sign changes of h on the scan grid, refined by bisection to a relative
/// width of 1e-14 followed by one secant step. Energies use mass and d.
ScanResult find_bound_states(double kappa, const ScanConfig& cfg = {}, double mass = 1.0,
                             const DeformationParams& d = DeformationParams(1.0, 0.0));

/// phi = arg[Gamma(i nu) / (Gamma(1 + i nu / 2) Gamma(i nu / 2))], nu = sqrt(-4 kappa).
double asymptotic_phase(double kappa);

struct AsymptoticLevel {
  int n = 0;
  double energy = 0.0;
  double omega = 0.0;  // M beta |E_n|
  bool valid = false;  // omega < validity threshold
};

/// E_n = -(1 / (2 M beta)) exp{(2 / nu) [phi - (n + 1/2) pi]} for n = 0 .. n_max.
/// Throws DomainError for kappa >= 0.
std::vector<AsymptoticLevel> asymptotic_spectrum(double kappa, double beta, double mass, int n_max,
                                                 double validity_threshold = 0.05);

struct LevelComparison {
  int n = 0;
  double omega_numeric = 0.0;  // NaN if no root was paired with this level
  double omega_asymptotic = 0.0;
  double rel_error = 0.0;      // |numeric - asymptotic| / numeric, NaN if unpaired
  bool valid = false;          // asymptotic level inside the validity window
};

struct SpectrumComparison {
  std::vector<LevelComparison> levels;
  std::vector<std::string> warnings;
};

/// Pairs the first n_levels asymptotic levels with numeric roots of h. Each
/// level takes the root closest in log omega, within half a level spacing.
SpectrumComparison compare_spectra(double kappa, double beta, double mass, int n_levels,
                                   double validity_threshold = 0.05);

}  // namespace mlqm
