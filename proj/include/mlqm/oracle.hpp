#pragma once

// Direct integration of the canonical Heun equation, used to check the local
// series, to continue it past its disc of convergence, and to test whether a
// quantization root has the bound-state behaviour at large momentum.

#include <span>
#include <string>
#include <vector>

#include "mlqm/specfun.hpp"

namespace mlqm {

struct HeunState {
  cplx f;
  cplx df;
};

struct OdeOptions {
  // Half-width of the band kept clear around xi = 1. Around xi = 0 and xi0 the
  // band is min(guard_half_width, 0.05 * min(1, |xi0|)) so that the default
  // Frobenius start always lies outside it.
  double guard_half_width = 1e-4;
  int max_steps = 1'000'000;
};

struct StepStatistics {
  double max_error_ratio = 0.0;  // largest accepted local error / tolerance
  int accepted = 0;
  int rejected = 0;
};

struct OdeSolution {
  std::vector<double> grid_xi;     // accepted step ends, including the start
  std::vector<HeunState> values;
  StepStatistics stats;
};

/// 0.1 * min(1, |xi0|)
double default_frobenius_start(const HeunParams& hp);

/// Series value and derivative at xi, evaluated with tolerance tol.
HeunState frobenius_start(const HeunParams& hp, double xi, double tol);

/// Adaptive Dormand-Prince 5(4) integration from xi_start (inside the series
/// disc; initial data from the series at tol / 100) to xi_end.
/// Throws DomainError for an interval touching a guard band and
/// ConvergenceError if the step size collapses.
OdeSolution integrate_heun(const HeunParams& hp, double xi_start, double xi_end, double tol,
                           const OdeOptions& opts = {});

/// As integrate_heun from arbitrary initial data; xi_end may lie below xi_start.
OdeSolution integrate_heun_from(const HeunParams& hp, double xi_start, HeunState start, double xi_end,
                                double tol, const OdeOptions& opts = {});

/// Solution values at the given points, which must be monotone in the direction
/// of travel from xi_start. Steps are clipped to land on every point.
std::vector<HeunState> integrate_heun_at(const HeunParams& hp, double xi_start, HeunState start,
                                         std::span<const double> points, double tol,
                                         const OdeOptions& opts = {});

struct RootValidation {
  bool pass = false;
  bool inconclusive = false;
  double measured_exponent = 0.0;  // local power of (1 - xi) in p^2 phi near xi = 1
  double probe_xi = 0.0;
  std::string detail;
};

/// Integrates the reduced (m = 0, beta' = 0) equation to xi = 1 - 1e-5 and
/// checks that p^2 phi vanishes there like a positive power of (1 - xi).
RootValidation validate_root(double omega, double kappa, double tol);

}  // namespace mlqm
