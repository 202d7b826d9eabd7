#pragma once

// Special-function kernels: complex log-gamma, Gauss 2F1 on (-inf, 1) and the
// local Heun function about xi = 0.

#include <complex>
#include <vector>

#include "mlqm/errors.hpp"

namespace mlqm {

using cplx = std::complex<double>;

/// Result of a series evaluation.
struct SeriesValue {
  cplx value{1.0, 0.0};
  int terms_used = 0;
  double truncation_estimate = 0.0;
  bool converged = true;
};

struct SeriesOptions {
  double tol = 1e-16;
  int max_terms = 10000;
};

/// log Gamma(z), analytic in the plane cut along the negative real axis
/// (the branch used by mpmath.loggamma and scipy.special.loggamma). On the
/// negative real axis the value is the limit from above.
///
/// Throws DomainError at the poles z = 0, -1, -2, ...
cplx log_gamma(cplx z);

/// Gauss hypergeometric function 2F1(a, b; c; z) for real z < 1.
///
/// z in [0, 0.9]: direct series. z < 0: Pfaff transformation onto
/// w = z / (z - 1) in (0, 1). Whenever the (possibly transformed) argument
/// exceeds 0.9 the 1 - z connection formula is applied. For c - a - b an
/// exact integer the logarithmic form is used; when it is merely close to an
/// integer the smooth parts are interpolated from eight shifted parameter sets.
///
/// Throws DomainError when c is a nonpositive integer or z >= 1.
SeriesValue hyp2f1(cplx a, cplx b, cplx c, double z, const SeriesOptions& opts = {});

/// Parameters of the canonical Heun equation
///   f'' + (c/xi + e/(xi-1) + d/(xi-xi0)) f' + (a b xi + q) / (xi (xi-1) (xi-xi0)) f = 0
/// constrained by a + b + 1 = c + d + e.
class HeunParams {
 public:
  HeunParams(double xi0, cplx q, cplx a, cplx b, cplx c, cplx d, cplx e);

  double xi0() const { return xi0_; }
  cplx q() const { return q_; }
  cplx a() const { return a_; }
  cplx b() const { return b_; }
  cplx c() const { return c_; }
  cplx d() const { return d_; }
  cplx e() const { return e_; }

  /// a + b + 1 - (c + d + e)
  cplx fuchsian_defect() const { return a_ + b_ + 1.0 - (c_ + d_ + e_); }

  /// min(1, |xi0|): distance from the origin to the nearest other finite singularity.
  double series_radius() const;

 private:
  double xi0_;
  cplx q_, a_, b_, c_, d_, e_;
};

inline constexpr double kFuchsianTolerance = 1e-10;
inline constexpr double kDefaultSafeRadius = 0.95;

/// Heun series coefficient stored as mantissa * 2^exponent so that the
/// sequence can run past the double range when |xi0| is small.
struct ScaledCoefficient {
  cplx mantissa;
  int exponent = 0;

  cplx value() const { return {std::ldexp(mantissa.real(), exponent), std::ldexp(mantissa.imag(), exponent)}; }
};

/// C_0 ... C_{n_max} of the local Heun series.
std::vector<ScaledCoefficient> heun_coefficients(const HeunParams& hp, int n_max);

struct HeunLocalOptions {
  double safe_radius = kDefaultSafeRadius;
  int max_terms = 10000;
};

/// Local Heun function H(xi0, q, a, b, c, d; xi) by partial summation.
/// Stops once three consecutive terms are below tol * |partial sum|.
/// Throws DomainError if |xi| >= safe_radius * series_radius().
SeriesValue heun_local(const HeunParams& hp, double xi, double tol, const HeunLocalOptions& opts = {});

struct HeunLocalDerivative {
  SeriesValue value;
  cplx derivative;
};

/// As heun_local, together with dH/dxi from the term-wise derivative.
HeunLocalDerivative heun_local_with_derivative(const HeunParams& hp, double xi, double tol,
                                               const HeunLocalOptions& opts = {});

}  // namespace mlqm
