#pragma once

// Physical inputs -> canonical Heun parameters, the hypergeometric reduction
// of the two-dimensional m = 0, beta' = 0 case, momentum-space wavefunctions
// and their norm under the deformed scalar product.
//
// For angular momentum L != 0 the general parameter map is experimental: the
// resulting function does not satisfy the radial equation to better than a
// few per cent. L = 0, any dimension and any beta' is exact.

#include <optional>
#include <span>
#include <vector>

#include "mlqm/core.hpp"
#include "mlqm/specfun.hpp"

namespace mlqm {

/// The square root nu-tilde entering a and b. Its square is real; the root
/// is either real and nonnegative or purely imaginary with positive imaginary part.
struct NuTilde {
  cplx value;
  double squared = 0.0;
};

NuTilde nu_tilde_general(const SystemSpec& s, const DeformationParams& d, const DimensionlessEnergy& omega);

/// N-dimensional map. Throws SingularParameterError inside the band around omega = 1/2.
HeunParams map_heun_general(const SystemSpec& s, const DeformationParams& d, const DimensionlessEnergy& omega,
                            double exclusion_half_width = kDefaultExclusionHalfWidth);

/// Two-dimensional dipole map, written in the m / omega4 form.
HeunParams map_heun_dipole(int m, const DeformationParams& d, const DimensionlessEnergy& omega, double kappa,
                           double exclusion_half_width = kDefaultExclusionHalfWidth);

/// Parameters of F(a, b; c; xi / xi0).
struct HypergeometricTriple {
  cplx a, b, c;
};

/// Accepts when |e| < 1e-10 and |q + a b| < 1e-10 (1 + |a b|); otherwise the
/// equation stays in Heun form and nullopt is returned.
std::optional<HypergeometricTriple> reduce_to_hypergeometric(const HeunParams& hp);

/// phi(xi) = A xi^exponent_xi (1 - xi)^exponent_one_minus_xi H(xi)
class WavefunctionSpec {
 public:
  static WavefunctionSpec build(const SystemSpec& s, const DeformationParams& d, const DimensionlessEnergy& omega,
                                double normalization = 1.0,
                                double exclusion_half_width = kDefaultExclusionHalfWidth);

  double exponent_xi() const { return exponent_xi_; }
  double exponent_one_minus_xi() const { return exponent_one_minus_xi_; }
  const HeunParams& heun() const { return heun_; }
  double normalization() const { return normalization_; }
  const std::optional<HypergeometricTriple>& reduced() const { return reduced_; }

  WavefunctionSpec with_normalization(double a) const;

 private:
  WavefunctionSpec(double ex, double ex1, HeunParams hp, double a, std::optional<HypergeometricTriple> red)
      : exponent_xi_(ex), exponent_one_minus_xi_(ex1), heun_(hp), normalization_(a), reduced_(red) {}

  double exponent_xi_;
  double exponent_one_minus_xi_;
  HeunParams heun_;
  double normalization_;
  std::optional<HypergeometricTriple> reduced_;
};

struct WavefunctionOptions {
  double tol = 1e-12;
  // Outside the series disc the Heun factor is continued by ODE integration.
  bool allow_continuation = true;
  // Closest approach to xi = 1 for the continued solution.
  double continuation_guard = 1e-6;
};

/// phi at the xi of momentum p. The reduced form is evaluated through 2F1 on
/// the whole half-line; otherwise the series is used inside the disc and ODE
/// continuation beyond it. Throws DomainError outside the disc when
/// continuation is disabled.
double wavefunction_momentum(const WavefunctionSpec& ws, double p, const DeformationParams& d,
                             const WavefunctionOptions& opts = {});

/// phi on a grid of xi in [0, 1), evaluated in one continuation pass.
/// The grid must be nondecreasing.
std::vector<double> wavefunction_on_xi_grid(const WavefunctionSpec& ws, std::span<const double> xi,
                                            const WavefunctionOptions& opts = {});

struct NormResult {
  double norm = 0.0;     // fine-resolution value
  double coarse = 0.0;   // value at half the nodes per panel
  double tail = 0.0;     // analytic contribution of the last strip below xi = 1
  bool converged = false;  // |norm - coarse| <= 1e-6 norm
};

/// sqrt of the integral of p^(N-1) [1 + omega1 p^2]^(alpha - 1) phi^2 over p,
/// with the angular part normalized to one. Throws DomainError if the
/// large-momentum tail is not integrable.
NormResult weighted_norm(const WavefunctionSpec& ws, const SystemSpec& s, const DeformationParams& d,
                         const WavefunctionOptions& opts = {});

/// Copy of ws rescaled so that weighted_norm is one.
WavefunctionSpec normalized(const WavefunctionSpec& ws, const SystemSpec& s, const DeformationParams& d,
                            const WavefunctionOptions& opts = {});

}  // namespace mlqm
