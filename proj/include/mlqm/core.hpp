#pragma once

// Domain types and derived quantities for the inverse-square potential in
// N dimensions with a minimal length. Natural units, hbar = 1.

#include <cmath>
#include <numbers>

#include "mlqm/errors.hpp"

namespace mlqm {

inline constexpr double kDefaultExclusionHalfWidth = 1e-6;

/// Parameters of the deformed Heisenberg algebra,
///   [X_i, P_j] = i ((1 + beta P^2) delta_ij + beta' P_i P_j).
/// Both are inverse momenta squared; their sum must be strictly positive.
class DeformationParams {
 public:
  DeformationParams(double beta, double beta_prime);

  double beta() const { return beta_; }
  double beta_prime() const { return beta_prime_; }
  /// omega1 = beta + beta'
  double omega1() const { return beta_ + beta_prime_; }
  /// omega4 = beta / omega1, in [0, 1]
  double omega4() const { return beta_ / omega1(); }

 private:
  double beta_;
  double beta_prime_;
};

/// Dimension, angular quantum number, mass and dimensionless coupling
/// kappa = M delta / 2 of the potential V(R) = delta / R^2.
/// For N = 2 the angular number is |m|.
class SystemSpec {
 public:
  SystemSpec(int dimension, int angular, double mass, double kappa);

  int dimension() const { return dimension_; }
  int angular() const { return angular_; }
  double mass() const { return mass_; }
  double kappa() const { return kappa_; }

  /// L^2 = l (l + N - 2), computed in integer arithmetic.
  long long angular_casimir() const {
    return static_cast<long long>(angular_) * (angular_ + dimension_ - 2);
  }

 private:
  int dimension_;
  int angular_;
  double mass_;
  double kappa_;
};

/// A point dipole near a cosmic string with deficit parameter alpha = 1 - 4 G mu.
struct DipoleConfig {
  double theta = 0.0;           // angle between dipole moment and string, [0, pi/2]
  double alpha_string = 0.5;    // (0, 1)
  double dipole_moment = 1.0;   // > 0
  double mass = 1.0;            // > 0
};

/// Exponents of the factorisation phi = (1-z)^lambda (1+z)^lambda' f(z)
/// on the regular branch (lambda_-, lambda'_+).
struct TransformExponents {
  double lambda_minus = 0.0;
  double lambda_prime_plus = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
};

/// omega = -M omega1 E; positive for bound states.
class DimensionlessEnergy {
 public:
  explicit DimensionlessEnergy(double omega);

  double value() const { return omega_; }

  /// Throws SingularParameterError when |1 - 2 omega| < 2 * half_width.
  void require_outside_exclusion(double half_width = kDefaultExclusionHalfWidth) const;

 private:
  double omega_;
};

/// (Delta X)_min = sqrt(N beta + beta').
double minimal_length(const DeformationParams& d, int dimension);

/// kappa with 4 kappa = M (1 - alpha^2) D^2 cos(2 theta) / (24 pi alpha^2).
double dipole_coupling(const DipoleConfig& cfg);

/// xi = omega1 p^2 / (omega1 p^2 + 1), mapping [0, inf) onto [0, 1).
double xi_of_p(double p, const DeformationParams& d);

/// Inverse of xi_of_p on [0, 1).
double p_of_xi(double xi, const DeformationParams& d);

/// z = (omega1 p^2 - 1) / (omega1 p^2 + 1) in [-1, 1); xi = (z + 1) / 2.
double z_of_p(double p, const DeformationParams& d);

TransformExponents derive_exponents(const SystemSpec& s, const DeformationParams& d);

/// Exponent alpha of the scalar-product weight [1 + omega1 p^2]^(alpha - 1)
/// for the gamma = 0 realisation of the position operator.
double measure_exponent(int dimension, const DeformationParams& d);

/// E = -omega / (M omega1)
double energy_from_omega(double omega, double mass, const DeformationParams& d);
double omega_from_energy(double energy, double mass, const DeformationParams& d);

}  // namespace mlqm
