#include "mlqm/core.hpp"

#include <string>

namespace mlqm {

DeformationParams::DeformationParams(double beta, double beta_prime)
    : beta_(beta), beta_prime_(beta_prime) {
  if (!(beta >= 0.0) || !(beta_prime >= 0.0) || !std::isfinite(beta) ||
      !std::isfinite(beta_prime)) {
    throw DomainError("DeformationParams: beta and beta' must be finite and nonnegative");
  }
  if (!(beta + beta_prime > 0.0)) {
    throw DomainError("DeformationParams: beta + beta' must be positive");
  }
}

SystemSpec::SystemSpec(int dimension, int angular, double mass, double kappa)
    : dimension_(dimension), angular_(angular < 0 ? -angular : angular), mass_(mass), kappa_(kappa) {
  if (dimension < 2) throw DomainError("SystemSpec: dimension must be >= 2");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("SystemSpec: mass must be positive");
  if (!std::isfinite(kappa)) throw DomainError("SystemSpec: kappa must be finite");
}

DimensionlessEnergy::DimensionlessEnergy(double omega) : omega_(omega) {
  if (!std::isfinite(omega)) throw DomainError("DimensionlessEnergy: omega must be finite");
}

void DimensionlessEnergy::require_outside_exclusion(double half_width) const {
  if (std::abs(omega_ - 0.5) < half_width) {
    throw SingularParameterError("omega = " + std::to_string(omega_) +
                                 " lies in the exclusion band around 1/2");
  }
}

double minimal_length(const DeformationParams& d, int dimension) {
  if (dimension < 1) throw DomainError("minimal_length: dimension must be >= 1");
  return std::sqrt(dimension * d.beta() + d.beta_prime());
}

double dipole_coupling(const DipoleConfig& cfg) {
  if (!(cfg.alpha_string > 0.0 && cfg.alpha_string < 1.0)) {
    throw DomainError("dipole_coupling: alpha must lie in (0, 1)");
  }
  if (!(cfg.theta >= 0.0 && cfg.theta <= std::numbers::pi / 2)) {
    throw DomainError("dipole_coupling: theta must lie in [0, pi/2]");
  }
  if (!(cfg.dipole_moment > 0.0) || !(cfg.mass > 0.0)) {
    throw DomainError("dipole_coupling: dipole moment and mass must be positive");
  }
  const double a2 = cfg.alpha_string * cfg.alpha_string;
  // cos(2 theta) written as a sine about pi/4 so that kappa(pi/4 + t) = -kappa(pi/4 - t)
  // holds to rounding.
  const double c2 = std::sin(2.0 * (std::numbers::pi / 4 - cfg.theta));
  const double four_kappa = cfg.mass * (1.0 - a2) * cfg.dipole_moment * cfg.dipole_moment /
                            (24.0 * std::numbers::pi * a2) * c2;
  return four_kappa / 4.0;
}

double xi_of_p(double p, const DeformationParams& d) {
  if (!(p >= 0.0)) throw DomainError("xi_of_p: momentum must be nonnegative");
  const double s = d.omega1() * p * p;
  if (s <= 1.0) return s / (s + 1.0);
  return 1.0 / (1.0 + 1.0 / s);
}

double p_of_xi(double xi, const DeformationParams& d) {
  if (!(xi >= 0.0 && xi < 1.0)) throw DomainError("p_of_xi: xi must lie in [0, 1)");
  return std::sqrt(xi / (d.omega1() * (1.0 - xi)));
}

double z_of_p(double p, const DeformationParams& d) { return 2.0 * xi_of_p(p, d) - 1.0; }

TransformExponents derive_exponents(const SystemSpec& s, const DeformationParams& d) {
  const double n = s.dimension();
  const double lsq = static_cast<double>(s.angular_casimir());
  const double w4 = d.omega4();
  // (N beta + beta') / omega1 = 1 + (N - 1) omega4
  const double r1 = (n * d.beta() + d.beta_prime()) / d.omega1();
  // (N_+ beta + 2 beta') / omega1 = 2 + (N - 1) omega4
  const double r2 = ((n + 1.0) * d.beta() + 2.0 * d.beta_prime()) / d.omega1();

  TransformExponents ex;
  ex.delta1 = std::sqrt(r1 * r1 + 4.0 * w4 * w4 * lsq);
  const long long half_twice = s.dimension() - 2;  // 2 (N/2 - 1)
  // Delta2^2 = ((N-2)^2 + 4 L^2) / 4; exact integer radicand.
  ex.delta2 = 0.5 * std::sqrt(static_cast<double>(half_twice * half_twice + 4 * s.angular_casimir()));
  ex.lambda_minus = 0.25 * (3.0 + r2 - ex.delta1);
  ex.lambda_prime_plus = 0.5 * (1.0 - n / 2.0 + ex.delta2);
  return ex;
}

double measure_exponent(int dimension, const DeformationParams& d) {
  return -d.beta_prime() * (dimension - 1) / (2.0 * d.omega1());
}

double energy_from_omega(double omega, double mass, const DeformationParams& d) {
  return -omega / (mass * d.omega1());
}

double omega_from_energy(double energy, double mass, const DeformationParams& d) {
  return -mass * d.omega1() * energy;
}

}  // namespace mlqm
