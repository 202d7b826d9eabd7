#include "mlqm/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "mlqm/oracle.hpp"

namespace mlqm {

namespace {

cplx root_of_real(double sq) { return sq >= 0.0 ? cplx(std::sqrt(sq), 0.0) : cplx(0.0, std::sqrt(-sq)); }

// Series is trusted up to this fraction of the radius when continuation is
// available; beyond it the ODE is cheaper than a slowly converging sum.
constexpr double kSeriesFraction = 0.5;

}  // namespace

NuTilde nu_tilde_general(const SystemSpec& s, const DeformationParams& d, const DimensionlessEnergy& omega) {
  const double w = omega.value();
  const double w4 = d.omega4();
  const double lsq = static_cast<double>(s.angular_casimir());
  const double half_nm1 = 0.5 * (s.dimension() - 1);
  const double one_m2w = 1.0 - 2.0 * w;
  NuTilde nu;
  nu.squared = half_nm1 * half_nm1 * (w4 - 1.0) * (w4 - 1.0) +
               (((one_m2w * (1.0 - 2.0 * w4)) - w4 * w4 * (4.0 * w + 1.0)) * lsq + 4.0 * s.kappa()) / one_m2w;
  nu.value = root_of_real(nu.squared);
  return nu;
}

HeunParams map_heun_general(const SystemSpec& s, const DeformationParams& d, const DimensionlessEnergy& omega,
                            double exclusion_half_width) {
  omega.require_outside_exclusion(exclusion_half_width);
  const double w = omega.value();
  const double n = s.dimension();
  const double w4 = d.omega4();
  const double lsq = static_cast<double>(s.angular_casimir());
  const TransformExponents ex = derive_exponents(s, d);
  const double d1 = ex.delta1;
  const double d2 = ex.delta2;
  const cplx nu = nu_tilde_general(s, d, omega).value;

  const double base = 1.5 - d1 / 4.0 + d2 / 2.0;
  const cplx a = base - nu / 2.0;
  const cplx b = base + nu / 2.0;
  const double c = 1.0 + d2;
  const double e = 1.0 - d1 / 2.0;
  const double brace = 1.0 + (n / 4.0 - 3.0) * w - n * (n - 1.0) / 4.0 * w4 * w + w * d1 / 2.0 +
                       (1.0 - 3.0 * w) * d2 + w * d1 * d2 / 2.0 - w4 * w * lsq - s.kappa();
  const double q = -brace / (1.0 - 2.0 * w);
  const double xi0 = 2.0 * w / (2.0 * w - 1.0);
  return HeunParams(xi0, q, a, b, c, 2.0, e);
}

HeunParams map_heun_dipole(int m, const DeformationParams& d, const DimensionlessEnergy& omega, double kappa,
                           double exclusion_half_width) {
  omega.require_outside_exclusion(exclusion_half_width);
  if (!std::isfinite(kappa)) throw DomainError("map_heun_dipole: kappa must be finite");
  const double mm = std::abs(m);
  const double w = omega.value();
  const double w4 = d.omega4();
  const double one_m2w = 1.0 - 2.0 * w;
  const double root = std::sqrt((1.0 + w4) * (1.0 + w4) + 4.0 * w4 * w4 * mm * mm);
  const double nu_sq = 0.25 * (w4 - 1.0) * (w4 - 1.0) +
                       (4.0 * kappa + (one_m2w * (1.0 - 2.0 * w4) - w4 * w4 * (4.0 * w + 1.0)) * mm * mm) / one_m2w;
  const cplx nu = root_of_real(nu_sq);

  const double base = (6.0 + 2.0 * mm - root) / 4.0;
  const double brace = 1.0 - w / 2.0 * (5.0 + w4) + mm * (1.0 - 3.0 * w) - w * w4 * mm * mm +
                       w / 2.0 * (mm + 1.0) * root - kappa;
  return HeunParams(2.0 * w / (2.0 * w - 1.0), -brace / one_m2w, base - nu / 2.0, base + nu / 2.0, 1.0 + mm, 2.0,
                    1.0 - root / 2.0);
}

std::optional<HypergeometricTriple> reduce_to_hypergeometric(const HeunParams& hp) {
  const cplx ab = hp.a() * hp.b();
  if (std::abs(hp.e()) >= 1e-10) return std::nullopt;
  if (std::abs(hp.q() + ab) >= 1e-10 * (1.0 + std::abs(ab))) return std::nullopt;
  return HypergeometricTriple{hp.a(), hp.b(), hp.c()};
}

WavefunctionSpec WavefunctionSpec::build(const SystemSpec& s, const DeformationParams& d,
                                         const DimensionlessEnergy& omega, double normalization,
                                         double exclusion_half_width) {
  if (!(normalization > 0.0) || !std::isfinite(normalization))
    throw DomainError("WavefunctionSpec: normalization must be positive");
  const TransformExponents ex = derive_exponents(s, d);
  const double n = s.dimension();
  const double ex_xi = 0.5 * (1.0 - n / 2.0 + ex.delta2);
  const double ex_1mxi = 0.25 * (5.0 + (n - 1.0) * d.omega4() - ex.delta1);
  HeunParams hp = map_heun_general(s, d, omega, exclusion_half_width);
  return WavefunctionSpec(ex_xi, ex_1mxi, hp, normalization, reduce_to_hypergeometric(hp));
}

WavefunctionSpec WavefunctionSpec::with_normalization(double a) const {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("WavefunctionSpec: normalization must be positive");
  WavefunctionSpec out = *this;
  out.normalization_ = a;
  return out;
}

std::vector<double> wavefunction_on_xi_grid(const WavefunctionSpec& ws, std::span<const double> xi,
                                            const WavefunctionOptions& opts) {
  for (std::size_t i = 0; i < xi.size(); ++i) {
    if (!(xi[i] >= 0.0 && xi[i] < 1.0)) throw DomainError("wavefunction: xi must lie in [0, 1)");
    if (i > 0 && xi[i] < xi[i - 1]) throw DomainError("wavefunction: xi grid must be nondecreasing");
  }
  const HeunParams& hp = ws.heun();
  std::vector<cplx> h(xi.size());

  if (const auto& red = ws.reduced()) {
    for (std::size_t i = 0; i < xi.size(); ++i) {
      const SeriesValue v = hyp2f1(red->a, red->b, red->c, xi[i] / hp.xi0());
      if (!v.converged) throw ConvergenceError("wavefunction: hypergeometric series did not converge");
      h[i] = v.value;
    }
  } else {
    const double radius = hp.series_radius();
    const double series_limit = (opts.allow_continuation ? kSeriesFraction : kDefaultSafeRadius) * radius;
    std::size_t split = 0;
    while (split < xi.size() && xi[split] < series_limit) {
      const SeriesValue v = heun_local(hp, xi[split], opts.tol);
      if (!v.converged) throw ConvergenceError("wavefunction: Heun series did not converge");
      h[split] = v.value;
      ++split;
    }
    if (split < xi.size()) {
      if (!opts.allow_continuation) {
        std::ostringstream os;
        os << "wavefunction: xi = " << xi[split] << " lies outside the series disc and continuation is disabled";
        throw DomainError(os.str());
      }
      OdeOptions oo;
      oo.guard_half_width = opts.continuation_guard;
      const double ode_tol = std::max(opts.tol, 1e-12);
      const double x_start = default_frobenius_start(hp);
      const auto vals = integrate_heun_at(hp, x_start, frobenius_start(hp, x_start, ode_tol / 100),
                                          xi.subspan(split), ode_tol, oo);
      for (std::size_t i = split; i < xi.size(); ++i) h[i] = vals[i - split].f;
    }
  }

  std::vector<double> out(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) {
    const double pref = ws.normalization() * std::pow(xi[i], ws.exponent_xi()) *
                        std::pow(1.0 - xi[i], ws.exponent_one_minus_xi());
    out[i] = pref * h[i].real();
  }
  return out;
}

double wavefunction_momentum(const WavefunctionSpec& ws, double p, const DeformationParams& d,
                             const WavefunctionOptions& opts) {
  const double x = xi_of_p(p, d);
  return wavefunction_on_xi_grid(ws, std::span<const double>(&x, 1), opts).front();
}

namespace {

struct Panel {
  double lo, hi;
};

template <int Points>
void add_nodes(const Panel& pn, std::vector<double>& x, std::vector<double>& w) {
  using G = boost::math::quadrature::gauss<double, Points>;
  const auto& abs = G::abscissa();
  const auto& wts = G::weights();
  const double mid = 0.5 * (pn.lo + pn.hi);
  const double half = 0.5 * (pn.hi - pn.lo);
  for (std::size_t i = 0; i < abs.size(); ++i) {
    x.push_back(mid - half * abs[i]);
    w.push_back(half * wts[i]);
    if (abs[i] != 0.0) {
      x.push_back(mid + half * abs[i]);
      w.push_back(half * wts[i]);
    }
  }
}

}  // namespace

NormResult weighted_norm(const WavefunctionSpec& ws, const SystemSpec& s, const DeformationParams& d,
                         const WavefunctionOptions& opts) {
  const double n = s.dimension();
  const double alpha = measure_exponent(s.dimension(), d);
  const double tail_power = 2.0 * ws.exponent_one_minus_xi() - n / 2.0 - alpha;
  if (!(tail_power > -1.0)) {
    std::ostringstream os;
    os << "weighted_norm: integrand behaves like (1 - xi)^" << tail_power << " near xi = 1 and is not integrable";
    throw DomainError(os.str());
  }

  // Geometric panels towards both ends of [0, 1).
  const double eps = ws.reduced() ? std::ldexp(1.0, -40) : opts.continuation_guard;
  std::vector<Panel> panels;
  panels.push_back({0.0, std::ldexp(1.0, -40)});
  for (int k = 40; k >= 2; --k) panels.push_back({std::ldexp(1.0, -k), std::ldexp(1.0, -k + 1)});
  double lo = 0.5;
  for (int k = 2;; ++k) {
    const double gap = std::ldexp(1.0, -k);
    if (gap <= eps) {
      panels.push_back({lo, 1.0 - eps});
      break;
    }
    panels.push_back({lo, 1.0 - gap});
    lo = 1.0 - gap;
  }

  std::vector<double> xc, wc, xf, wf;
  for (const Panel& pn : panels) {
    add_nodes<10>(pn, xc, wc);
    add_nodes<20>(pn, xf, wf);
  }
  std::vector<double> all;
  all.reserve(xc.size() + xf.size() + 1);
  all.insert(all.end(), xc.begin(), xc.end());
  all.insert(all.end(), xf.begin(), xf.end());
  all.push_back(1.0 - eps);
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  const std::vector<double> phi = wavefunction_on_xi_grid(ws, all, opts);

  const double pref = 0.5 * std::pow(d.omega1(), -n / 2.0);
  auto integrand = [&](double x) {
    const auto it = std::lower_bound(all.begin(), all.end(), x);
    const double f = phi[static_cast<std::size_t>(it - all.begin())];
    return pref * std::pow(x, (n - 2.0) / 2.0) * std::pow(1.0 - x, -n / 2.0 - alpha) * f * f;
  };
  auto sum = [&](const std::vector<double>& x, const std::vector<double>& w) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] * integrand(x[i]);
    return acc;
  };

  NormResult r;
  r.tail = integrand(1.0 - eps) * eps / (tail_power + 1.0);
  r.norm = std::sqrt(sum(xf, wf) + r.tail);
  r.coarse = std::sqrt(sum(xc, wc) + r.tail);
  r.converged = std::abs(r.norm - r.coarse) <= 1e-6 * r.norm;
  return r;
}

WavefunctionSpec normalized(const WavefunctionSpec& ws, const SystemSpec& s, const DeformationParams& d,
                            const WavefunctionOptions& opts) {
  const NormResult r = weighted_norm(ws, s, d, opts);
  if (!(r.norm > 0.0) || !std::isfinite(r.norm)) throw ConvergenceError("normalized: norm is not positive");
  return ws.with_normalization(ws.normalization() / r.norm);
}

}  // namespace mlqm
