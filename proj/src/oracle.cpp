#include "mlqm/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <sstream>
#include <utility>

#include "mlqm/mapping.hpp"

namespace mlqm {

namespace {

struct Rhs {
  const HeunParams& hp;
  cplx ab;

  explicit Rhs(const HeunParams& h) : hp(h), ab(h.a() * h.b()) {}

  HeunState operator()(double xi, const HeunState& y) const {
    const double x0 = hp.xi0();
    const cplx p = hp.c() / xi + hp.e() / (xi - 1.0) + hp.d() / (xi - x0);
    const cplx r = (ab * xi + hp.q()) / (xi * (xi - 1.0) * (xi - x0));
    return {y.df, -p * y.df - r * y.f};
  }
};

HeunState axpy(const HeunState& y, double h, std::initializer_list<std::pair<double, const HeunState*>> terms) {
  HeunState out = y;
  for (const auto& [w, k] : terms) {
    out.f += h * w * k->f;
    out.df += h * w * k->df;
  }
  return out;
}

double state_norm(const HeunState& y) { return std::max(std::abs(y.f), std::abs(y.df)); }

void check_path(const HeunParams& hp, double from, double to, const OdeOptions& opts) {
  const double lo = std::min(from, to);
  const double hi = std::max(from, to);
  const double g1 = opts.guard_half_width;
  const double g0 = std::min(opts.guard_half_width, 0.05 * hp.series_radius());
  auto fail = [&](const char* what) {
    std::ostringstream os;
    os << "integrate_heun: interval [" << lo << ", " << hi << "] " << what;
    throw DomainError(os.str());
  };
  if (!std::isfinite(lo) || !std::isfinite(hi)) fail("is not finite");
  if (lo < g0) fail("enters the guard band at xi = 0");
  if (hi > 1.0 - g1) fail("enters the guard band at xi = 1");
  const double x0 = hp.xi0();
  if (x0 > lo - g0 && x0 < hi + g0) fail("enters the guard band at xi0");
}

// Dormand-Prince 5(4) stepping from (xi, y) to exactly `target`.
class Stepper {
 public:
  Stepper(const HeunParams& hp, double tol, const OdeOptions& opts) : rhs_(hp), tol_(tol), opts_(opts) {
    if (!(tol > 0.0)) throw DomainError("integrate_heun: tolerance must be positive");
  }

  void advance(double& xi, HeunState& y, double target, StepStatistics& stats, OdeSolution* record) {
    const double span = target - xi;
    if (span == 0.0) return;
    const double dir = span > 0 ? 1.0 : -1.0;
    if (h_ == 0.0) h_ = 1e-2 * std::min(std::abs(span), std::max(std::abs(xi), 1e-3));
    double h = dir * std::min(h_, std::abs(span));

    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    HeunState k1 = rhs_(xi, y);
    while (xi != target) {
      if (stats.accepted + stats.rejected >= opts_.max_steps) {
        std::ostringstream os;
        os << "integrate_heun: step budget exhausted at xi = " << xi;
        throw ConvergenceError(os.str());
      }
      const double remaining = target - xi;
      const bool last = std::abs(h) >= std::abs(remaining);
      const double hs = last ? remaining : h;
      if (std::abs(hs) < 1e-15 * std::max(1.0, std::abs(xi))) {
        std::ostringstream os;
        os.precision(17);
        os << "integrate_heun: step size collapsed at xi = " << xi;
        throw ConvergenceError(os.str());
      }

      const HeunState k2 = rhs_(xi + hs / 5, axpy(y, hs, {{a21, &k1}}));
      const HeunState k3 = rhs_(xi + 3 * hs / 10, axpy(y, hs, {{a31, &k1}, {a32, &k2}}));
      const HeunState k4 = rhs_(xi + 4 * hs / 5, axpy(y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
      const HeunState k5 =
          rhs_(xi + 8 * hs / 9, axpy(y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
      const HeunState k6 =
          rhs_(xi + hs, axpy(y, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
      const double xn = last ? target : xi + hs;
      const HeunState yn = axpy(y, hs, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
      const HeunState k7 = rhs_(xn, yn);
      const HeunState err =
          axpy(HeunState{0.0, 0.0}, hs, {{e1, &k1}, {e3, &k3}, {e4, &k4}, {e5, &k5}, {e6, &k6}, {e7, &k7}});

      const double floor = 1e-8 * std::max(state_norm(y), state_norm(yn));
      const double sf = tol_ * std::max({std::abs(y.f), std::abs(yn.f), floor});
      const double sd = tol_ * std::max({std::abs(y.df), std::abs(yn.df), floor});
      double ratio = std::max(std::abs(err.f) / sf, std::abs(err.df) / sd);
      if (!std::isfinite(ratio)) ratio = 1e10;

      const double factor = ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
      if (ratio <= 1.0) {
        ++stats.accepted;
        stats.max_error_ratio = std::max(stats.max_error_ratio, ratio);
        xi = xn;
        y = yn;
        k1 = k7;
        if (record) {
          record->grid_xi.push_back(xi);
          record->values.push_back(y);
        }
        if (!last) h = hs * factor;
      } else {
        ++stats.rejected;
        h = hs * std::min(factor, 0.9);
      }
      h_ = std::abs(h);
    }
  }

 private:
  Rhs rhs_;
  double tol_;
  OdeOptions opts_;
  double h_ = 0.0;
};

}  // namespace

double default_frobenius_start(const HeunParams& hp) { return 0.1 * hp.series_radius(); }

HeunState frobenius_start(const HeunParams& hp, double xi, double tol) {
  const auto r = heun_local_with_derivative(hp, xi, std::max(tol, 1e-16));
  if (!r.value.converged) throw ConvergenceError("frobenius_start: local series did not converge");
  return {r.value.value, r.derivative};
}

OdeSolution integrate_heun_from(const HeunParams& hp, double xi_start, HeunState start, double xi_end, double tol,
                                const OdeOptions& opts) {
  check_path(hp, xi_start, xi_end, opts);
  OdeSolution sol;
  sol.grid_xi.push_back(xi_start);
  sol.values.push_back(start);
  Stepper st(hp, tol, opts);
  double xi = xi_start;
  st.advance(xi, start, xi_end, sol.stats, &sol);
  return sol;
}

OdeSolution integrate_heun(const HeunParams& hp, double xi_start, double xi_end, double tol,
                           const OdeOptions& opts) {
  check_path(hp, xi_start, xi_end, opts);
  return integrate_heun_from(hp, xi_start, frobenius_start(hp, xi_start, tol / 100), xi_end, tol, opts);
}

std::vector<HeunState> integrate_heun_at(const HeunParams& hp, double xi_start, HeunState start,
                                         std::span<const double> points, double tol, const OdeOptions& opts) {
  std::vector<HeunState> out;
  out.reserve(points.size());
  if (points.empty()) return out;
  check_path(hp, xi_start, points.front(), opts);
  check_path(hp, xi_start, points.back(), opts);
  const double dir = points.back() >= xi_start ? 1.0 : -1.0;
  double prev = xi_start;
  for (double x : points) {
    if ((x - prev) * dir < 0) throw DomainError("integrate_heun_at: points are not monotone");
    prev = x;
  }
  Stepper st(hp, tol, opts);
  StepStatistics stats;
  double xi = xi_start;
  for (double x : points) {
    st.advance(xi, start, x, stats, nullptr);
    out.push_back(start);
  }
  return out;
}

RootValidation validate_root(double omega, double kappa, double tol) {
  static constexpr std::array<double, 2> kDistances{1e-4, 1e-5};
  RootValidation rep;
  rep.probe_xi = 1.0 - kDistances.back();
  const HeunParams hp = map_heun_dipole(0, DeformationParams(1.0, 0.0), DimensionlessEnergy(omega), kappa);
  OdeOptions opts;
  opts.guard_half_width = 1e-6;
  const double x_start = default_frobenius_start(hp);
  const std::array<double, 3> pts{1.0 - 1e-3, 1.0 - kDistances[0], 1.0 - kDistances[1]};
  std::vector<HeunState> vals;
  try {
    vals = integrate_heun_at(hp, x_start, frobenius_start(hp, x_start, tol / 100), pts, tol, opts);
  } catch (const ConvergenceError& ex) {
    rep.inconclusive = true;
    rep.detail = ex.what();
    return rep;
  }
  // In the reduced case p^2 phi is proportional to xi f(xi).
  const double u1 = pts[1] * std::abs(vals[1].f);
  const double u2 = pts[2] * std::abs(vals[2].f);
  if (u1 == 0.0 || u2 == 0.0) {
    rep.measured_exponent = u2 == 0.0 ? INFINITY : -INFINITY;
  } else {
    rep.measured_exponent = std::log(u2 / u1) / std::log(kDistances[1] / kDistances[0]);
  }
  rep.pass = rep.measured_exponent > 0.5;
  std::ostringstream os;
  os.precision(6);
  os << "p^2 phi ~ (1 - xi)^" << rep.measured_exponent << " near xi = " << rep.probe_xi;
  rep.detail = os.str();
  return rep;
}

}  // namespace mlqm
