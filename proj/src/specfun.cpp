#include "mlqm/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <initializer_list>
#include <string>

namespace mlqm {

namespace {

constexpr double kLogSqrtTwoPi = 0.91893853320467274178032973640562;

bool is_nonpositive_integer(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real());
}

// log Gamma for Re z >= 15 by the Stirling series.
cplx log_gamma_stirling(cplx z) {
  // B_{2k} / (2k (2k - 1)), k = 1..9
  static constexpr std::array<double, 9> kCoef{
      1.0 / 12.0,           -1.0 / 360.0,           1.0 / 1260.0,
      -1.0 / 1680.0,        1.0 / 1188.0,           -691.0 / 360360.0,
      1.0 / 156.0,          -3617.0 / 122400.0,     43867.0 / 244188.0};
  const cplx inv = 1.0 / z;
  const cplx inv2 = inv * inv;
  cplx series = 0.0;
  cplx power = inv;
  for (double c : kCoef) {
    series += c * power;
    power *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + kLogSqrtTwoPi + series;
}

// psi(z) by upward recurrence into Re z >= 15 and the asymptotic series.
cplx digamma(cplx z) {
  if (is_nonpositive_integer(z)) throw DomainError("digamma: pole");
  static constexpr std::array<double, 7> kCoef{1.0 / 12.0,  -1.0 / 120.0,       1.0 / 252.0, -1.0 / 240.0,
                                               1.0 / 132.0, -691.0 / 32760.0,   1.0 / 12.0};
  cplx shift = 0.0;
  cplx w = z;
  while (w.real() < 15.0) {
    shift += 1.0 / w;
    w += 1.0;
  }
  const cplx inv2 = 1.0 / (w * w);
  cplx series = 0.0;
  cplx power = inv2;
  for (double c : kCoef) {
    series += c * power;
    power *= inv2;
  }
  return std::log(w) - 0.5 / w - series - shift;
}

SeriesValue direct_series(cplx a, cplx b, cplx c, double x, const SeriesOptions& opts) {
  SeriesValue out;
  cplx sum = 1.0;
  cplx term = 1.0;
  int small = 0;
  for (int n = 0; n + 2 <= opts.max_terms; ++n) {
    const cplx den = (c + double(n)) * double(n + 1);
    if (den == 0.0) throw DomainError("hyp2f1: lower parameter hit a nonpositive integer");
    term *= (a + double(n)) * (b + double(n)) / den * x;
    sum += term;
    out.terms_used = n + 2;
    if (term == 0.0) {
      // terminating series
      out.value = sum;
      out.truncation_estimate = 0.0;
      out.converged = true;
      return out;
    }
    small = std::abs(term) <= opts.tol * std::abs(sum) ? small + 1 : 0;
    if (small >= 3) {
      out.value = sum;
      out.truncation_estimate = std::abs(term);
      out.converged = true;
      return out;
    }
  }
  out.value = sum;
  out.truncation_estimate = std::abs(term);
  out.converged = false;
  return out;
}

// exp(u) - 1 without cancellation for small |u|.
cplx complex_expm1(cplx u) {
  const double sh = std::sin(0.5 * u.imag());
  return {std::expm1(u.real()) * std::cos(u.imag()) - 2.0 * sh * sh, std::exp(u.real()) * std::sin(u.imag())};
}

SeriesValue combine(const SeriesValue& x, const SeriesValue& y, cplx value) {
  SeriesValue out;
  out.value = value;
  out.terms_used = x.terms_used + y.terms_used;
  out.truncation_estimate = std::max(x.truncation_estimate, y.truncation_estimate);
  out.converged = x.converged && y.converged;
  return out;
}

// Pieces of the 1 - x connection formula
//   F = g1 F(a, b; 1 - s; y) + g2 y^s F(c - a, c - b; 1 + s; y),  y = 1 - x, s = c - a - b.
struct ConnectionParts {
  SeriesValue f1, f2;
  cplx g1, g2;
};

ConnectionParts connection_parts(cplx a, cplx b, cplx c, double one_minus_x, const SeriesOptions& opts) {
  const cplx s = c - a - b;
  const cplx lgc = log_gamma(c);
  ConnectionParts p;
  p.g1 = std::exp(lgc + log_gamma(s) - log_gamma(c - a) - log_gamma(c - b));
  p.g2 = std::exp(lgc + log_gamma(-s) - log_gamma(a) - log_gamma(b));
  p.f1 = direct_series(a, b, 1.0 - s, one_minus_x, opts);
  p.f2 = direct_series(c - a, c - b, 1.0 + s, one_minus_x, opts);
  return p;
}

SeriesValue connection_generic(cplx a, cplx b, cplx c, double one_minus_x, const SeriesOptions& opts) {
  const ConnectionParts p = connection_parts(a, b, c, one_minus_x, opts);
  const cplx ys = std::exp((c - a - b) * std::log(one_minus_x));
  return combine(p.f1, p.f2, p.g1 * p.f1.value + p.g2 * ys * p.f2.value);
}

// exp(log Gamma(num) - sum log Gamma(den)), zero when a denominator sits on a pole.
cplx gamma_ratio(cplx num, std::initializer_list<cplx> den) {
  cplx acc = log_gamma(num);
  for (cplx d : den) {
    if (is_nonpositive_integer(d)) return 0.0;
    acc -= log_gamma(d);
  }
  return std::exp(acc);
}

// Connection formula for c = a + b + m with integer m (logarithmic case).
SeriesValue connection_integer(cplx a, cplx b, int m, double one_minus_x, const SeriesOptions& opts) {
  const cplx c = a + b + double(m);
  const int k = std::abs(m);
  const double log_y = std::log(one_minus_x);
  const double y = one_minus_x;

  // Finite sum of k terms.
  cplx finite = 0.0;
  if (k > 0) {
    const cplx fa = m > 0 ? a : a - double(k);
    const cplx fb = m > 0 ? b : b - double(k);
    cplx term = 1.0;
    for (int n = 0; n < k; ++n) {
      finite += term;
      term *= (fa + double(n)) * (fb + double(n)) / (double(n + 1) * (double(1 - k) + double(n))) * y;
    }
    const double gamma_k = std::tgamma(double(k));
    if (m > 0) {
      finite *= gamma_k * gamma_ratio(c, {a + double(m), b + double(m)});
    } else {
      finite *= gamma_k * gamma_ratio(c, {a, b}) * std::pow(y, -double(k));
    }
  }

  // Logarithmic series. For m >= 0 the upper parameters are a + m, b + m.
  const cplx ua = m >= 0 ? a + double(m) : a;
  const cplx ub = m >= 0 ? b + double(m) : b;
  const cplx pref = m >= 0 ? -std::pow(-y, double(k)) * gamma_ratio(c, {a, b})
                           : -std::pow(-1.0, double(k)) * gamma_ratio(c, {a - double(k), b - double(k)});
  SeriesValue out;
  if (pref == 0.0) {
    out.value = finite;
    out.terms_used = k;
    return out;
  }
  cplx psi_a = digamma(ua);
  cplx psi_b = digamma(ub);
  double psi_n1 = -std::numbers::egamma;  // psi(n + 1) at n = 0
  double psi_nk1 = -std::numbers::egamma;  // psi(n + k + 1) at n = 0
  for (int j = 1; j <= k; ++j) psi_nk1 += 1.0 / j;
  double fact_nk = std::tgamma(double(k + 1));  // (n + k)!
  cplx coef = 1.0 / fact_nk;                     // (ua)_n (ub)_n / (n! (n + k)!) y^n
  cplx sum = 0.0;
  int small = 0;
  int n = 0;
  for (; n < opts.max_terms; ++n) {
    const cplx term = coef * (log_y - psi_n1 - psi_nk1 + psi_a + psi_b);
    sum += term;
    small = std::abs(term) <= opts.tol * std::abs(sum) ? small + 1 : 0;
    if (small >= 3 || coef == 0.0) break;
    coef *= (ua + double(n)) * (ub + double(n)) / (double(n + 1) * double(n + k + 1)) * y;
    psi_a += 1.0 / (ua + double(n));
    psi_b += 1.0 / (ub + double(n));
    psi_n1 += 1.0 / (n + 1);
    psi_nk1 += 1.0 / (n + k + 1);
  }
  out.value = finite + pref * sum;
  out.terms_used = k + n + 1;
  out.converged = n < opts.max_terms;
  out.truncation_estimate = std::abs(coef);
  return out;
}

SeriesValue connection(cplx a, cplx b, cplx c, double x, double one_minus_x, const SeriesOptions& opts) {
  if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) {
    return direct_series(a, b, c, x, opts);
  }
  if (is_nonpositive_integer(c - a) || is_nonpositive_integer(c - b)) {
    // Euler: the transformed series terminates.
    SeriesValue f = direct_series(c - a, c - b, c, x, opts);
    f.value *= std::exp((c - a - b) * std::log(one_minus_x));
    return f;
  }
  const cplx s = c - a - b;
  const double m = std::round(s.real());
  constexpr double kNearInteger = 1e-2;
  if (std::abs(s.imag()) >= kNearInteger || std::abs(s.real() - m) >= kNearInteger) {
    return connection_generic(a, b, c, one_minus_x, opts);
  }
  const int mi = static_cast<int>(m);
  if (s.imag() == 0.0 && s.real() == m) return connection_integer(a, b, mi, one_minus_x, opts);

  // c - a - b = m + delta with small delta: both terms have poles in delta that
  // cancel. Split
  //   F = P(delta) + R(delta) y^m log(y) (y^delta - 1) / (delta log y),
  //   P = g1 f1 + g2 y^m f2,  R = delta g2 f2,
  // where P and R are smooth in delta and free of powers of log y. Interpolate
  // P and R from nodes delta_k = k h, k = +-1 .. +-4, moving a and b by
  // -(delta_k - delta)/2 each (F is entire in a and b, and a conjugate pair
  // stays conjugate).
  constexpr double kStep = 1e-2;
  constexpr std::array<int, 8> kNodes{-4, -3, -2, -1, 1, 2, 3, 4};
  const cplx delta = s - m;
  const double log_y = std::log(one_minus_x);
  const double ym = std::pow(one_minus_x, m);
  std::array<cplx, 8> nodes{}, pv{}, rv{};
  SeriesValue out;
  out.converged = true;
  for (std::size_t i = 0; i < kNodes.size(); ++i) {
    nodes[i] = double(kNodes[i]) * kStep;
    const cplx shift = 0.5 * (nodes[i] - delta);
    const ConnectionParts p = connection_parts(a - shift, b - shift, c, one_minus_x, opts);
    pv[i] = p.g1 * p.f1.value + p.g2 * ym * p.f2.value;
    rv[i] = nodes[i] * p.g2 * p.f2.value;
    out.terms_used += p.f1.terms_used + p.f2.terms_used;
    out.truncation_estimate = std::max({out.truncation_estimate, p.f1.truncation_estimate, p.f2.truncation_estimate});
    out.converged = out.converged && p.f1.converged && p.f2.converged;
  }
  cplx pval = 0.0, rval = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    cplx weight = 1.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (j != i) weight *= (delta - nodes[j]) / (nodes[i] - nodes[j]);
    }
    pval += weight * pv[i];
    rval += weight * rv[i];
  }
  const cplx u = delta * log_y;
  const cplx expm1_ratio = u == 0.0 ? cplx(1.0) : complex_expm1(u) / u;
  out.value = pval + rval * ym * log_y * expm1_ratio;
  return out;
}

constexpr double kDirectLimit = 0.9;

}  // namespace

cplx log_gamma(cplx z) {
  if (is_nonpositive_integer(z)) {
    throw DomainError("log_gamma: pole at z = " + std::to_string(z.real()));
  }
  // Shift into Re z >= 15 with log Gamma(z) = log Gamma(z + n) - sum log(z + k).
  // Each principal log(z + k) is analytic off the negative real axis, so the sum
  // stays on the standard branch.
  cplx shift = 0.0;
  cplx w = z;
  while (w.real() < 15.0) {
    shift += std::log(w);
    w += 1.0;
  }
  return log_gamma_stirling(w) - shift;
}

SeriesValue hyp2f1(cplx a, cplx b, cplx c, double z, const SeriesOptions& opts) {
  if (is_nonpositive_integer(c)) throw DomainError("hyp2f1: c is a nonpositive integer");
  if (!(z < 1.0)) throw DomainError("hyp2f1: argument must be < 1");
  if (z == 0.0) return SeriesValue{};
  if (z > 0.0) {
    if (z <= kDirectLimit) return direct_series(a, b, c, z, opts);
    return connection(a, b, c, z, 1.0 - z, opts);
  }
  // Pfaff: F(a, b; c; z) = (1 - z)^(-a) F(a, c - b; c; z / (z - 1))
  const double one_minus_z = 1.0 - z;
  const double w = z / (z - 1.0);
  const double one_minus_w = 1.0 / one_minus_z;
  SeriesValue inner = w <= kDirectLimit ? direct_series(a, c - b, c, w, opts)
                                        : connection(a, c - b, c, w, one_minus_w, opts);
  inner.value *= std::exp(-a * std::log(one_minus_z));
  return inner;
}

HeunParams::HeunParams(double xi0, cplx q, cplx a, cplx b, cplx c, cplx d, cplx e)
    : xi0_(xi0), q_(q), a_(a), b_(b), c_(c), d_(d), e_(e) {
  if (xi0 == 0.0 || xi0 == 1.0 || !std::isfinite(xi0)) {
    throw DomainError("HeunParams: xi0 must be finite and distinct from 0 and 1");
  }
  if (is_nonpositive_integer(c)) {
    throw DomainError("HeunParams: c is a nonpositive integer, no regular local solution");
  }
  if (std::abs(fuchsian_defect()) >= kFuchsianTolerance) {
    throw DomainError("HeunParams: Fuchsian condition a + b + 1 = c + d + e violated");
  }
}

double HeunParams::series_radius() const { return std::min(1.0, std::abs(xi0_)); }

std::vector<ScaledCoefficient> heun_coefficients(const HeunParams& hp, int n_max) {
  if (n_max < 0) throw DomainError("heun_coefficients: n_max must be nonnegative");
  const cplx a = hp.a(), b = hp.b(), c = hp.c(), d = hp.d(), q = hp.q();
  const double xi0 = hp.xi0();

  std::vector<ScaledCoefficient> out;
  out.reserve(static_cast<std::size_t>(n_max) + 1);
  int exponent = 0;
  cplx prev = 1.0;                // C_n * 2^-exponent
  cplx curr = -q / (c * xi0);     // C_{n+1} * 2^-exponent
  out.push_back({prev, 0});
  if (n_max >= 1) out.push_back({curr, 0});

  constexpr double kHigh = 0x1p+400;
  constexpr double kLow = 0x1p-400;
  for (int n = 0; n + 2 <= n_max; ++n) {
    const double np1 = n + 1.0;
    const cplx den = (n + 2.0) * (np1 + c) * xi0;
    if (std::abs(np1 + c) == 0.0) {
      throw DomainError("heun_coefficients: degenerate recurrence, c + n + 1 = 0");
    }
    const cplx coef = np1 * np1 * (xi0 + 1.0) + np1 * (c + d - 1.0 + (a + b - d) * xi0) - q;
    cplx next = (coef * curr - (double(n) + a) * (double(n) + b) * prev) / den;
    prev = curr;
    curr = next;
    const double mag = std::max(std::abs(prev), std::abs(curr));
    if (mag > kHigh || (mag < kLow && mag > 0.0)) {
      int shift = 0;
      std::frexp(mag, &shift);
      prev = {std::ldexp(prev.real(), -shift), std::ldexp(prev.imag(), -shift)};
      curr = {std::ldexp(curr.real(), -shift), std::ldexp(curr.imag(), -shift)};
      exponent += shift;
    }
    out.push_back({curr, exponent});
  }
  return out;
}

namespace {

HeunLocalDerivative heun_sum(const HeunParams& hp, double xi, double tol, const HeunLocalOptions& opts,
                             bool want_derivative) {
  const double radius = opts.safe_radius * hp.series_radius();
  if (!(std::abs(xi) < radius)) {
    throw DomainError("heun_local: |xi| = " + std::to_string(std::abs(xi)) +
                      " outside the safe disc of radius " + std::to_string(radius));
  }
  const cplx a = hp.a(), b = hp.b(), c = hp.c(), d = hp.d(), q = hp.q();
  const double xi0 = hp.xi0();
  const cplx c1 = -q / (c * xi0);

  HeunLocalDerivative out;
  if (xi == 0.0) {
    out.value = SeriesValue{};
    out.value.terms_used = 1;
    out.derivative = c1;
    return out;
  }

  // Terms T_n = C_n xi^n obey the recurrence with xi folded in, so no C_n is
  // ever formed on its own.
  cplx prev = 1.0;
  cplx curr = c1 * xi;
  cplx sum = prev + curr;
  cplx dsum = curr;  // sum of n T_n
  int small = 0;
  auto is_small = [&](cplx term, int n) {
    bool s = std::abs(term) <= tol * std::abs(sum);
    if (want_derivative) s = s && n * std::abs(term) <= tol * std::max(std::abs(dsum), std::abs(sum));
    return s;
  };
  small = is_small(curr, 1) ? 1 : 0;
  int n = 0;
  for (; n + 2 < opts.max_terms; ++n) {
    const double np1 = n + 1.0;
    if (std::abs(np1 + c) == 0.0) {
      throw DomainError("heun_local: degenerate recurrence, c + n + 1 = 0");
    }
    const cplx den = (n + 2.0) * (np1 + c) * xi0;
    const cplx coef = np1 * np1 * (xi0 + 1.0) + np1 * (c + d - 1.0 + (a + b - d) * xi0) - q;
    const cplx next = (coef * xi * curr - (double(n) + a) * (double(n) + b) * xi * xi * prev) / den;
    prev = curr;
    curr = next;
    sum += curr;
    dsum += double(n + 2) * curr;
    small = is_small(curr, n + 2) ? small + 1 : 0;
    if (small >= 3) {
      out.value.value = sum;
      out.value.terms_used = n + 3;
      out.value.truncation_estimate = std::abs(curr);
      out.value.converged = true;
      out.derivative = dsum / xi;
      return out;
    }
  }
  out.value.value = sum;
  out.value.terms_used = n + 2;
  out.value.truncation_estimate = std::abs(curr);
  out.value.converged = false;
  out.derivative = dsum / xi;
  return out;
}

}  // namespace

SeriesValue heun_local(const HeunParams& hp, double xi, double tol, const HeunLocalOptions& opts) {
  return heun_sum(hp, xi, tol, opts, false).value;
}

HeunLocalDerivative heun_local_with_derivative(const HeunParams& hp, double xi, double tol,
                                               const HeunLocalOptions& opts) {
  return heun_sum(hp, xi, tol, opts, true);
}

}  // namespace mlqm
