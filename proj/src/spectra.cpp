#include "mlqm/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mlqm/mapping.hpp"
#include "mlqm/specfun.hpp"

namespace mlqm {

namespace {

double real_of(const SeriesValue& v, const char* who) {
  if (!v.converged) throw ConvergenceError(std::string(who) + ": hypergeometric series did not converge");
  return v.value.real();
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

void ScanConfig::validate() const {
  auto fail = [](const std::string& msg) { throw DomainError("ScanConfig: " + msg); };
  if (!(omega_min > 0.0) || !std::isfinite(omega_min)) fail("omega_min must be positive");
  if (!(omega_max > omega_min) || !std::isfinite(omega_max)) fail("omega_max must exceed omega_min");
  if (grid_points < 10) fail("grid_points must be at least 10");
  if (!(root_tol > 0.0)) fail("root_tol must be positive");
  if (!(exclusion_half_width > 0.0) || exclusion_half_width >= 0.25) fail("exclusion_half_width must lie in (0, 0.25)");
}

std::vector<double> scan_grid(const ScanConfig& cfg, bool include_band_edges) {
  cfg.validate();
  const int n = cfg.grid_points;
  std::vector<double> g;
  g.reserve(n + 2);
  const double lo_edge = 0.5 - 2.0 * cfg.exclusion_half_width;
  const double hi_edge = 0.5 + 2.0 * cfg.exclusion_half_width;
  for (int i = 0; i < n; ++i) {
    double w;
    if (i == 0) {
      w = cfg.omega_min;
    } else if (i == n - 1) {
      w = cfg.omega_max;
    } else if (cfg.grid == GridKind::logarithmic) {
      const double t = static_cast<double>(i) / (n - 1);
      w = std::exp(std::log(cfg.omega_min) + t * (std::log(cfg.omega_max) - std::log(cfg.omega_min)));
    } else {
      w = cfg.omega_min + (cfg.omega_max - cfg.omega_min) * i / (n - 1);
    }
    if (w > lo_edge && w < hi_edge) continue;
    g.push_back(w);
  }
  if (include_band_edges) {
    for (double e : {lo_edge, hi_edge}) {
      if (e > cfg.omega_min && e < cfg.omega_max) g.push_back(e);
    }
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

double quantization_h(double omega, double kappa, double exclusion_half_width) {
  if (!(omega > 0.0)) throw DomainError("quantization_h: omega must be positive");
  if (!std::isfinite(kappa)) throw DomainError("quantization_h: kappa must be finite");
  DimensionlessEnergy(omega).require_outside_exclusion(exclusion_half_width);
  const double nu_sq = 4.0 * kappa / (1.0 - 2.0 * omega);
  const cplx nu = nu_sq >= 0.0 ? cplx(std::sqrt(nu_sq), 0.0) : cplx(0.0, std::sqrt(-nu_sq));
  const double z = (2.0 * omega - 1.0) / (2.0 * omega);
  return real_of(hyp2f1(1.0 - nu / 2.0, 1.0 + nu / 2.0, 1.0, z), "quantization_h");
}

double quantization_h(double omega, double kappa, const DeformationParams& d, double exclusion_half_width) {
  if (!(omega > 0.0)) throw DomainError("quantization_h: omega must be positive");
  if (d.beta_prime() != 0.0) throw DomainError("quantization_h: the quantization condition needs beta' = 0");
  const HeunParams hp = map_heun_dipole(0, d, DimensionlessEnergy(omega), kappa, exclusion_half_width);
  const auto red = reduce_to_hypergeometric(hp);
  if (!red) throw DomainError("quantization_h: parameters do not reduce to a hypergeometric equation");
  // xi = 1 corresponds to the argument 1 / xi0.
  return real_of(hyp2f1(red->a, red->b, red->c, 1.0 / hp.xi0()), "quantization_h");
}

namespace {

struct Refined {
  double omega, residual, lo, hi;
};

template <class H>
Refined refine(const H& h, double lo, double hi, double h_lo, double h_hi) {
  while (hi - lo > 1e-14 * lo) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double hm = h(mid);
    if (hm == 0.0) return {mid, 0.0, mid, mid};
    if ((hm < 0) == (h_lo < 0)) {
      lo = mid;
      h_lo = hm;
    } else {
      hi = mid;
      h_hi = hm;
    }
  }
  Refined best = std::abs(h_lo) <= std::abs(h_hi) ? Refined{lo, std::abs(h_lo), lo, hi}
                                                   : Refined{hi, std::abs(h_hi), lo, hi};
  const double ws = lo - h_lo * (hi - lo) / (h_hi - h_lo);
  if (ws > lo && ws < hi) {
    const double hs = h(ws);
    if (std::abs(hs) < best.residual) best = {ws, std::abs(hs), lo, hi};
  }
  return best;
}

}  // namespace

ScanResult find_bound_states(double kappa, const ScanConfig& cfg, double mass, const DeformationParams& d) {
  if (!(mass > 0.0)) throw DomainError("find_bound_states: mass must be positive");
  const std::vector<double> grid = scan_grid(cfg);
  auto h = [&](double w) { return quantization_h(w, kappa, d, cfg.exclusion_half_width); };
  std::vector<double> hv(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) hv[i] = h(grid[i]);

  const double lo_edge = 0.5 - 2.0 * cfg.exclusion_half_width;
  const double hi_edge = 0.5 + 2.0 * cfg.exclusion_half_width;
  ScanResult res;
  std::vector<Refined> roots;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (hv[i] == 0.0) roots.push_back({grid[i], 0.0, grid[i], grid[i]});
    if (i + 1 == grid.size()) break;
    if (!((hv[i] < 0 && hv[i + 1] > 0) || (hv[i] > 0 && hv[i + 1] < 0))) continue;
    if (grid[i] == lo_edge && grid[i + 1] == hi_edge) {
      res.warnings.push_back("h changes sign across the exclusion band [" + fmt(lo_edge) + ", " + fmt(hi_edge) +
                             "]; a root there is not resolved");
      continue;
    }
    const Refined r = refine(h, grid[i], grid[i + 1], hv[i], hv[i + 1]);
    if (r.residual >= cfg.root_tol) {
      res.warnings.push_back("sign change near omega = " + fmt(r.omega) + " has residual " + fmt(r.residual) +
                             " above the root tolerance; discarded");
      continue;
    }
    roots.push_back(r);
  }
  std::sort(roots.begin(), roots.end(), [](const Refined& a, const Refined& b) { return a.omega > b.omega; });
  for (std::size_t i = 0; i < roots.size(); ++i) {
    BoundState s;
    s.index = static_cast<int>(i);
    s.omega = roots[i].omega;
    s.energy = energy_from_omega(s.omega, mass, d);
    s.residual = roots[i].residual;
    s.bracket_lo = roots[i].lo;
    s.bracket_hi = roots[i].hi;
    res.states.push_back(s);
  }
  return res;
}

double asymptotic_phase(double kappa) {
  if (!(kappa < 0.0)) throw DomainError("asymptotic_phase: kappa must be negative");
  const double nu = std::sqrt(-4.0 * kappa);
  const cplx i(0.0, 1.0);
  const double raw = (log_gamma(i * nu) - log_gamma(1.0 + i * nu / 2.0) - log_gamma(i * nu / 2.0)).imag();
  return std::atan2(std::sin(raw), std::cos(raw));
}

std::vector<AsymptoticLevel> asymptotic_spectrum(double kappa, double beta, double mass, int n_max,
                                                 double validity_threshold) {
  if (!(kappa < 0.0)) throw DomainError("asymptotic_spectrum: kappa must be negative");
  if (!(beta > 0.0)) throw DomainError("asymptotic_spectrum: beta must be positive");
  if (!(mass > 0.0)) throw DomainError("asymptotic_spectrum: mass must be positive");
  if (n_max < 0) throw DomainError("asymptotic_spectrum: n_max must be nonnegative");
  const double nu = std::sqrt(-4.0 * kappa);
  const double phi = asymptotic_phase(kappa);
  std::vector<AsymptoticLevel> out;
  for (int n = 0; n <= n_max; ++n) {
    AsymptoticLevel lv;
    lv.n = n;
    lv.omega = 0.5 * std::exp(2.0 / nu * (phi - (n + 0.5) * std::numbers::pi));
    lv.energy = -lv.omega / (mass * beta);
    lv.valid = lv.omega < validity_threshold;
    out.push_back(lv);
  }
  return out;
}

SpectrumComparison compare_spectra(double kappa, double beta, double mass, int n_levels, double validity_threshold) {
  if (n_levels < 1) throw DomainError("compare_spectra: n_levels must be positive");
  const auto asym = asymptotic_spectrum(kappa, beta, mass, n_levels - 1, validity_threshold);
  const double nu = std::sqrt(-4.0 * kappa);
  const double half_period = std::numbers::pi / nu;

  ScanConfig cfg;
  cfg.omega_min = std::max(asym.back().omega * std::exp(-half_period), std::numeric_limits<double>::min());
  cfg.omega_max = std::max(5.0, 2.0 * asym.front().omega);
  const double decades = std::log10(cfg.omega_max / cfg.omega_min);
  cfg.grid_points = std::max(2000, static_cast<int>(std::ceil(200.0 * decades)));
  const ScanResult scan = find_bound_states(kappa, cfg, mass, DeformationParams(beta, 0.0));

  SpectrumComparison cmp;
  cmp.warnings = scan.warnings;
  std::vector<bool> used(scan.states.size(), false);
  int paired_valid = 0;
  int valid_levels = 0;
  for (const auto& lv : asym) {
    LevelComparison lc;
    lc.n = lv.n;
    lc.omega_asymptotic = lv.omega;
    lc.valid = lv.valid;
    lc.omega_numeric = std::numeric_limits<double>::quiet_NaN();
    lc.rel_error = std::numeric_limits<double>::quiet_NaN();
    double best = half_period;
    std::size_t best_i = scan.states.size();
    for (std::size_t i = 0; i < scan.states.size(); ++i) {
      if (used[i]) continue;
      const double dist = std::abs(std::log(scan.states[i].omega / lv.omega));
      if (dist < best) {
        best = dist;
        best_i = i;
      }
    }
    if (best_i < scan.states.size()) {
      used[best_i] = true;
      lc.omega_numeric = scan.states[best_i].omega;
      lc.rel_error = std::abs(lc.omega_numeric - lc.omega_asymptotic) / lc.omega_numeric;
      if (lv.valid) ++paired_valid;
    }
    if (lv.valid) ++valid_levels;
    cmp.levels.push_back(lc);
  }
  int numeric_valid = 0;
  const double window_lo = asym.back().omega * std::exp(-half_period);
  for (const auto& s : scan.states)
    if (s.omega < validity_threshold && s.omega > window_lo) ++numeric_valid;
  if (paired_valid != valid_levels || numeric_valid != valid_levels) {
    std::ostringstream os;
    os << "level count mismatch in the validity window: " << valid_levels << " asymptotic, " << numeric_valid
       << " numeric, " << paired_valid << " paired";
    cmp.warnings.push_back(os.str());
  }
  return cmp;
}

}  // namespace mlqm
