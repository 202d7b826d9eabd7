#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "mlqm/core.hpp"
#include "mlqm/mapping.hpp"
#include "mlqm/spectra.hpp"

namespace mlqm::cli {

namespace {

using Json = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  int n_dim = 2;
  int angular = 0;
  double mass = 1.0;
  double beta = 1.0;
  double beta_prime = 0.0;
  std::optional<double> kappa, theta, alpha, dipole;
  double omega_min = 1e-8;
  double omega_max = 5.0;
  std::string grid = "log";
  int points = 2000;
  double tol = 1e-10;
  double exclusion = kDefaultExclusionHalfWidth;
  std::string out;
  std::string format = "csv";
  int figure_id = 0;
  int levels = 3;
  std::optional<double> omega;
  // Grid options given explicitly (figures have their own defaults).
  bool grid_overridden[4] = {false, false, false, false};
};

struct Table {
  std::vector<std::string> columns;
  std::vector<bool> integer;
  std::vector<std::vector<double>> rows;
  Json meta = Json::object();
  std::vector<std::string> warnings;

  void column(std::string name, bool is_int = false) {
    columns.push_back(std::move(name));
    integer.push_back(is_int);
  }
};

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

std::string meta_text(const Json& v) {
  if (v.is_number_float()) return num(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void write_csv(const Table& t, std::ostream& os) {
  for (const auto& [k, v] : t.meta.items()) os << "# " << k << '=' << meta_text(v) << '\n';
  for (const auto& w : t.warnings) os << "# warning: " << w << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      if (t.integer[i])
        os << static_cast<long long>(row[i]);
      else
        os << num(row[i]);
    }
    os << '\n';
  }
}

void write_jsonl(const Table& t, std::ostream& os) {
  Json meta = t.meta;
  meta["warnings"] = t.warnings;
  os << Json{{"_meta", meta}}.dump() << '\n';
  for (const auto& row : t.rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (t.integer[i])
        obj[t.columns[i]] = static_cast<long long>(row[i]);
      else if (std::isfinite(row[i]))
        obj[t.columns[i]] = row[i];
      else
        obj[t.columns[i]] = nullptr;
    }
    os << obj.dump() << '\n';
  }
}

bool has_dipole(const RunConfig& c) { return c.theta || c.alpha || c.dipole; }

DipoleConfig dipole_config(const RunConfig& c) {
  std::string missing;
  if (!c.theta) missing += " --theta";
  if (!c.alpha) missing += " --alpha";
  if (!c.dipole) missing += " --dipole";
  if (!missing.empty()) throw ConfigError("incomplete dipole inputs, missing" + missing);
  return DipoleConfig{*c.theta, *c.alpha, *c.dipole, c.mass};
}

double resolve_kappa(const RunConfig& c) {
  if (c.kappa && has_dipole(c)) throw ConfigError("supply either --kappa or --theta/--alpha/--dipole, not both");
  if (c.kappa) return *c.kappa;
  if (has_dipole(c)) return dipole_coupling(dipole_config(c));
  throw ConfigError("a coupling is required: --kappa or --theta/--alpha/--dipole");
}

void validate(const RunConfig& c) {
  if (!(c.tol > 0.0)) throw ConfigError("--tol must be positive");
  if (!(c.exclusion > 0.0)) throw ConfigError("--exclusion must be positive");
  if (!(c.mass > 0.0)) throw ConfigError("--mass must be positive");
  if (c.n_dim < 2) throw ConfigError("--n-dim must be at least 2");
  if (c.points < 1) throw ConfigError("--points must be positive");
  if (c.levels < 0) throw ConfigError("--levels must be nonnegative");
}

void echo_common(const RunConfig& c, Table& t) {
  t.meta["command"] = c.command;
  t.meta["n_dim"] = c.n_dim;
  t.meta["angular"] = c.angular;
  t.meta["mass"] = c.mass;
  t.meta["beta"] = c.beta;
  t.meta["beta_prime"] = c.beta_prime;
  if (c.kappa) t.meta["kappa_input"] = *c.kappa;
  if (c.theta) t.meta["theta"] = *c.theta;
  if (c.alpha) t.meta["alpha"] = *c.alpha;
  if (c.dipole) t.meta["dipole"] = *c.dipole;
  t.meta["format"] = c.format;
}

void echo_scan(const ScanConfig& s, Table& t) {
  t.meta["omega_min"] = s.omega_min;
  t.meta["omega_max"] = s.omega_max;
  t.meta["grid"] = s.grid == GridKind::logarithmic ? "log" : "linear";
  t.meta["points"] = s.grid_points;
  t.meta["tol"] = s.root_tol;
  t.meta["exclusion"] = s.exclusion_half_width;
}

ScanConfig scan_config(const RunConfig& c) {
  ScanConfig s;
  s.omega_min = c.omega_min;
  s.omega_max = c.omega_max;
  s.grid = c.grid == "linear" ? GridKind::linear : GridKind::logarithmic;
  s.grid_points = c.points;
  s.root_tol = c.tol;
  s.exclusion_half_width = c.exclusion;
  s.validate();
  return s;
}

void require_reduced(const RunConfig& c, const char* what) {
  if (c.n_dim != 2 || c.angular != 0 || c.beta_prime != 0.0)
    throw ConfigError(std::string(what) + " supports only n-dim=2, angular=0, beta-prime=0");
}

Table cmd_scan(const RunConfig& c) {
  require_reduced(c, "scan");
  const double kappa = resolve_kappa(c);
  const ScanConfig s = scan_config(c);
  Table t;
  echo_common(c, t);
  echo_scan(s, t);
  t.meta["kappa"] = kappa;
  const ScanResult r = find_bound_states(kappa, s, c.mass, DeformationParams(c.beta, c.beta_prime));
  t.warnings = r.warnings;
  t.column("index", true);
  t.column("omega");
  t.column("energy");
  t.column("residual");
  for (const auto& st : r.states) t.rows.push_back({double(st.index), st.omega, st.energy, st.residual});
  return t;
}

Table cmd_spectrum(const RunConfig& c) {
  require_reduced(c, "spectrum");
  const double kappa = resolve_kappa(c);
  Table t;
  echo_common(c, t);
  t.meta["kappa"] = kappa;
  t.meta["levels"] = c.levels;
  t.meta["validity_threshold"] = 0.05;
  const auto asym = asymptotic_spectrum(kappa, c.beta, c.mass, c.levels);
  const auto cmp = compare_spectra(kappa, c.beta, c.mass, c.levels + 1);
  t.meta["phase"] = asymptotic_phase(kappa);
  t.warnings = cmp.warnings;
  t.column("n", true);
  t.column("energy");
  t.column("omega_asymptotic");
  t.column("valid", true);
  t.column("omega_numeric");
  t.column("rel_error");
  for (std::size_t i = 0; i < asym.size(); ++i) {
    const auto& a = asym[i];
    const auto& m = cmp.levels[i];
    t.rows.push_back({double(a.n), a.energy, a.omega, a.valid ? 1.0 : 0.0, m.omega_numeric, m.rel_error});
  }
  return t;
}

Table cmd_wavefn(const RunConfig& c) {
  const double kappa = resolve_kappa(c);
  const DeformationParams d(c.beta, c.beta_prime);
  const SystemSpec s(c.n_dim, c.angular, c.mass, kappa);
  Table t;
  echo_common(c, t);
  t.meta["kappa"] = kappa;
  t.meta["points"] = c.points;
  t.meta["exclusion"] = c.exclusion;
  double omega;
  if (c.omega) {
    omega = *c.omega;
    t.meta["omega"] = omega;
  } else {
    require_reduced(c, "wavefn without --omega");
    // --points sets the sample count here; the ground-state search keeps the default grid size.
    RunConfig sc_cfg = c;
    sc_cfg.points = ScanConfig{}.grid_points;
    const ScanConfig sc = scan_config(sc_cfg);
    echo_scan(sc, t);
    t.meta["scan_points"] = sc.grid_points;
    t.meta["points"] = c.points;
    const ScanResult r = find_bound_states(kappa, sc, c.mass, d);
    if (r.states.empty()) throw ConfigError("no bound state found; pass --omega");
    omega = r.states.front().omega;
    t.meta["omega"] = omega;
    t.meta["omega_source"] = "ground state";
  }
  if (c.angular != 0) t.warnings.push_back("angular momentum != 0: the general parameter map is experimental");
  WavefunctionSpec ws = WavefunctionSpec::build(s, d, DimensionlessEnergy(omega), 1.0, c.exclusion);
  try {
    const NormResult nr = weighted_norm(ws, s, d);
    if (!nr.converged) t.warnings.push_back("norm quadrature resolutions differ by more than 1e-6");
    ws = ws.with_normalization(1.0 / nr.norm);
    t.meta["normalization"] = ws.normalization();
  } catch (const DomainError& ex) {
    t.warnings.push_back(std::string("not normalized: ") + ex.what());
    t.meta["normalization"] = 1.0;
  }
  std::vector<double> xi(c.points);
  for (int i = 0; i < c.points; ++i) xi[i] = static_cast<double>(i) / c.points;
  const auto phi = wavefunction_on_xi_grid(ws, xi);
  t.column("p");
  t.column("xi");
  t.column("phi");
  for (int i = 0; i < c.points; ++i) t.rows.push_back({p_of_xi(xi[i], d), xi[i], phi[i]});
  return t;
}

Table cmd_coupling(const RunConfig& c) {
  if (c.kappa) throw ConfigError("coupling takes --theta/--alpha/--dipole, not --kappa");
  const DipoleConfig dc = dipole_config(c);
  const double kappa = dipole_coupling(dc);
  Table t;
  echo_common(c, t);
  t.column("theta");
  t.column("alpha");
  t.column("dipole");
  t.column("mass");
  t.column("kappa");
  t.column("four_kappa");
  t.rows.push_back({dc.theta, dc.alpha_string, dc.dipole_moment, dc.mass, kappa, 4.0 * kappa});
  return t;
}

Table cmd_figure(const RunConfig& c) {
  if (c.figure_id < 1 || c.figure_id > 4) throw ConfigError("--figure-id must be 1, 2, 3 or 4");
  if (c.kappa || has_dipole(c)) throw ConfigError("figures fix the coupling; drop --kappa/--theta/--alpha/--dipole");
  std::vector<double> four_kappa;
  RunConfig g = c;
  // Defaults for the plotted range; explicit grid options take precedence.
  const bool fig1 = c.figure_id == 1;
  if (!c.grid_overridden[0]) g.omega_min = fig1 ? 0.01 : 1e-6;
  if (!c.grid_overridden[1]) g.omega_max = 1.0;
  if (!c.grid_overridden[2]) g.grid = fig1 ? "linear" : "log";
  if (!c.grid_overridden[3]) g.points = 400;
  switch (c.figure_id) {
    case 1: four_kappa = {0.2758, 0.5767}; break;
    case 2: four_kappa = {0.0}; break;
    case 3: four_kappa = {-0.2}; break;
    default: four_kappa = {-6.0}; break;
  }
  const ScanConfig s = scan_config(g);
  Table t;
  echo_common(c, t);
  t.meta["figure_id"] = c.figure_id;
  t.meta["four_kappa"] = four_kappa;
  echo_scan(s, t);
  t.column("omega");
  if (fig1) {
    t.column("h_4k_0.2758");
    t.column("h_4k_0.5767");
  } else {
    t.column("h");
  }
  for (double w : scan_grid(s, false)) {
    std::vector<double> row{w};
    for (double fk : four_kappa) row.push_back(quantization_h(w, fk / 4.0, s.exclusion_half_width));
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Bound states of the inverse-square potential with a minimal length"};
  app.set_config("--config", "", "flat key=value file; command-line flags take precedence");
  app.add_option("--command", c.command, "scan | spectrum | wavefn | figure | coupling")
      ->required()
      ->check(CLI::IsMember({"scan", "spectrum", "wavefn", "figure", "coupling"}));
  app.add_option("--kappa", c.kappa, "dimensionless coupling kappa = M delta / 2");
  app.add_option("--theta", c.theta, "dipole angle to the string, radians");
  app.add_option("--alpha", c.alpha, "string deficit parameter in (0, 1)");
  app.add_option("--dipole", c.dipole, "dipole moment");
  app.add_option("--mass", c.mass, "particle mass")->capture_default_str();
  app.add_option("--beta", c.beta, "minimal-length parameter beta")->capture_default_str();
  app.add_option("--beta-prime", c.beta_prime, "minimal-length parameter beta'")->capture_default_str();
  app.add_option("--n-dim", c.n_dim, "space dimension N")->capture_default_str();
  app.add_option("--angular", c.angular, "angular quantum number l (|m| for N = 2)")->capture_default_str();
  auto* o_min = app.add_option("--omega-min", c.omega_min, "scan lower bound")->capture_default_str();
  auto* o_max = app.add_option("--omega-max", c.omega_max, "scan upper bound")->capture_default_str();
  auto* o_grid = app.add_option("--grid", c.grid, "log | linear")
                     ->check(CLI::IsMember({"log", "linear"}))
                     ->capture_default_str();
  auto* o_pts = app.add_option("--points", c.points, "grid points")->capture_default_str();
  app.add_option("--tol", c.tol, "root tolerance")->capture_default_str();
  app.add_option("--exclusion", c.exclusion, "half-width of the band excluded around omega = 1/2")
      ->capture_default_str();
  app.add_option("--out", c.out, "output file (default: standard output)");
  app.add_option("--format", c.format, "csv | jsonl")->check(CLI::IsMember({"csv", "jsonl"}))->capture_default_str();
  app.add_option("--figure-id", c.figure_id, "figure number for the figure command");
  app.add_option("--levels", c.levels, "highest level index n for the spectrum command")->capture_default_str();
  app.add_option("--omega", c.omega, "dimensionless energy for the wavefn command");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitData : kExitError;
  }
  c.grid_overridden[0] = o_min->count() > 0;
  c.grid_overridden[1] = o_max->count() > 0;
  c.grid_overridden[2] = o_grid->count() > 0;
  c.grid_overridden[3] = o_pts->count() > 0;

  Table t;
  try {
    validate(c);
    if (c.command == "scan")
      t = cmd_scan(c);
    else if (c.command == "spectrum")
      t = cmd_spectrum(c);
    else if (c.command == "wavefn")
      t = cmd_wavefn(c);
    else if (c.command == "coupling")
      t = cmd_coupling(c);
    else
      t = cmd_figure(c);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << c.command << ": " << e.what() << '\n';
    return kExitError;
  }

  for (const auto& w : t.warnings) err << "warning: " << w << '\n';
  auto emit = [&](std::ostream& os) {
    if (c.format == "jsonl")
      write_jsonl(t, os);
    else
      write_csv(t, os);
  };
  if (c.out.empty()) {
    emit(out);
  } else {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) {
      err << "cannot open output file '" << c.out << "'\n";
      return kExitError;
    }
    emit(f);
    f.flush();
    if (!f) {
      err << "failed writing output file '" << c.out << "'\n";
      return kExitError;
    }
  }
  return t.rows.empty() ? kExitEmpty : kExitData;
}

}  // namespace mlqm::cli
