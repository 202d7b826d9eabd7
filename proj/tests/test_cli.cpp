#include "doctest.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = mlqm::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

std::string header(const std::string& s) {
  std::string h;
  for (const auto& l : lines(s))
    if (l.rfind("#", 0) == 0) h += l + "\n";
  return h;
}

// Data rows (after the column header), split on commas.
std::vector<std::vector<double>> rows(const std::string& s) {
  std::vector<std::vector<double>> out;
  bool seen_columns = false;
  for (const auto& l : lines(s)) {
    if (l.rfind("#", 0) == 0) continue;
    if (!seen_columns) {
      seen_columns = true;
      continue;
    }
    std::vector<double> r;
    std::istringstream is(l);
    for (std::string cell; std::getline(is, cell, ',');) {
      double x = 0;
      if (cell == "nan")
        x = NAN;
      else
        std::from_chars(cell.data(), cell.data() + cell.size(), x);
      r.push_back(x);
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace

TEST_CASE("coupling command") {
  const Run r = run({"--command", "coupling", "--theta", std::to_string(std::numbers::pi / 12), "--dipole", "1",
                     "--alpha", "0.2", "--mass", "1"});
  REQUIRE(r.code == mlqm::cli::kExitData);
  const auto rs = rows(r.out);
  REQUIRE(rs.size() == 1);
  CHECK(std::abs(rs[0][5] - 0.2758) < 5e-4);
  CHECK(lines(r.out)[header(r.out).empty() ? 0 : lines(header(r.out)).size()] ==
        "theta,alpha,dipole,mass,kappa,four_kappa");
}

TEST_CASE("scan exit codes") {
  const Run empty = run({"--command", "scan", "--kappa", "0"});
  CHECK(empty.code == mlqm::cli::kExitEmpty);
  CHECK(rows(empty.out).empty());

  const Run full = run({"--command", "scan", "--kappa", "-1.5"});
  CHECK(full.code == mlqm::cli::kExitData);
  const auto rs = rows(full.out);
  REQUIRE_FALSE(rs.empty());
  CHECK(rs[0][0] == 0);
  CHECK(std::abs(rs[0][1] - 0.52) < 0.01);

  CHECK(run({"--command", "scan", "--kappa", "-1.5", "--n-dim", "3"}).code == mlqm::cli::kExitError);
}

TEST_CASE("spectrum command") {
  const Run r = run({"--command", "spectrum", "--kappa", "-0.05", "--beta", "1", "--mass", "1", "--levels", "3"});
  REQUIRE(r.code == mlqm::cli::kExitData);
  const auto rs = rows(r.out);
  REQUIRE(rs.size() == 4);
  const double ratio = std::exp(-2 * std::numbers::pi / std::sqrt(0.2));
  for (std::size_t i = 1; i < rs.size(); ++i) CHECK(rs[i][1] / rs[i - 1][1] == doctest::Approx(ratio).epsilon(1e-12));
  CHECK(run({"--command", "spectrum", "--kappa", "0.1"}).code == mlqm::cli::kExitError);
}

TEST_CASE("figures") {
  const Run f2 = run({"--command", "figure", "--figure-id", "2"});
  REQUIRE(f2.code == 0);
  const auto r2 = rows(f2.out);
  CHECK(r2.size() == 400);
  for (const auto& r : r2) CHECK(r[1] == doctest::Approx(2 * r[0]).epsilon(1e-12));

  const auto r4 = rows(run({"--command", "figure", "--figure-id", "4"}).out);
  int flips = 0;
  double lo = 0, hi = 0;
  for (std::size_t i = 1; i < r4.size(); ++i) {
    if (r4[i - 1][0] < 0.1 || r4[i][0] > 1.0) continue;
    if ((r4[i - 1][1] < 0) != (r4[i][1] < 0)) {
      ++flips;
      lo = r4[i - 1][0];
      hi = r4[i][0];
    }
  }
  CHECK(flips == 1);
  CHECK(lo < 0.52);
  CHECK(hi > 0.52);

  const Run f1 = run({"--command", "figure", "--figure-id", "1"});
  const auto r1 = rows(f1.out);
  REQUIRE(r1.size() == 400);
  CHECK(r1.front()[0] == doctest::Approx(0.01));
  for (const auto& r : r1) {
    REQUIRE(r.size() == 3);
    CHECK(r[1] > 0);
    CHECK(r[2] > 0);
  }
  CHECK(header(f1.out).find("# grid=linear") != std::string::npos);

  CHECK(run({"--command", "figure", "--figure-id", "5"}).code == mlqm::cli::kExitError);
  CHECK(run({"--command", "figure", "--figure-id", "2", "--kappa", "1"}).code == mlqm::cli::kExitError);
  CHECK(rows(run({"--command", "figure", "--figure-id", "3", "--points", "50"}).out).size() == 50);
}

TEST_CASE("wavefn command") {
  const Run r = run({"--command", "wavefn", "--kappa", "-1.5", "--points", "20"});
  REQUIRE(r.code == 0);
  const auto rs = rows(r.out);
  REQUIRE(rs.size() == 20);
  CHECK(rs[0][0] == 0.0);
  CHECK(rs[0][2] == doctest::Approx(1.0 / 0.32804282399687898862).epsilon(1e-6));
  CHECK(run({"--command", "wavefn", "--kappa", "0"}).code == mlqm::cli::kExitError);
  CHECK(run({"--command", "wavefn", "--kappa", "-0.8", "--n-dim", "3", "--omega", "0.2", "--points", "10"}).code ==
        0);
}

TEST_CASE("determinism") {
  const std::vector<std::string> args{"--command", "scan", "--kappa", "-1.5", "--points", "300"};
  CHECK(run(args).out == run(args).out);

  const auto dir = std::filesystem::temp_directory_path();
  const auto p1 = (dir / "mlqm_det_1.csv").string();
  const auto p2 = (dir / "mlqm_det_2.csv").string();
  auto with_out = [&](const std::string& p) {
    auto a = args;
    a.push_back("--out");
    a.push_back(p);
    return run(a);
  };
  REQUIRE(with_out(p1).code == 0);
  REQUIRE(with_out(p2).code == 0);
  auto slurp = [](const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(f), {});
  };
  CHECK(slurp(p1) == slurp(p2));
  CHECK(slurp(p1) == run(args).out);
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
}

TEST_CASE("header echoes every parameter") {
  const std::vector<std::string> base{"--command", "scan", "--kappa", "-1.5", "--points", "200"};
  const std::string h0 = header(run(base).out);
  const std::vector<std::pair<std::string, std::string>> changes{
      {"--kappa", "-1.4"},     {"--mass", "2"},        {"--beta", "3"},          {"--omega-min", "1e-6"},
      {"--omega-max", "4"},    {"--grid", "linear"},   {"--points", "300"},      {"--tol", "1e-9"},
      {"--exclusion", "1e-5"}, {"--format", "jsonl"}};
  for (const auto& [flag, value] : changes) {
    auto a = base;
    const auto it = std::find(a.begin(), a.end(), flag);
    if (it != a.end()) {
      *(it + 1) = value;
    } else {
      a.push_back(flag);
      a.push_back(value);
    }
    const Run r = run(a);
    CAPTURE(flag);
    REQUIRE(r.code != mlqm::cli::kExitError);
    const std::string h = flag == "--format" ? lines(r.out)[0] : header(r.out);
    CHECK(h != h0);
  }
  const std::string hd =
      header(run({"--command", "coupling", "--theta", "0.3", "--alpha", "0.2", "--dipole", "1"}).out);
  for (const char* key : {"# theta=", "# alpha=", "# dipole=", "# mass="}) CHECK(hd.find(key) != std::string::npos);
}

TEST_CASE("jsonl round trip") {
  const std::vector<std::string> args{"--command", "spectrum", "--kappa", "-1.5", "--levels", "4"};
  auto csv = args;
  csv.insert(csv.end(), {"--format", "csv"});
  auto js = args;
  js.insert(js.end(), {"--format", "jsonl"});
  const auto want = rows(run(csv).out);
  const auto jl = lines(run(js).out);
  REQUIRE(jl.size() == want.size() + 1);
  const auto meta = nlohmann::json::parse(jl[0]);
  CHECK(meta.contains("_meta"));
  CHECK(meta["_meta"]["kappa"].get<double>() == -1.5);
  const std::vector<std::string> cols{"n", "energy", "omega_asymptotic", "valid", "omega_numeric", "rel_error"};
  for (std::size_t i = 0; i < want.size(); ++i) {
    const auto obj = nlohmann::json::parse(jl[i + 1]);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      CAPTURE(cols[k]);
      CHECK(obj[cols[k]].get<double>() == want[i][k]);
    }
  }
}

TEST_CASE("config validation") {
  const Run both = run({"--command", "scan", "--kappa", "-1", "--theta", "0.3"});
  CHECK(both.code == mlqm::cli::kExitError);
  CHECK(both.err.find("--kappa") != std::string::npos);
  const Run partial = run({"--command", "coupling", "--theta", "0.3"});
  CHECK(partial.code == mlqm::cli::kExitError);
  CHECK(partial.err.find("--alpha") != std::string::npos);
  CHECK(partial.err.find("--dipole") != std::string::npos);
  CHECK(run({"--command", "scan"}).code == mlqm::cli::kExitError);
  CHECK(run({"--command", "bogus"}).code == mlqm::cli::kExitError);
  CHECK(run({"--command", "scan", "--kappa", "-1", "--tol", "0"}).code == mlqm::cli::kExitError);
  const Run grid = run({"--command", "scan", "--kappa", "-1", "--points", "3"});
  CHECK(grid.code == mlqm::cli::kExitError);
  CHECK(grid.err.find("grid_points") != std::string::npos);
  const Run io = run({"--command", "scan", "--kappa", "-1", "--out", "/nonexistent-dir/x.csv"});
  CHECK(io.code == mlqm::cli::kExitError);
  CHECK(io.err.find("/nonexistent-dir/x.csv") != std::string::npos);
}

TEST_CASE("config file with flag override") {
  const auto path = (std::filesystem::temp_directory_path() / "mlqm_cfg.ini").string();
  {
    std::ofstream f(path);
    f << "command=scan\nkappa=-1.5\npoints=300\n";
  }
  const Run from_file = run({"--config", path});
  CHECK(from_file.code == 0);
  CHECK(header(from_file.out).find("# points=300") != std::string::npos);
  const Run overridden = run({"--config", path, "--kappa", "0"});
  CHECK(overridden.code == mlqm::cli::kExitEmpty);
  std::filesystem::remove(path);
}
