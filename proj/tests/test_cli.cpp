#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
};

// Runs the CLI with stderr folded into the captured output when requested.
Run cli(const std::string& args, bool with_stderr = false) {
  const std::string cmd = std::string(MAGDDE_CLI) + " " + args + (with_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::vector<std::string> data_rows(const std::string& csv) {
  std::vector<std::string> rows;
  std::istringstream in(csv);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    rows.push_back(line);
  }
  return rows;
}

std::vector<double> fields(const std::string& row) {
  std::vector<double> out;
  std::istringstream in(row);
  std::string cell;
  while (std::getline(in, cell, ',')) out.push_back(std::stod(cell));
  return out;
}

std::string header_value(const std::string& csv, const std::string& key) {
  const std::string tag = "# " + key + " = ";
  const auto pos = csv.find(tag);
  if (pos == std::string::npos) return {};
  const auto end = csv.find('\n', pos);
  return csv.substr(pos + tag.size(), end - pos - tag.size());
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "magdde_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("solve writes node rows for every interval") {
  const auto r = cli("solve --problem example1 --N 20 --M 64 --order 6 --t-final 6.2832");
  REQUIRE(r.status == 0);
  const auto rows = data_rows(r.out);
  CHECK(rows.size() == 4 * 21);
  CHECK(r.out.find("interval,node_index,time,component_index,value\n") != std::string::npos);
  CHECK(header_value(r.out, "N") == "20");
  CHECK(header_value(r.out, "order") == "6");
  CHECK(header_value(r.out, "note").find("snapped") != std::string::npos);
  const auto last = fields(rows.back());
  CHECK(last[0] == 4);
  CHECK(last[1] == 20);
  CHECK(std::abs(last[2] - 3 * M_PI / 2) < 1e-12);
}

TEST_CASE("solve on the SIR model conserves the population") {
  const auto r = cli("solve --problem sir --order 3 --N 20 --M 20 --t-final 10");
  REQUIRE(r.status == 0);
  const auto rows = data_rows(r.out);
  REQUIRE(rows.size() == 10 * 21 * 3);
  // Final interval, node 0: three component rows.
  double total = 0.0;
  for (std::size_t i = rows.size() - 63; i < rows.size() - 60; ++i) {
    const auto f = fields(rows[i]);
    CHECK(f[0] == 10);
    CHECK(f[1] == 0);
    total += f[4];
  }
  CHECK(std::abs(total - 1.0) <= 1e-12);
}

TEST_CASE("invalid order lists the admissible ones") {
  auto r = cli("solve --problem example1 --order 5", true);
  CHECK(r.status == 2);
  CHECK(r.out.find("2, 4, 6") != std::string::npos);
  r = cli("solve --problem sir --order 4", true);
  CHECK(r.status == 2);
  CHECK(r.out.find("2, 3") != std::string::npos);
}

TEST_CASE("usage errors name the field") {
  auto r = cli("solve --N 0", true);
  CHECK(r.status == 2);
  CHECK(r.out.find("--N") != std::string::npos);
  r = cli("solve --M -3", true);
  CHECK(r.status == 2);
  CHECK(r.out.find("--M") != std::string::npos);
  r = cli("solve --problem nope", true);
  CHECK(r.status == 2);
  CHECK(r.out.find("--problem") != std::string::npos);
  r = cli("solve --param delta", true);
  CHECK(r.status == 2);
  CHECK(r.out.find("--param") != std::string::npos);
  r = cli("solve --t-final 2 --periods 1", true);
  CHECK(r.status == 2);
  r = cli("frobnicate", true);
  CHECK(r.status == 2);
  r = cli("", true);
  CHECK(r.status == 2);
}

TEST_CASE("multipliers for the scalar periodic problem") {
  const auto r = cli("multipliers --problem example1");
  REQUIRE(r.status == 0);
  const auto rows = data_rows(r.out);
  CHECK(rows.size() == 21);
  const auto first = fields(rows[0]);
  CHECK(first[0] == 1);
  CHECK(std::abs(first[1] - 1.0) < 1e-6);
  CHECK(std::abs(first[2]) < 1e-6);
  CHECK(std::abs(first[3] - 1.0) < 1e-6);
  CHECK(r.out.find("rank,re,im,modulus\n") != std::string::npos);
  CHECK(header_value(r.out, "verdict").size() > 0);
}

TEST_CASE("multipliers for the delayed Mathieu equation") {
  const auto r = cli("multipliers --problem mathieu --param delta=1.5 --param epsilon=0.5 --param b=-0.2 --N 30 --M 64");
  REQUIRE(r.status == 0);
  const auto rows = data_rows(r.out);
  CHECK(rows.size() == 62);
  double best = INFINITY;
  for (const auto& row : rows) {
    const auto f = fields(row);
    best = std::min(best, std::hypot(f[1] - 0.22751840350292177638, f[2] - 1.41717517421553068346));
  }
  CHECK(best <= 1e-10);
  CHECK(header_value(r.out, "verdict") == "unstable");
}

TEST_CASE("multipliers refuse aperiodic and quasilinear problems") {
  CHECK(cli("multipliers --problem sir").status == 2);
  CHECK(cli("multipliers --problem nonlinear-scalar").status == 2);
}

TEST_CASE("convergence study fits the order") {
  auto r = cli("convergence --problem example1 --order 4 --N 20 --M-list 4,8,16,32 --metric multiplier --rank 1 --jobs 3");
  REQUIRE(r.status == 0);
  CHECK(data_rows(r.out).size() == 4);
  CHECK(std::abs(std::stod(header_value(r.out, "fitted_slope")) - 4.0) <= 0.4);

  r = cli("convergence --problem nonlinear-scalar --order 2 --N 20 --M-list 8,16,32,64");
  REQUIRE(r.status == 0);
  CHECK(std::abs(std::stod(header_value(r.out, "fitted_slope")) - 2.0) <= 0.4);
  CHECK(header_value(r.out, "reference") == "builtin exact solution");
}

TEST_CASE("convergence results do not depend on the worker count") {
  const std::string base = "convergence --problem example1 --order 2 --N 10 --M-list 4,8,16,32";
  const auto serial = cli(base + " --jobs 1");
  const auto parallel = cli(base + " --jobs 4");
  REQUIRE(serial.status == 0);
  REQUIRE(parallel.status == 0);
  CHECK(data_rows(serial.out) == data_rows(parallel.out));
}

TEST_CASE("order 6 at small N saturates at the spectral floor") {
  const auto r = cli("convergence --problem example1 --order 6 --N 10 --M-list 16,32,64,128");
  REQUIRE(r.status == 0);
  const auto rows = data_rows(r.out);
  const double e64 = fields(rows[2])[1], e128 = fields(rows[3])[1];
  CHECK(e128 > 0.5 * e64);
}

TEST_CASE("convergence labels a self reference") {
  const auto r = cli("convergence --problem sir --order 3 --N 10 --M-list 10,20 --t-final 2");
  REQUIRE(r.status == 0);
  CHECK(header_value(r.out, "reference").find("self-reference") != std::string::npos);
  CHECK(cli("convergence --problem sir --metric multiplier").status == 2);
  CHECK(cli("convergence --problem mathieu --param b=0.1 --metric multiplier").status == 2);
}

TEST_CASE("audit reports conservation per interval") {
  const auto r = cli("audit --problem sir --N 20 --M 20 --t-final 10");
  REQUIRE(r.status == 0);
  const auto rows = data_rows(r.out);
  REQUIRE(rows.size() == 10);
  for (const auto& row : rows) {
    const auto f = fields(row);
    CHECK(f[2] <= 1e-12);
    CHECK(f[4] >= -1e-13);
  }
  CHECK(cli("audit --problem mathieu").status == 2);
}

TEST_CASE("audit node error decreases with N") {
  double previous = INFINITY;
  for (int n : {10, 20, 40}) {
    const auto r = cli("audit --problem sir --N " + std::to_string(n) + " --M 20 --t-final 10");
    REQUIRE(r.status == 0);
    const double mean = fields(data_rows(r.out).front())[3];
    CHECK(mean < previous);
    previous = mean;
  }
}

TEST_CASE("csv output is byte-identical across runs") {
  const auto a = scratch("a.csv"), b = scratch("b.csv");
  REQUIRE(cli("multipliers --problem mathieu --N 12 --M 8 --out " + a.string()).status == 0);
  REQUIRE(cli("multipliers --problem mathieu --N 12 --M 8 --out " + b.string()).status == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).size() > 0);
  REQUIRE(cli("solve --problem sir --N 8 --M 5 --periods 2 --out " + a.string()).status == 0);
  REQUIRE(cli("solve --problem sir --N 8 --M 5 --periods 2 --out " + b.string()).status == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("stored steps go to a side file") {
  const auto out = scratch("steps.csv");
  fs::remove(out.string() + ".steps.csv");
  REQUIRE(cli("solve --problem example1 --N 4 --M 3 --order 2 --periods 1 --store-steps --out " + out.string()).status == 0);
  const auto steps = slurp(out.string() + ".steps.csv");
  // 4 intervals, 3 steps, 5 nodes.
  CHECK(data_rows(steps).size() == 4 * 3 * 5);
  CHECK(cli("solve --problem example1 --store-steps").status == 2);
}

TEST_CASE("config file values are overridden by flags") {
  const auto cfg = scratch("run.toml");
  {
    std::ofstream f(cfg);
    f << "problem = \"mathieu\"\nN = 6\nM = 4\norder = 4\nparam = [\"delta=2\", \"epsilon=1\"]\n";
  }
  const auto r = cli("multipliers --config " + cfg.string() + " --M 9");
  REQUIRE(r.status == 0);
  CHECK(header_value(r.out, "problem") == "mathieu");
  CHECK(header_value(r.out, "N") == "6");
  CHECK(header_value(r.out, "M") == "9");
  CHECK(header_value(r.out, "order") == "4");
  CHECK(header_value(r.out, "description").find("delta=2") != std::string::npos);
  CHECK(data_rows(r.out).size() == 14);

  {
    std::ofstream f(cfg);
    f << "N = \"many\"\n";
  }
  CHECK(cli("solve --config " + cfg.string()).status == 2);
  CHECK(cli("solve --config " + scratch("missing.toml").string()).status == 2);
}

TEST_CASE("warnings can be promoted to errors") {
  auto r = cli("solve --problem example1 --N 20 --M 4", true);
  CHECK(r.status == 0);
  CHECK(r.out.find("warning:") != std::string::npos);
  r = cli("solve --problem example1 --N 20 --M 4 --warn-as-error", true);
  CHECK(r.status == 1);
}

TEST_CASE("numerical failure exits with status 1") {
  // An incidence rate this large overflows the exponential.
  const auto r = cli("solve --problem sir --param beta=1e300 --N 4 --M 2 --periods 1", true);
  CHECK(r.status == 1);
  CHECK(r.out.find("error:") != std::string::npos);
}
