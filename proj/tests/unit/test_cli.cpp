#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "gmol_cli/commands.hpp"
#include "gmol_cli/csv.hpp"

using namespace gmol::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_tool(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

// Private copy of a fixture so outputs written beside it do not collide.
fs::path scratch_copy(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("gmol_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path dst = dir / name;
  fs::copy_file(fs::path(GMOL_FIXTURE_DIR) / name, dst, fs::copy_options::overwrite_existing);
  return dst;
}

double field(const CsvTable& t, const std::string& name) { return t.column(name).at(0); }

}  // namespace

TEST_CASE("fit on the Lomax fixture") {
  const fs::path in = scratch_copy("lomax_sample.csv");
  const Run lomax = run_tool({"fit", in.string(), "--model", "lomax"});
  REQUIRE(lomax.code == 0);
  CHECK(lomax.out.find("tau") != std::string::npos);
  const CsvTable lf = read_csv(in.parent_path() / "lomax_sample.fit.csv");
  CHECK(std::abs(field(lf, "tau") - 2.5) < 3.0 * field(lf, "se_tau"));
  CHECK(std::abs(field(lf, "beta") - 3.0) < 3.0 * field(lf, "se_beta"));
  CHECK(field(lf, "alpha") == 1.0);
  CHECK(field(lf, "n") == 300);

  const Run mol = run_tool({"fit", in.string(), "--model", "mol"});
  REQUIRE(mol.code != 1);
  const auto line_of = [&](const std::string& name) {
    const auto at = mol.out.find("\n" + name + " ");
    return mol.out.substr(at + 1, mol.out.find('\n', at + 1) - at - 1);
  };
  CHECK(line_of("lambda").find("fixed") != std::string::npos);
  CHECK(line_of("alpha").find("fixed") == std::string::npos);
  CHECK(read_csv(in.parent_path() / "lomax_sample.fit.csv").find("se_alpha") >= 0);

  const Run full = run_tool({"fit", in.string(), "--model", "gmol"});
  REQUIRE(full.code != 1);
  const CsvTable gf = read_csv(in.parent_path() / "lomax_sample.fit.csv");
  CHECK(field(gf, "loglik") >= field(lf, "loglik") - 1e-6);
  CHECK(gf.find("se_lambda") >= 0);
}

TEST_CASE("fit input errors") {
  const Run missing = run_tool({"fit", "/nonexistent/dir/sample.csv"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("/nonexistent/dir/sample.csv") != std::string::npos);

  const fs::path bad = fs::temp_directory_path() / "gmol_cli_bad.csv";
  {
    std::ofstream f(bad);
    f << "time\n1.5\nabc\n";
  }
  const Run r = run_tool({"fit", bad.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find(":3:") != std::string::npos);

  {
    std::ofstream f(bad);
    f << "time\n1.5\n-2\n3\n";
  }
  CHECK(run_tool({"fit", bad.string()}).code == 1);
  CHECK(run_tool({"fit", bad.string(), "--model", "weibull"}).code == 1);
  CHECK(run_tool({"frobnicate"}).code == 1);
  CHECK(run_tool({"--help"}).code == 0);
}

TEST_CASE("regress on the censored fixture") {
  const fs::path in = scratch_copy("censored_sample.csv");
  const Run r = run_tool({"regress", in.string(), "--model", "gmol"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("H0: MOL vs H1: GMOL") != std::string::npos);
  CHECK(r.out.find("H0: LOMAX vs H1: GMOL") != std::string::npos);
  CHECK(r.out.find("eta11") != std::string::npos);
  const CsvTable res = read_csv(in.parent_path() / "censored_sample.residuals.csv");
  CHECK(res.rows() == 300);
  CHECK(res.header == std::vector<std::string>{"index", "qr", "status"});
  for (const double q : res.column("qr")) CHECK(std::isfinite(q));

  const Run unknown = run_tool({"regress", in.string(), "--covariates", "w"});
  CHECK(unknown.code == 1);
  CHECK(unknown.err.find("w") != std::string::npos);
}

TEST_CASE("simulate") {
  const fs::path out = fs::temp_directory_path() / "gmol_cli_sim.csv";
  const std::vector<std::string> args{"simulate", "--design", "iid", "--truth", "0.5,0.4,9,7", "--n-list",
                                      "40,60", "--reps", "5", "--seed", "7", "--out", out.string()};
  REQUIRE(run_tool(args).code == 0);
  std::ifstream first(out);
  const std::string a((std::istreambuf_iterator<char>(first)), {});
  CHECK(a.rfind("param,n,censoring,AE,Bias,MSE\nalpha,40,0,", 0) == 0);
  CHECK(std::count(a.begin(), a.end(), '\n') == 9);
  REQUIRE(run_tool(args).code == 0);
  std::ifstream second(out);
  const std::string b((std::istreambuf_iterator<char>(second)), {});
  CHECK(a == b);

  CHECK(run_tool({"simulate", "--design", "iid", "--truth", "0.5,0.4,9,7", "--n-list", "40", "--reps", "0"}).code == 1);
  CHECK(run_tool({"simulate", "--design", "iid", "--truth", "0.5,0.4,9", "--n-list", "40"}).code == 1);
  CHECK(run_tool({"simulate", "--design", "regression", "--truth", "0.5,0.4,9,7", "--n-list", "40"}).code == 1);
  CHECK(run_tool({"simulate", "--design", "iid", "--truth", "1.5,0.4,9,7", "--n-list", "40"}).code == 1);

  const Run reg = run_tool({"simulate", "--design", "regression", "--truth", "0.5,0.3,0.6,0.8,0.2,0.4", "--n-list",
                        "80", "--reps", "3", "--censoring", "0,0.3", "--seed", "2", "--out", "-"});
  REQUIRE(reg.code == 0);
  CHECK(std::count(reg.out.begin(), reg.out.end(), '\n') == 13);
}

TEST_CASE("curve") {
  const fs::path out = fs::temp_directory_path() / "gmol_cli_curve.csv";
  REQUIRE(run_tool({"curve", "--what", "cdf", "--params", "0.5,0.5,2,1", "--grid", "0:200:101", "--out", out.string()})
              .code == 0);
  const CsvTable cdf = read_csv(out);
  CHECK(cdf.header == std::vector<std::string>{"x", "cdf"});
  CHECK(cdf.column("cdf").front() == 0.0);
  CHECK(cdf.column("cdf").back() > 0.999);

  REQUIRE(run_tool({"curve", "--what", "pdf", "--params", "0.5,0.5,2,1", "--grid", "1:3:2001", "--out", out.string()})
              .code == 0);
  const CsvTable pdf = read_csv(out);
  const auto& x = pdf.column("x");
  const auto& f = pdf.column("pdf");
  double area = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) area += 0.5 * (x[i] - x[i - 1]) * (f[i] + f[i - 1]);
  REQUIRE(run_tool({"curve", "--what", "cdf", "--params", "0.5,0.5,2,1", "--grid", "1:3:2", "--out", out.string()})
              .code == 0);
  const CsvTable ends = read_csv(out);
  CHECK(std::abs(area - (ends.column("cdf")[1] - ends.column("cdf")[0])) < 1e-3);

  REQUIRE(run_tool({"curve", "--what", "lorenz", "--params", "0.5,0.5,6,2", "--grid", "0.01:0.99:50", "--out",
                out.string()})
              .code == 0);
  const CsvTable lz = read_csv(out);
  CHECK(lz.header[0] == "nu");
  for (std::size_t i = 0; i < lz.rows(); ++i) CHECK(lz.column("lorenz")[i] <= lz.column("nu")[i]);

  CHECK(run_tool({"curve", "--what", "quantile", "--params", "0.5,0.5,6,2", "--grid", "0:0.5:5"}).code == 1);
  CHECK(run_tool({"curve", "--what", "lorenz", "--params", "0.5,0.5,0.8,2", "--grid", "0.1:0.5:5"}).code == 1);
  CHECK(run_tool({"curve", "--what", "pdf", "--params", "0.5,0.5,6,2", "--grid", "0:1"}).code == 1);
  CHECK(run_tool({"curve", "--what", "median", "--params", "0.5,0.5,6,2", "--grid", "0:1:3"}).code == 1);
}

TEST_CASE("CSV helpers") {
  const fs::path p = fs::temp_directory_path() / "gmol_cli_roundtrip.csv";
  {
    std::ofstream f(p);
    write_csv(f, {"a", "b"}, {{1.0 / 3.0, 2.0}, {1e-300, -4.5}});
  }
  const CsvTable t = read_csv(p);
  CHECK(t.header == std::vector<std::string>{"a", "b"});
  CHECK(t.column("a")[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(t.column("a")[1] == 1e-300);
  CHECK(t.column("b")[1] == -4.5);
  CHECK(t.find("c") == -1);
  CHECK(format_number(0.1) == "0.1");
  CHECK(parse_number_list("1, 2.5,3", "--x") == std::vector<double>{1, 2.5, 3});
  CHECK_THROWS_AS(parse_number_list("1,,3", "--x"), UsageError);
}
