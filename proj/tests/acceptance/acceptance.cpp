// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "gmol/distribution.hpp"
#include "gmol/fit.hpp"
#include "gmol/properties.hpp"
#include "gmol/random.hpp"
#include "gmol/regression.hpp"
#include "gmol/simulate.hpp"
#include "gmol/specfun.hpp"
#include "oracles.hpp"

using namespace gmol;
using gmol::test::kReferenceScenarios;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void fail(const std::string& why) {
    failures.push_back(why);
    pass = false;
  }
  void note(const std::string& what) { notes.push_back(what); }

  std::string detail() const {
    std::string out;
    for (const auto* list : {&failures, &notes}) {
      for (const auto& item : *list) out += (out.empty() ? "" : "; ") + item;
    }
    return out;
  }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

int worker_threads() {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("GMOL_THREADS")) n = std::max(1, std::min(n, std::atoi(env)));
  return n;
}

Outcome reduction() {
  Outcome o;
  double worst = 0.0;
  for (const auto& s : kReferenceScenarios) {
    const GmolParams t(1, 1, s.tau(), s.beta());
    const LomaxParams l(s.tau(), s.beta());
    for (const double x : test::logspace(-6, 6, 1000)) {
      worst = std::max({worst, std::abs(cdf(x, t) - lomax_cdf(x, l)), std::abs(pdf(x, t) - lomax_pdf(x, l))});
    }
  }
  if (!(worst < 1e-14)) o.fail(fmt("max deviation %.3g", worst));
  o.note(fmt("max |GMOL - Lomax| = %.3g", worst));
  return o;
}

Outcome quantile_inversion() {
  Outcome o;
  std::vector<GmolParams> points(kReferenceScenarios.begin(), kReferenceScenarios.end());
  points.emplace_back(0.754, 1.0, 2.512, 1.0);
  double worst = 0.0;
  for (const auto& t : points) {
    for (int i = 1; i < 1000; ++i) {
      const double u = i / 1000.0;
      worst = std::max(worst, std::abs(cdf(quantile(u, t), t) - u));
    }
    for (const double u : {1e-12, 1e-8, 1.0 - 1e-8, 1.0 - 1e-12}) {
      worst = std::max(worst, std::abs(cdf(quantile(u, t), t) - u));
    }
  }
  if (!(worst < 1e-10)) o.fail(fmt("max |F(Q(u)) - u| = %.3g", worst));
  o.note(fmt("max |F(Q(u)) - u| = %.3g", worst));
  return o;
}

Outcome series_fidelity() {
  Outcome o;
  double worst_rel = 0.0;
  double worst_mass = 0.0;
  for (const auto& t : kReferenceScenarios) {
    const MixtureRep rep = mixture_rep(t);
    for (const double x : test::logspace(-4, 4, 400)) {
      const double f = pdf(x, t);
      worst_rel = std::max(worst_rel, std::abs(rep.reconstruct_pdf(x) - f) / std::max(f, 1e-300));
    }
    worst_mass = std::max(worst_mass, std::abs(rep.phi_mass()));
  }
  if (!(worst_rel < 1e-7)) o.fail(fmt("reconstruction error %.3g", worst_rel));
  if (!(worst_mass < 1e-8)) o.fail(fmt("phi mass %.3g", worst_mass));
  o.note(fmt("reconstruction %.3g", worst_rel) + fmt(", phi mass %.3g", worst_mass));
  return o;
}

Outcome moment_oracle() {
  Outcome o;
  double worst = 0.0;
  int checked = 0;
  for (const auto& t : kReferenceScenarios) {
    for (const int p : {1, 2}) {
      if (!(t.tau() > p + 0.5)) continue;
      const double ref = test::quad_half_line([&](double x) { return std::pow(x, p) * pdf(x, t); });
      worst = std::max(worst, std::abs(moment(p, t) / ref - 1.0));
      ++checked;
    }
    if (!(t.tau() > 1.5)) continue;
    const double med = quantile(0.5, t);
    for (const double s : {0.1 * med, 0.5 * med, med, 2.0 * med, 10.0 * med}) {
      const double ref = test::quad([&](double x) { return x * pdf(x, t); }, 0.0, s);
      worst = std::max(worst, std::abs(incomplete_moment(1, s, t) / ref - 1.0));
      ++checked;
    }
  }
  if (!(worst < 1e-5)) o.fail(fmt("max relative error %.3g", worst));
  o.note(std::to_string(checked) + fmt(" comparisons, max relative error %.3g", worst));
  return o;
}

void check_study_ae(Outcome& o, const StudyTable& t, int n, double censoring, const std::vector<double>& target,
                    double tol) {
  std::size_t k = 0;
  std::string got;
  for (const auto& row : t.rows) {
    if (row.n != n || row.censoring != censoring) continue;
    got += (got.empty() ? "" : ", ") + row.param + fmt("=%.4f", row.ae);
    if (!(std::abs(row.ae - target[k]) <= tol)) {
      o.fail(row.param + fmt(" AE %.4f", row.ae) + fmt(" vs %.4f", target[k]));
    }
    ++k;
  }
  o.note("AE " + got);
}

void check_mse_decrease(Outcome& o, const StudyTable& t, int n_small, int n_large) {
  for (const auto& small : t.rows) {
    if (small.n != n_small) continue;
    for (const auto& large : t.rows) {
      if (large.n == n_large && large.param == small.param && large.censoring == small.censoring &&
          !(large.mse < small.mse)) {
        o.fail("MSE(" + small.param + fmt(", c=%g)", small.censoring) + " did not decrease");
      }
    }
  }
}

void report_failures(Outcome& o, const StudyTable& t) {
  int failed = 0;
  int total = 0;
  for (const auto& c : t.cells) {
    failed += c.failures;
    total += c.fitted + c.failures;
  }
  o.note(std::to_string(failed) + " of " + std::to_string(total) + " replicate fits excluded");
}

Outcome iid_recovery_study() {
  Outcome o;
  IidStudyConfig cfg;
  cfg.truth = kReferenceScenarios[0];
  cfg.n_list = {50, 300};
  cfg.reps = 1000;
  cfg.seed = 20240601;
  cfg.threads = worker_threads();
  const StudyTable t = run_iid_study(cfg);
  check_study_ae(o, t, 300, 0.0, {0.2030, 0.6128, 0.5047, 0.8255}, 0.03);
  check_mse_decrease(o, t, 50, 300);
  report_failures(o, t);
  return o;
}

Outcome regression_recovery_study() {
  Outcome o;
  RegressionStudyConfig cfg;
  cfg.truth.alpha = 0.5;
  cfg.truth.lambda = 0.3;
  cfg.truth.eta1 = Eigen::Vector2d(0.6, 0.8);
  cfg.truth.eta2 = Eigen::Vector2d(0.2, 0.4);
  cfg.n_list = {100, 500};
  cfg.censor_targets = {0.0, 0.3};
  cfg.reps = 500;
  cfg.seed = 20240602;
  cfg.threads = worker_threads();
  const StudyTable t = run_regression_study(cfg);
  check_study_ae(o, t, 500, 0.0, {0.5305, 0.3209, 0.5850, 0.8058, 0.2212, 0.4296}, 0.05);
  check_mse_decrease(o, t, 100, 500);
  report_failures(o, t);
  return o;
}

Outcome lr_arithmetic() {
  Outcome o;
  const double p1 = specfun::chi_square_sf(7.5186, 1);
  const double p2 = specfun::chi_square_sf(10.2516, 2);
  if (!(p1 >= 0.0060 && p1 <= 0.0062)) o.fail(fmt("df=1 p = %.6f", p1));
  if (!(p2 >= 0.0058 && p2 <= 0.0060)) o.fail(fmt("df=2 p = %.6f", p2));
  RegFitResult full;
  RegFitResult nested;
  full.loglik = 0.0;
  nested.loglik = -7.5186 / 2.0;
  const double via_test = lr_test(full, nested, 1).p_value;
  if (std::abs(via_test - p1) > 1e-15) o.fail("lr_test disagrees with chi-square tail");
  o.note(fmt("p(7.5186, 1) = %.6f", p1) + fmt(", p(10.2516, 2) = %.6f", p2));
  return o;
}

Outcome likelihood_identities() {
  Outcome o;
  Rng rng(8);
  double worst = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    const GmolParams t(rng.uniform(0.01, 1.0), rng.uniform(0.0, 1.0), rng.uniform(0.2, 10.0),
                       rng.uniform(0.1, 10.0));
    const IidSample s(sample(50, t, derive_seed(81, static_cast<std::uint64_t>(draw))));
    double ref = 0.0;
    for (const double x : s.values()) ref += std::log(pdf(x, t));
    worst = std::max(worst, std::abs(loglik_iid(t, s) - ref));

    RegParams z;
    z.alpha = rng.uniform(0.01, 1.0);
    z.lambda = rng.uniform(0.0, 1.0);
    z.eta1 = Eigen::Vector2d(rng.uniform(-1, 1), rng.uniform(-1, 1));
    z.eta2 = Eigen::Vector2d(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const CensoredDesign d =
        simulate_censored_design(z, 50, rng.uniform(1.0, 30.0), derive_seed(82, static_cast<std::uint64_t>(draw)));
    double cref = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      const std::array<double, 2> row{1.0, d.covariates()(static_cast<Eigen::Index>(i), 1)};
      const Systematic sc = systematic_components(z, row);
      const GmolParams ti(z.alpha, z.lambda, sc.tau, sc.beta);
      cref += d.status()[i] == 1 ? std::log(pdf(d.times()[i], ti)) : std::log(survival(d.times()[i], ti));
    }
    worst = std::max(worst, std::abs(loglik_censored(z, d) - cref));
  }
  if (!(worst < 1e-10)) o.fail(fmt("max deviation %.3g", worst));
  o.note(fmt("200 draws, max deviation %.3g", worst));
  return o;
}

Outcome gof_determinism() {
  Outcome o;
  std::ifstream in(std::string(GMOL_TEST_DATA_DIR) + "/gof_seed1234.csv");
  std::string line;
  std::getline(in, line);
  std::vector<double> x;
  while (std::getline(in, line)) {
    if (!line.empty()) x.push_back(std::stod(line));
  }
  if (x.size() != 100) {
    o.fail("fixture missing or truncated");
    return o;
  }
  const IidSample s(x);
  FitResult fit;
  fit.model = SubModel::Lomax;
  fit.theta_hat = GmolParams(1, 1, 1.665945937311597, 0.86924431798422896);
  fit.loglik = loglik_iid(fit.theta_hat, s);
  fit.n = 100;
  fit.converged = true;
  const GofReport g = gof_stats(fit, s);
  // reference values from tests/oracles/gof_oracle.py
  const std::array<std::pair<const char*, std::pair<double, double>>, 9> fields{{
      {"loglik", {fit.loglik, -94.973545494289384}},
      {"w_star", {g.w_star, 0.03497546275354925}},
      {"a_star", {g.a_star, 0.29709364529995243}},
      {"ks", {g.ks, 0.051454466151389182}},
      {"ks_p", {g.ks_p, 0.95387264615193388}},
      {"aic", {g.aic, 193.94709098857877}},
      {"caic", {g.caic, 194.07080232878495}},
      {"bic", {g.bic, 199.15743136055495}},
      {"hqic", {g.hqic, 196.05580949181037}},
  }};
  double worst = 0.0;
  for (const auto& [name, v] : fields) {
    const double rel = std::abs(v.first / v.second - 1.0);
    worst = std::max(worst, rel);
    if (!(rel < 5e-11)) o.fail(std::string(name) + fmt(" relative error %.3g", rel));
  }
  o.note(fmt("9 fields, max relative error %.3g", worst));
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    Outcome (*run)();
  };
  const std::array<Criterion, 9> criteria{{
      {1, "reduction to Lomax", reduction},
      {2, "quantile inversion", quantile_inversion},
      {3, "mixture series fidelity", series_fidelity},
      {4, "moment oracle", moment_oracle},
      {5, "iid recovery study, scenario (0.2, 0.6, 0.5, 0.8)", iid_recovery_study},
      {6, "censored regression recovery study", regression_recovery_study},
      {7, "LR-test arithmetic", lr_arithmetic},
      {8, "likelihood identities", likelihood_identities},
      {9, "GoF determinism", gof_determinism},
  }};

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %d: %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, secs,
                o.detail().c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("[N/A ] criterion 10: real-data fits and competitor families are not reproducible here "
              "(external datasets not shipped)\n");
  std::printf("%d of 9 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
