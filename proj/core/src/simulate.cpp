#include "gmol/simulate.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <thread>

#include "gmol/error.hpp"
#include "gmol/fit.hpp"
#include "gmol/random.hpp"

namespace gmol {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Replicate {
  Eigen::VectorXd estimate;
  double censored_fraction = 0.0;
};

// Runs job(rep) for rep in [0, reps) on up to `threads` workers. Results land in
// their own slot, so the aggregate is independent of scheduling.
template <typename Job>
std::vector<std::optional<Replicate>> run_replicates(int reps, int threads, const Job& job) {
  std::vector<std::optional<Replicate>> results(static_cast<std::size_t>(reps));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int rep = next++; rep < reps; rep = next++) {
      try {
        Replicate r = job(rep);
        if (r.estimate.allFinite()) results[static_cast<std::size_t>(rep)] = std::move(r);
      } catch (const Error&) {
        // excluded and counted as a failure
      }
    }
  };
  const int n_workers = std::clamp(threads, 1, std::max(1, reps));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  }
  return results;
}

void aggregate(const std::vector<std::optional<Replicate>>& results, const Eigen::VectorXd& truth,
               const std::vector<std::string>& names, int n, double censoring, double bound,
               StudyTable& table) {
  const auto k = truth.size();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(k);
  double censored = 0.0;
  int fitted = 0;
  for (const auto& r : results) {
    if (!r) continue;
    ++fitted;
    sum += r->estimate;
    sq += (r->estimate - truth).array().square().matrix();
    censored += r->censored_fraction;
  }
  const int failures = static_cast<int>(results.size()) - fitted;
  table.cells.push_back({n, censoring, bound, fitted, failures,
                         fitted > 0 ? censored / fitted : std::numeric_limits<double>::quiet_NaN()});
  if (failures > 0.05 * static_cast<double>(results.size())) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "n=%d censoring=%g: %d of %zu replicate fits failed", n, censoring,
                  failures, results.size());
    table.warnings.emplace_back(buf);
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    const double ae = fitted > 0 ? sum[i] / fitted : std::numeric_limits<double>::quiet_NaN();
    const double mse = fitted > 0 ? sq[i] / fitted : std::numeric_limits<double>::quiet_NaN();
    table.rows.push_back({names[static_cast<std::size_t>(i)], n, censoring, ae, ae - truth[i], mse});
  }
}

Eigen::VectorXd flatten(const RegParams& z) {
  Eigen::VectorXd out(2 + 2 * z.num_covariates());
  out << z.alpha, z.lambda, z.eta1, z.eta2;
  return out;
}

std::uint64_t stream_id(std::uint64_t block, std::uint64_t cell, std::uint64_t rep) {
  return (block << 48) ^ (cell << 32) ^ rep;
}

// True when the likelihood does not fall as τ and β grow together by a factor
// of 10, i.e. the estimate ran off along the ridge towards the exponential limit
// where no finite maximizer exists and the reported τ, β are arbitrary.
constexpr double kRidgeScale = 10.0;
constexpr double kRidgeTol = 1e-6;

bool on_exponential_ridge(const FitResult& fit, const IidSample& s) {
  const GmolParams& t = fit.theta_hat;
  const GmolParams further(t.alpha(), t.lambda(), kRidgeScale * t.tau(), kRidgeScale * t.beta());
  return loglik_iid(further, s) >= fit.loglik - kRidgeTol;
}

bool on_exponential_ridge(const RegFitResult& fit, const CensoredDesign& d) {
  RegParams further = fit.zeta_hat;
  further.eta1[0] += std::log(kRidgeScale);
  further.eta2[0] += std::log(kRidgeScale);
  return loglik_censored(further, d) >= fit.loglik - kRidgeTol;
}

void validate_common(const std::vector<int>& n_list, int reps, int threads) {
  if (n_list.empty()) throw DomainError("study n_list must not be empty");
  for (const int n : n_list) {
    if (n < 2) throw DomainError("study sample sizes must be >= 2");
  }
  if (reps < 1) throw DomainError("study reps must be >= 1");
  if (threads < 1) throw DomainError("study threads must be >= 1");
}

}  // namespace

void IidStudyConfig::validate() const {
  validate_common(n_list, reps, threads);
  optimizer.validate();
}

void RegressionStudyConfig::validate() const {
  validate_common(n_list, reps, threads);
  truth.validate();
  if (truth.num_covariates() != 2) {
    throw DomainError("regression study expects an intercept and one covariate (r = 2)");
  }
  if (censor_targets.empty()) throw DomainError("censor_targets must not be empty");
  for (const double c : censor_targets) {
    if (!(c >= 0.0 && c < 1.0)) throw DomainError("censoring targets must lie in [0,1)");
  }
  if (n_probe < 1) throw DomainError("n_probe must be positive");
  optimizer.validate();
}

StudyTable run_iid_study(const IidStudyConfig& cfg) {
  cfg.validate();
  const GmolParams truth = cfg.truth;
  const Eigen::Vector4d truth_vec(truth.alpha(), truth.lambda(), truth.tau(), truth.beta());
  const std::vector<std::string> names{"alpha", "lambda", "tau", "beta"};

  StudyTable table;
  for (std::size_t ni = 0; ni < cfg.n_list.size(); ++ni) {
    const int n = cfg.n_list[ni];
    const auto results = run_replicates(cfg.reps, cfg.threads, [&](int rep) {
      const std::uint64_t seed = derive_seed(cfg.seed, stream_id(1, ni, static_cast<std::uint64_t>(rep)));
      FitOptions options{cfg.optimizer, false};
      options.optimizer.seed = seed;
      const IidSample s(sample(n, truth, seed));
      const FitResult fit = fit_mle(s, SubModel::GMOL, truth, options);
      if (!fit.converged) throw OptimizerError("replicate fit did not converge");
      if (on_exponential_ridge(fit, s)) throw OptimizerError("replicate estimate diverged");
      const GmolParams& t = fit.theta_hat;
      return Replicate{Eigen::Vector4d(t.alpha(), t.lambda(), t.tau(), t.beta()), 0.0};
    });
    aggregate(results, truth_vec, names, n, 0.0, kInf, table);
  }
  return table;
}

double calibrate_censoring_bound(double target, const RegParams& zeta, int n_probe, std::uint64_t seed) {
  if (!(target >= 0.0 && target < 1.0)) throw DomainError("censoring target must lie in [0,1)");
  if (target == 0.0) return kInf;
  zeta.validate();
  if (zeta.num_covariates() != 2) throw DomainError("calibration expects r = 2");
  if (n_probe < 1) throw DomainError("n_probe must be positive");

  // Common random numbers: lifetimes and unit censoring draws are fixed, so the
  // censored fraction is a non-increasing step function of b.
  Rng rng(seed);
  std::vector<double> ratio;  // lifetime / unit censoring draw; censored iff ratio > b
  ratio.reserve(static_cast<std::size_t>(n_probe));
  for (int i = 0; i < n_probe; ++i) {
    const double v = rng.uniform();
    const std::array<double, 2> row{1.0, v};
    const Systematic sc = systematic_components(zeta, row);
    const double lifetime = quantile(rng.uniform(), GmolParams(zeta.alpha, zeta.lambda, sc.tau, sc.beta));
    const double unit_c = rng.uniform();
    ratio.push_back(lifetime / unit_c);
  }
  std::sort(ratio.begin(), ratio.end());
  const auto fraction = [&](double b) {
    const auto above = ratio.end() - std::upper_bound(ratio.begin(), ratio.end(), b);
    return static_cast<double>(above) / static_cast<double>(n_probe);
  };

  double lo = ratio[static_cast<std::size_t>(n_probe / 2)];
  double hi = lo;
  for (int i = 0; fraction(lo) < target; ++i) {
    if (i > 200) throw CalibrationError("could not bracket the censoring target from below");
    lo *= 0.5;
  }
  for (int i = 0; fraction(hi) > target; ++i) {
    if (i > 200) throw CalibrationError("could not bracket the censoring target from above");
    hi *= 2.0;
  }
  for (int i = 0; i < 200 && hi > lo * (1.0 + 1e-12); ++i) {
    const double mid = std::sqrt(lo * hi);
    if (fraction(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (std::abs(fraction(hi) - target) > 0.01) {
    throw CalibrationError("censoring target not reachable within one percentage point");
  }
  return hi;
}

CensoredDesign simulate_censored_design(const RegParams& zeta, int n, double bound, std::uint64_t seed) {
  zeta.validate();
  if (zeta.num_covariates() != 2) throw DomainError("simulated designs use r = 2");
  if (n < 1) throw DomainError("n must be positive");
  if (!(bound > 0.0)) throw DomainError("censoring bound must be positive");
  Rng rng(seed);
  std::vector<double> x(static_cast<std::size_t>(n));
  std::vector<int> delta(static_cast<std::size_t>(n));
  Eigen::MatrixXd v(n, 2);
  for (int i = 0; i < n; ++i) {
    const double cov = rng.uniform();
    const std::array<double, 2> row{1.0, cov};
    const Systematic sc = systematic_components(zeta, row);
    const double lifetime = quantile(rng.uniform(), GmolParams(zeta.alpha, zeta.lambda, sc.tau, sc.beta));
    const double censor = bound * rng.uniform();  // drawn even when bound = ∞ to keep streams aligned
    const auto ui = static_cast<std::size_t>(i);
    v(i, 0) = 1.0;
    v(i, 1) = cov;
    if (std::isinf(bound) || lifetime <= censor) {
      x[ui] = lifetime;
      delta[ui] = 1;
    } else {
      x[ui] = censor;
      delta[ui] = 0;
    }
  }
  return CensoredDesign(std::move(x), std::move(delta), std::move(v));
}

StudyTable run_regression_study(const RegressionStudyConfig& cfg) {
  cfg.validate();
  const RegParams& truth = cfg.truth;
  const Eigen::VectorXd truth_vec = flatten(truth);
  const std::vector<std::string> names{"alpha", "lambda", "eta10", "eta11", "eta20", "eta21"};

  StudyTable table;
  for (std::size_t ci = 0; ci < cfg.censor_targets.size(); ++ci) {
    const double target = cfg.censor_targets[ci];
    const double bound =
        calibrate_censoring_bound(target, truth, cfg.n_probe, derive_seed(cfg.seed, stream_id(3, ci, 0)));
    for (std::size_t ni = 0; ni < cfg.n_list.size(); ++ni) {
      const int n = cfg.n_list[ni];
      const std::uint64_t cell = (ci << 16) | ni;
      const auto results = run_replicates(cfg.reps, cfg.threads, [&](int rep) {
        const std::uint64_t seed = derive_seed(cfg.seed, stream_id(2, cell, static_cast<std::uint64_t>(rep)));
        FitOptions options{cfg.optimizer, false};
        options.optimizer.seed = seed;
        const CensoredDesign d = simulate_censored_design(truth, n, bound, seed);
        const RegFitResult fit = fit_regression(d, SubModel::GMOL, truth, options);
        if (!fit.converged) throw OptimizerError("replicate fit did not converge");
        if (on_exponential_ridge(fit, d)) throw OptimizerError("replicate estimate diverged");
        return Replicate{flatten(fit.zeta_hat),
                         1.0 - static_cast<double>(d.failures()) / static_cast<double>(n)};
      });
      aggregate(results, truth_vec, names, n, target, bound, table);
    }
  }
  return table;
}

void write_study_csv(std::ostream& out, const StudyTable& table) {
  out << "param,n,censoring,AE,Bias,MSE\n";
  char buf[256];
  for (const auto& row : table.rows) {
    std::snprintf(buf, sizeof buf, "%s,%d,%.12g,%.12g,%.12g,%.12g\n", row.param.c_str(), row.n, row.censoring,
                  row.ae, row.bias, row.mse);
    out << buf;
  }
}

}  // namespace gmol
