#include "gmol/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gmol/error.hpp"
#include "gmol/specfun.hpp"

namespace gmol {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kBoundaryEps = 1e-6;

double loglik_raw(double a, double l, const Eigen::VectorXd& eta1, const Eigen::VectorXd& eta2,
                  const CensoredDesign& d) {
  const Eigen::VectorXd lin_beta = d.covariates() * eta1;
  const Eigen::VectorXd lin_tau = d.covariates() * eta2;
  const auto x = d.times();
  const auto status = d.status();
  const double a1 = 1.0 - a;
  const double l1 = 1.0 - l;
  double ll = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const double log_beta = lin_beta[ii];
    const double beta = std::exp(log_beta);
    const double tau = std::exp(lin_tau[ii]);
    const double log1p_ratio = std::log1p(x[i] / beta);
    const double log_s = -tau * log1p_ratio;
    const double g = -std::expm1(log_s);
    const double log_den = std::log(a + a1 * g);
    if (status[i] == 1) {
      // log g_i = log τ_i - log β_i - log1p(x_i/β_i) + log S_i, free of the τ_i log β_i cancellation
      ll += std::log(tau) - log_beta - log1p_ratio + log_s + std::log(a1 * l1 * g * g + 2.0 * a * l1 * g + a * l) -
            2.0 * log_den;
    } else {
      // log S(x) = log[β/(β+x)]^τ + log(α + (1-λ)G) - log D
      ll += log_s + std::log(a + l1 * g) - log_den;
    }
  }
  return std::isfinite(ll) ? ll : kNegInf;
}

struct Packing {
  SubModel model;
  int r;

  int size() const { return free_parameter_count(model) - 2 + 2 * r; }
  int offset() const { return free_parameter_count(model) - 2; }

  Eigen::VectorXd pack(const RegParams& z) const {
    const auto interior = [](double v) { return std::clamp(v, kBoundaryEps, 1.0 - kBoundaryEps); };
    Eigen::VectorXd out(size());
    int k = 0;
    if (model != SubModel::Lomax) out[k++] = to_internal(ParamTransform::Logit, interior(z.alpha));
    if (model == SubModel::GMOL) out[k++] = to_internal(ParamTransform::Logit, interior(z.lambda));
    out.segment(k, r) = z.eta1;
    out.segment(k + r, r) = z.eta2;
    return out;
  }

  bool unpack(const Eigen::VectorXd& v, RegParams& z) const {
    int k = 0;
    z.alpha = (model != SubModel::Lomax) ? to_external(ParamTransform::Logit, v[k++]) : 1.0;
    z.lambda = (model == SubModel::GMOL) ? to_external(ParamTransform::Logit, v[k++]) : 1.0;
    z.eta1 = v.segment(k, r);
    z.eta2 = v.segment(k + r, r);
    return z.alpha > 0.0 && z.alpha <= 1.0 && z.lambda >= 0.0 && z.lambda <= 1.0;
  }
};

}  // namespace

CensoredDesign::CensoredDesign(std::vector<double> x, std::vector<int> delta, Eigen::MatrixXd covariates)
    : x_(std::move(x)), delta_(std::move(delta)), v_(std::move(covariates)) {
  const auto n = x_.size();
  if (n == 0) throw DesignError("censored design must not be empty");
  if (delta_.size() != n || static_cast<std::size_t>(v_.rows()) != n) {
    throw DesignError("times, status and covariate rows must have equal lengths");
  }
  if (v_.cols() < 1) throw DesignError("covariate matrix needs at least the intercept column");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x_[i] > 0.0) || !std::isfinite(x_[i])) {
      throw DesignError("observation " + std::to_string(i + 1) + " has a non-positive time");
    }
    if (delta_[i] != 0 && delta_[i] != 1) {
      throw DesignError("observation " + std::to_string(i + 1) + " has status other than 0/1");
    }
  }
  if (!v_.allFinite()) throw DesignError("covariates must be finite");
  if (!(v_.col(0).array() == 1.0).all()) throw DesignError("first covariate column must be the constant 1");
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(v_);
  if (qr.rank() < v_.cols()) throw DesignError("covariate matrix is rank deficient");
  failures_ = std::accumulate(delta_.begin(), delta_.end(), 0);
  if (failures_ < v_.cols() + 1) {
    throw DesignError("design has " + std::to_string(failures_) + " failures; at least " +
                      std::to_string(v_.cols() + 1) + " are required");
  }
}

void RegParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0,1]");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("lambda must lie in [0,1]");
  if (eta1.size() != eta2.size() || eta1.size() == 0) {
    throw DomainError("eta1 and eta2 must be non-empty and of equal length");
  }
}

Systematic systematic_components(const RegParams& zeta, std::span<const double> v) {
  if (static_cast<Eigen::Index>(v.size()) != zeta.eta1.size()) {
    throw DomainError("covariate row length does not match the coefficient vectors");
  }
  const Eigen::Map<const Eigen::VectorXd> row(v.data(), static_cast<Eigen::Index>(v.size()));
  const double beta = std::exp(row.dot(zeta.eta1));
  const double tau = std::exp(row.dot(zeta.eta2));
  if (!std::isfinite(beta) || !std::isfinite(tau) || beta <= 0.0 || tau <= 0.0) {
    throw EvaluationError("systematic component overflowed");
  }
  return {beta, tau};
}

double loglik_censored(const RegParams& zeta, const CensoredDesign& d) {
  zeta.validate();
  if (zeta.num_covariates() != d.num_covariates()) {
    throw DomainError("coefficient length does not match the design");
  }
  return loglik_raw(zeta.alpha, zeta.lambda, zeta.eta1, zeta.eta2, d);
}

RegParams restrict_to(SubModel model, const RegParams& zeta) {
  RegParams out = zeta;
  if (model != SubModel::GMOL) out.lambda = 1.0;
  if (model == SubModel::Lomax) out.alpha = 1.0;
  return out;
}

RegParams default_initial_params(const CensoredDesign& d, SubModel model) {
  const IidSample all(std::vector<double>(d.times().begin(), d.times().end()));
  const GmolParams lomax = default_initial_params(all, SubModel::Lomax);
  const int r = d.num_covariates();
  RegParams z;
  z.alpha = 0.9;
  z.lambda = 0.9;
  z.eta1 = Eigen::VectorXd::Zero(r);
  z.eta2 = Eigen::VectorXd::Zero(r);
  z.eta1[0] = std::log(lomax.beta());
  z.eta2[0] = std::log(lomax.tau());
  return restrict_to(model, z);
}

RegFitResult fit_regression(const CensoredDesign& d, SubModel model, const std::optional<RegParams>& init,
                            const FitOptions& options) {
  const int r = d.num_covariates();
  const Packing packing{model, r};
  RegParams start = init ? restrict_to(model, *init) : default_initial_params(d, model);
  start.validate();
  if (start.num_covariates() != r) throw DomainError("initial coefficients do not match the design");

  const Objective objective = [&](const Eigen::VectorXd& v) {
    RegParams z;
    if (!packing.unpack(v, z)) return kNegInf;
    return loglik_raw(z.alpha, z.lambda, z.eta1, z.eta2, d);
  };

  const OptResult opt = nelder_mead(objective, packing.pack(start), options.optimizer);
  RegFitResult result;
  result.model = model;
  if (!packing.unpack(opt.x_opt, result.zeta_hat)) {
    throw OptimizerError("fit_regression: optimizer left the parameter domain");
  }
  result.zeta_hat = restrict_to(model, result.zeta_hat);
  result.loglik = loglik_censored(result.zeta_hat, d);
  result.converged = opt.converged && std::isfinite(result.loglik);
  result.iterations = opt.iterations;
  result.wald_p.assign(static_cast<std::size_t>(2 * r), std::numeric_limits<double>::quiet_NaN());

  if (options.compute_se) {
    const int k = packing.size();
    try {
      const Eigen::MatrixXd info = -numerical_hessian(objective, opt.x_opt);
      const Eigen::LLT<Eigen::MatrixXd> llt(info);
      if (llt.info() == Eigen::Success) {
        const Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(k, k));
        std::vector<double> se(static_cast<std::size_t>(k));
        const int off = packing.offset();
        for (int i = 0; i < k; ++i) {
          const double jac = i < off ? external_derivative(ParamTransform::Logit, opt.x_opt[i]) : 1.0;
          se[static_cast<std::size_t>(i)] = std::abs(jac) * std::sqrt(std::max(cov(i, i), 0.0));
        }
        for (int i = 0; i < 2 * r; ++i) {
          const double est = opt.x_opt[off + i];
          const double s = se[static_cast<std::size_t>(off + i)];
          result.wald_p[static_cast<std::size_t>(i)] = std::erfc(std::abs(est / s) / std::sqrt(2.0));
        }
        result.se = std::move(se);
      }
    } catch (const EvaluationError&) {
      result.se.reset();
    }
  }
  return result;
}

LrTestResult lr_test(const RegFitResult& full, const RegFitResult& nested, int df) {
  if (df < 1) throw DomainError("lr_test requires df >= 1");
  const double diff = full.loglik - nested.loglik;
  const double tol = 1e-6 * std::max(1.0, std::abs(full.loglik));
  if (diff < -tol) {
    throw InconsistencyError("nested fit has a higher log-likelihood than the full model; refit the full model");
  }
  const double stat = std::max(0.0, 2.0 * diff);
  return {stat, specfun::chi_square_sf(stat, df)};
}

std::vector<QuantileResidual> quantile_residuals(const RegFitResult& fit, const CensoredDesign& d) {
  const auto x = d.times();
  const auto status = d.status();
  const Eigen::MatrixXd& v = d.covariates();
  std::vector<QuantileResidual> out;
  out.reserve(x.size());
  std::vector<double> row(static_cast<std::size_t>(v.cols()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (Eigen::Index j = 0; j < v.cols(); ++j) row[static_cast<std::size_t>(j)] = v(static_cast<Eigen::Index>(i), j);
    const Systematic sc = systematic_components(fit.zeta_hat, row);
    const GmolParams theta(fit.zeta_hat.alpha, fit.zeta_hat.lambda, sc.tau, sc.beta);
    const double u = std::clamp(cdf(x[i], theta), 1e-15, 1.0 - 1e-15);
    out.push_back({specfun::std_normal_quantile(u), status[i]});
  }
  return out;
}

std::vector<std::string> regression_parameter_names(SubModel model, int r) {
  std::vector<std::string> names;
  if (model != SubModel::Lomax) names.emplace_back("alpha");
  if (model == SubModel::GMOL) names.emplace_back("lambda");
  for (int block = 1; block <= 2; ++block) {
    for (int j = 0; j < r; ++j) names.push_back("eta" + std::to_string(block) + std::to_string(j));
  }
  return names;
}

}  // namespace gmol
