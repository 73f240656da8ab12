#include "gmol/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "gmol/error.hpp"
#include "gmol/specfun.hpp"

namespace gmol {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kBoundaryEps = 1e-6;

double log_density(double x, const GmolParams& t) {
  const DensityTerms d = density_terms(x, t.alpha(), t.lambda(), t.tau(), t.beta());
  return d.log_lomax_pdf + std::log(d.numerator) - 2.0 * std::log(d.denominator);
}

// Optimizer coordinates for each sub-model.
struct Packing {
  SubModel model;

  Eigen::VectorXd pack(const GmolParams& t) const {
    const auto interior = [](double v) { return std::clamp(v, kBoundaryEps, 1.0 - kBoundaryEps); };
    switch (model) {
      case SubModel::GMOL:
        return Eigen::Vector4d(to_internal(ParamTransform::Logit, interior(t.alpha())),
                               to_internal(ParamTransform::Logit, interior(t.lambda())),
                               std::log(t.tau()), std::log(t.beta()));
      case SubModel::MOL:
        return Eigen::Vector3d(to_internal(ParamTransform::Logit, interior(t.alpha())),
                               std::log(t.tau()), std::log(t.beta()));
      case SubModel::Lomax:
        return Eigen::Vector2d(std::log(t.tau()), std::log(t.beta()));
    }
    return {};
  }

  std::vector<ParamTransform> transforms() const {
    switch (model) {
      case SubModel::GMOL:
        return {ParamTransform::Logit, ParamTransform::Logit, ParamTransform::Log, ParamTransform::Log};
      case SubModel::MOL:
        return {ParamTransform::Logit, ParamTransform::Log, ParamTransform::Log};
      case SubModel::Lomax:
        return {ParamTransform::Log, ParamTransform::Log};
    }
    return {};
  }

  // Returns false when the coordinates map outside the parameter domain.
  bool unpack(const Eigen::VectorXd& z, double& a, double& l, double& tau, double& beta) const {
    a = 1.0;
    l = 1.0;
    Eigen::Index k = 0;
    if (model != SubModel::Lomax) a = to_external(ParamTransform::Logit, z[k++]);
    if (model == SubModel::GMOL) l = to_external(ParamTransform::Logit, z[k++]);
    tau = std::exp(z[k++]);
    beta = std::exp(z[k]);
    return a > 0.0 && a <= 1.0 && l >= 0.0 && l <= 1.0 && tau > 0.0 && std::isfinite(tau) &&
           beta > 0.0 && std::isfinite(beta);
  }
};

double loglik_raw(double a, double l, double tau, double beta, std::span<const double> x) {
  const double a1 = 1.0 - a;
  const double l1 = 1.0 - l;
  const double log_beta = std::log(beta);
  double sum_log_num = 0.0;
  double sum_log1p = 0.0;
  double sum_log_den = 0.0;
  for (const double xi : x) {
    const double log1p_ratio = std::log1p(xi / beta);
    const double g = -std::expm1(-tau * log1p_ratio);
    sum_log_num += std::log(a1 * l1 * g * g + 2.0 * a * l1 * g + a * l);
    sum_log1p += log1p_ratio;
    sum_log_den += std::log(a + a1 * g);
  }
  const double n = static_cast<double>(x.size());
  // τ log β - (τ+1)(log β + log1p(x/β)) written without the large τ log β terms,
  // which cancel catastrophically when τ and β are both huge
  const double ll = n * (std::log(tau) - log_beta) - (tau + 1.0) * sum_log1p + sum_log_num - 2.0 * sum_log_den;
  return std::isfinite(ll) ? ll : kNegInf;
}

}  // namespace

IidSample::IidSample(std::vector<double> x) : x_(std::move(x)) {
  if (x_.empty()) throw DesignError("sample must not be empty");
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!(x_[i] > 0.0) || !std::isfinite(x_[i])) {
      throw DesignError("observation " + std::to_string(i + 1) + " is not strictly positive");
    }
  }
}

double loglik_iid(const GmolParams& theta, const IidSample& s) {
  return loglik_raw(theta.alpha(), theta.lambda(), theta.tau(), theta.beta(), s.values());
}

GmolParams default_initial_params(const IidSample& s, SubModel model) {
  const auto x = s.values();
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double var = 0.0;
  for (const double v : x) var += (v - mean) * (v - mean);
  var = x.size() > 1 ? var / (n - 1.0) : 0.0;

  // Lomax mean β/(τ-1) and variance β²τ/((τ-1)²(τ-2)) give τ = 2v/(v - m²).
  double tau = 10.0;
  if (var > 1.0001 * mean * mean) tau = std::min(2.0 * var / (var - mean * mean), 1e3);
  const double beta = mean * (tau - 1.0);
  return restrict_to(model, GmolParams(0.9, 0.9, tau, beta));
}

FitResult fit_mle(const IidSample& s, SubModel model, const std::optional<GmolParams>& init,
                  const FitOptions& options) {
  const int k = free_parameter_count(model);
  if (static_cast<int>(s.size()) < k + 1) {
    throw DesignError("sample of size " + std::to_string(s.size()) + " is too small for " +
                      std::to_string(k) + " free parameters");
  }
  const Packing packing{model};
  const GmolParams start = init ? restrict_to(model, *init) : default_initial_params(s, model);
  const auto values = s.values();

  const Objective objective = [&](const Eigen::VectorXd& z) {
    double a, l, tau, beta;
    if (!packing.unpack(z, a, l, tau, beta)) return kNegInf;
    return loglik_raw(a, l, tau, beta, values);
  };

  OptResult opt = nelder_mead(objective, packing.pack(start), options.optimizer);
  if (!init && model != SubModel::Lomax) {
    // The likelihood can have a second mode on the α = 1 edge that traps the
    // default start; a few smaller (α, λ) starts find the interior mode.
    constexpr std::array<std::array<double, 2>, 3> kExtraStarts{{{0.5, 0.5}, {0.1, 0.5}, {0.1, 0.1}}};
    for (const auto& [a0, l0] : kExtraStarts) {
      if (model == SubModel::MOL && l0 == 0.1) continue;  // same start as (0.1, 0.5) once λ = 1
      const GmolParams alt = restrict_to(model, GmolParams(a0, l0, start.tau(), start.beta()));
      try {
        const OptResult cand = nelder_mead(objective, packing.pack(alt), options.optimizer);
        if (cand.converged && (!opt.converged || cand.f_opt > opt.f_opt)) opt = cand;
      } catch (const OptimizerError&) {
        // a start with a non-finite simplex is simply skipped
      }
    }
  }
  double a, l, tau, beta;
  if (!packing.unpack(opt.x_opt, a, l, tau, beta)) {
    throw OptimizerError("fit_mle: optimizer left the parameter domain");
  }

  FitResult result;
  result.model = model;
  result.theta_hat = restrict_to(model, GmolParams(a, l, tau, beta));
  result.loglik = loglik_iid(result.theta_hat, s);
  result.converged = opt.converged && std::isfinite(result.loglik);
  result.n = static_cast<int>(s.size());
  result.iterations = opt.iterations;

  if (options.compute_se) {
    try {
      const Eigen::MatrixXd info = -numerical_hessian(objective, opt.x_opt);
      const Eigen::LLT<Eigen::MatrixXd> llt(info);
      if (llt.info() == Eigen::Success) {
        const Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(k, k));
        const auto transforms = packing.transforms();
        std::vector<double> se(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
          se[static_cast<std::size_t>(i)] =
              std::abs(external_derivative(transforms[static_cast<std::size_t>(i)], opt.x_opt[i])) *
              std::sqrt(std::max(cov(i, i), 0.0));
        }
        result.se = std::move(se);
      }
    } catch (const EvaluationError&) {
      result.se.reset();
    }
  }
  return result;
}

double cvm_w2(std::span<const double> u_sorted) {
  const double n = static_cast<double>(u_sorted.size());
  double w2 = 1.0 / (12.0 * n);
  for (std::size_t i = 0; i < u_sorted.size(); ++i) {
    const double d = u_sorted[i] - (2.0 * (i + 1.0) - 1.0) / (2.0 * n);
    w2 += d * d;
  }
  return w2;
}

double ad_a2(std::span<const double> u_sorted) {
  const std::size_t n = u_sorted.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += (2.0 * (i + 1.0) - 1.0) * (std::log(u_sorted[i]) + std::log1p(-u_sorted[n - 1 - i]));
  }
  return -static_cast<double>(n) - sum / static_cast<double>(n);
}

double ks_distance(std::span<const double> u_sorted) {
  const double n = static_cast<double>(u_sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u_sorted.size(); ++i) {
    d = std::max({d, (i + 1.0) / n - u_sorted[i], u_sorted[i] - static_cast<double>(i) / n});
  }
  return d;
}

GofReport gof_stats(const FitResult& fit, const IidSample& s) {
  const int k = free_parameter_count(fit.model);
  const int n = static_cast<int>(s.size());
  if (n <= k + 1) throw DesignError("gof_stats needs more observations than free parameters + 1");

  std::vector<double> u;
  u.reserve(s.size());
  for (const double x : s.values()) {
    u.push_back(std::clamp(cdf(x, fit.theta_hat), 1e-15, 1.0 - 1e-15));
  }
  std::sort(u.begin(), u.end());

  const double dn = n;
  const double ll = loglik_iid(fit.theta_hat, s);
  const double aic = 2.0 * k - 2.0 * ll;
  const double ks = ks_distance(u);
  return {
      .w_star = cvm_w2(u) * (1.0 + 0.5 / dn),
      .a_star = ad_a2(u) * (1.0 + 0.75 / dn + 2.25 / (dn * dn)),
      .ks = ks,
      .ks_p = specfun::kolmogorov_p(ks, n),
      .aic = aic,
      .caic = aic + 2.0 * k * (k + 1.0) / (dn - k - 1.0),
      .bic = k * std::log(dn) - 2.0 * ll,
      .hqic = 2.0 * k * std::log(std::log(dn)) - 2.0 * ll,
  };
}

VuongResult vuong_glr(const FitResult& a, const FitResult& b, const IidSample& s) {
  const auto x = s.values();
  std::vector<double> diff;
  diff.reserve(x.size());
  for (const double xi : x) diff.push_back(log_density(xi, a.theta_hat) - log_density(xi, b.theta_hat));
  const double n = static_cast<double>(diff.size());
  const double mean = std::accumulate(diff.begin(), diff.end(), 0.0) / n;
  double var = 0.0;
  for (const double d : diff) var += (d - mean) * (d - mean);
  const double sd = std::sqrt(var / n);
  if (!(sd >= 1e-14)) {
    throw DegenerateComparisonError("vuong_glr: per-observation log-density differences have zero spread");
  }
  const double stat = std::sqrt(n) * mean / sd;
  return {stat, std::erfc(std::abs(stat) / std::sqrt(2.0))};
}

std::vector<const char*> free_parameter_names(SubModel model) {
  switch (model) {
    case SubModel::GMOL: return {"alpha", "lambda", "tau", "beta"};
    case SubModel::MOL: return {"alpha", "tau", "beta"};
    case SubModel::Lomax: return {"tau", "beta"};
  }
  return {};
}

}  // namespace gmol
