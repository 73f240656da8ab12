#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gmol/distribution.hpp"
#include "gmol/optimize.hpp"

namespace gmol {

/// Strictly positive iid observations.
class IidSample {
 public:
  /// Throws DesignError for empty input or any non-positive / non-finite value.
  explicit IidSample(std::vector<double> x);

  std::span<const double> values() const { return x_; }
  std::size_t size() const { return x_.size(); }

 private:
  std::vector<double> x_;
};

struct FitResult {
  SubModel model = SubModel::GMOL;
  GmolParams theta_hat{1.0, 1.0, 1.0, 1.0};
  /// One entry per free parameter (order α, λ, τ, β restricted to the sub-model);
  /// absent when the observed information is not positive definite.
  std::optional<std::vector<double>> se;
  double loglik = 0.0;
  bool converged = false;
  int n = 0;
  int iterations = 0;
};

struct FitOptions {
  OptimizerConfig optimizer{};
  bool compute_se = true;
};

/// iid log-likelihood (n log(τβ^τ) + Σ log N_i - (τ+1) Σ log(β+x_i) - 2 Σ log D_i).
/// Returns -∞ if any term is non-finite.
double loglik_iid(const GmolParams& theta, const IidSample& s);

/// Method-of-moments Lomax start with α = λ = 0.9 (α, λ fixed to 1 where the model does).
GmolParams default_initial_params(const IidSample& s, SubModel model);

/// Maximum-likelihood fit over the free parameters of `model`.
///
/// Optimizes log τ, log β and logit α, logit λ. Standard errors come from the
/// inverse observed information in the internal coordinates, mapped back by the
/// delta method. Throws OptimizerError when the optimizer cannot start.
FitResult fit_mle(const IidSample& s, SubModel model,
                  const std::optional<GmolParams>& init = std::nullopt,
                  const FitOptions& options = {});

struct GofReport {
  double w_star;
  double a_star;
  double ks;
  double ks_p;
  double aic;
  double caic;
  double bic;
  double hqic;
};

// Building blocks over ascending probability-integral transforms u_(1) <= ... <= u_(n).
double cvm_w2(std::span<const double> u_sorted);
double ad_a2(std::span<const double> u_sorted);
double ks_distance(std::span<const double> u_sorted);

/// Cramér-von Mises W*, Anderson-Darling A*, Kolmogorov-Smirnov with asymptotic
/// p-value and AIC / CAIC (second-order) / BIC / HQIC for a fitted model.
GofReport gof_stats(const FitResult& fit, const IidSample& s);

struct VuongResult {
  double statistic;
  double p_value;
};

/// Non-nested likelihood-ratio test; positive statistic favours `a`.
/// Throws DegenerateComparisonError when the per-observation differences have zero spread.
VuongResult vuong_glr(const FitResult& a, const FitResult& b, const IidSample& s);

/// Names of the free parameters of `model` ("alpha", "lambda", "tau", "beta").
std::vector<const char*> free_parameter_names(SubModel model);

}  // namespace gmol
