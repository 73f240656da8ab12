#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gmol/distribution.hpp"
#include "gmol/fit.hpp"

namespace gmol {

/// Right-censored observations with covariate rows.
///
/// x_i = min(lifetime, censoring time), delta_i = 1 for an observed failure and 0
/// for a censored time. The first column of `covariates` must be the constant 1.
class CensoredDesign {
 public:
  /// Throws DesignError on length mismatch, non-positive times, indicators other
  /// than 0/1, a rank-deficient covariate matrix, a missing intercept column or
  /// fewer than r+1 failures.
  CensoredDesign(std::vector<double> x, std::vector<int> delta, Eigen::MatrixXd covariates);

  std::span<const double> times() const { return x_; }
  std::span<const int> status() const { return delta_; }
  const Eigen::MatrixXd& covariates() const { return v_; }
  std::size_t size() const { return x_.size(); }
  int num_covariates() const { return static_cast<int>(v_.cols()); }
  int failures() const { return failures_; }

 private:
  std::vector<double> x_;
  std::vector<int> delta_;
  Eigen::MatrixXd v_;
  int failures_ = 0;
};

/// ζ = (α, λ, η₁, η₂) with β_i = exp(v_iᵀη₁) and τ_i = exp(v_iᵀη₂).
struct RegParams {
  double alpha = 1.0;
  double lambda = 1.0;
  Eigen::VectorXd eta1;
  Eigen::VectorXd eta2;

  /// Throws DomainError for α ∉ (0,1], λ ∉ [0,1] or η vectors of different length.
  void validate() const;
  int num_covariates() const { return static_cast<int>(eta1.size()); }
};

struct RegFitResult {
  SubModel model = SubModel::GMOL;
  RegParams zeta_hat;
  /// Free-parameter order: α (GMOL, MOL), λ (GMOL), η₁, η₂. Absent if the observed
  /// information is not positive definite.
  std::optional<std::vector<double>> se;
  /// Two-sided Wald p-values for η₁ followed by η₂ (NaN when SEs are absent).
  std::vector<double> wald_p;
  double loglik = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct Systematic {
  double beta;
  double tau;
};

/// β_i = exp(v·η₁), τ_i = exp(v·η₂). Throws EvaluationError on overflow.
Systematic systematic_components(const RegParams& zeta, std::span<const double> v);

/// Censored log-likelihood: log-density over failures plus log-survival over censored times.
/// Returns -∞ when any contribution is non-finite.
double loglik_censored(const RegParams& zeta, const CensoredDesign& d);

/// Forces the parameters a sub-model fixes.
RegParams restrict_to(SubModel model, const RegParams& zeta);

/// Intercept-only Lomax moment start, α = λ = 0.9.
RegParams default_initial_params(const CensoredDesign& d, SubModel model);

/// Maximum-likelihood fit of the censored regression (logit α, logit λ, raw η).
RegFitResult fit_regression(const CensoredDesign& d, SubModel model,
                            const std::optional<RegParams>& init = std::nullopt,
                            const FitOptions& options = {});

struct LrTestResult {
  double statistic;
  double p_value;
};

/// 2(ℓ_full - ℓ_nested) referred to χ²_df. Throws InconsistencyError when the nested
/// fit is better by more than 1e-6 (relative to |ℓ_full|, at least absolute 1e-6).
LrTestResult lr_test(const RegFitResult& full, const RegFitResult& nested, int df);

struct QuantileResidual {
  double qr;
  int delta;
};

/// Φ⁻¹ of the fitted conditional cdf at every observation, tagged with its status.
std::vector<QuantileResidual> quantile_residuals(const RegFitResult& fit, const CensoredDesign& d);

/// "alpha", "lambda", "eta10", ..., "eta2{r-1}" restricted to the free parameters of `model`.
std::vector<std::string> regression_parameter_names(SubModel model, int r);

}  // namespace gmol
