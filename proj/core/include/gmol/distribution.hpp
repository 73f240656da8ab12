#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace gmol {

/// Lomax (Pareto II) baseline with shape tau and scale beta.
class LomaxParams {
 public:
  /// Throws DomainError unless tau > 0 and beta > 0 (both finite).
  LomaxParams(double tau, double beta);

  double tau() const { return tau_; }
  double beta() const { return beta_; }

  friend bool operator==(const LomaxParams&, const LomaxParams&) = default;

 private:
  double tau_;
  double beta_;
};

/// Parameter vector θ = (α, λ, τ, β) of the generalized Marshall-Olkin Lomax family.
///
/// Validated on construction: 0 < α <= 1, 0 <= λ <= 1, τ > 0, β > 0.
class GmolParams {
 public:
  GmolParams(double alpha, double lambda, double tau, double beta);

  double alpha() const { return alpha_; }
  double lambda() const { return lambda_; }
  double tau() const { return tau_; }
  double beta() const { return beta_; }
  LomaxParams baseline() const { return {tau_, beta_}; }

  friend bool operator==(const GmolParams&, const GmolParams&) = default;

 private:
  double alpha_;
  double lambda_;
  double tau_;
  double beta_;
};

/// Nested members of the family. MOL fixes λ = 1; Lomax fixes α = λ = 1.
enum class SubModel { GMOL, MOL, Lomax };

/// Number of parameters estimated for the iid model.
int free_parameter_count(SubModel model);

/// "gmol", "mol" or "lomax".
std::string_view to_string(SubModel model);

/// Case-insensitive inverse of to_string; throws DomainError for unknown names.
SubModel parse_sub_model(std::string_view name);

/// Forces the parameters a sub-model fixes (MOL: λ=1; Lomax: α=λ=1).
GmolParams restrict_to(SubModel model, const GmolParams& theta);

double lomax_cdf(double x, const LomaxParams& p);
double lomax_pdf(double x, const LomaxParams& p);
/// [β/(β+x)]^τ.
double lomax_survival(double x, const LomaxParams& p);

/// The generator map G ↦ [λG + (1-λ)G²] / [α + (1-α)G] on [0,1].
double gmo_transform(double g, double alpha, double lambda);

double cdf(double x, const GmolParams& theta);

/// τβ^τ [(1-α)(1-λ)G² + 2α(1-λ)G + αλ] / ((β+x)^{τ+1} [α+(1-α)G]²).
double pdf(double x, const GmolParams& theta);

/// 1 - cdf, evaluated as S·[α + (1-λ)G] / [α + (1-α)G] with S the Lomax survival,
/// which carries full relative precision in the upper tail.
double survival(double x, const GmolParams& theta);

/// pdf / survival. Throws RangeError once the survival underflows to zero.
double hrf(double x, const GmolParams& theta);

/// Inverse of cdf for u in (0,1).
double quantile(double u, const GmolParams& theta);

/// n inverse-transform draws from a generator seeded with `seed`.
std::vector<double> sample(int n, const GmolParams& theta, std::uint64_t seed);

/// Pieces of the density shared by the likelihood code: for a point x,
/// G (Lomax cdf), S = 1 - G, log g(x) and the log of the bracketed ratio.
struct DensityTerms {
  double lomax_cdf;
  double lomax_survival;
  double log_lomax_pdf;
  double numerator;    // (1-α)(1-λ)G² + 2α(1-λ)G + αλ
  double denominator;  // α + (1-α)G
};

/// Evaluates the shared pieces without parameter validation (hot path of the likelihoods).
DensityTerms density_terms(double x, double alpha, double lambda, double tau, double beta);

}  // namespace gmol
