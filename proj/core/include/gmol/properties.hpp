#pragma once

#include <vector>

#include "gmol/distribution.hpp"

namespace gmol {

/// Truncation policy for the infinite sums of the linear representation.
struct SeriesAccuracy {
  double tail_tol = 1e-10;  ///< stop once a bound on the remaining tail drops below this
  int j_max = 500;          ///< hard cap on the j and k indices

  void validate() const;
};

/// Signed Lomax mixture f(x) = g(x; τ, β) + Σ_k φ_k g(x; (k+1)τ, β).
///
/// Immutable after construction; safe to share across threads.
class MixtureRep {
 public:
  MixtureRep(std::vector<double> phi, LomaxParams base, double tail_bound);

  const std::vector<double>& phi() const { return phi_; }
  const std::vector<double>& tau_star() const { return tau_star_; }
  const LomaxParams& base() const { return base_; }
  std::size_t size() const { return phi_.size(); }

  /// Upper bound on sup_x |f(x) - truncated reconstruction|.
  double tail_bound() const { return tail_bound_; }

  /// Density evaluated through the truncated mixture.
  double reconstruct_pdf(double x) const;

  /// Σ φ_k; zero for an exact representation since every component integrates to one.
  double phi_mass() const;

 private:
  std::vector<double> phi_;
  std::vector<double> tau_star_;
  LomaxParams base_;
  double tail_bound_;
};

/// ω_{i,j} = (-1)^j (λ-α)(1-α)^i C(i+1, j), for 0 <= j <= i+1.
double omega(int i, int j, double alpha, double lambda);

/// ρ_j = Σ_{i>=δ_j} ω_{i,j}, with δ_0 = δ_1 = 0 and δ_j = j-1 otherwise.
double rho(int j, double alpha, double lambda, const SeriesAccuracy& acc = {});

/// Mixture coefficients φ_k for θ.
///
/// The φ_k are the coefficients of f/g expanded in powers of the Lomax survival S:
/// f/g = N(1-S)/(1-(1-α)S)², so (k+1)φ_k + [k=0] is the k-th coefficient of that
/// rational function. This is the same set of numbers as the double sum over ρ_j,
/// but it converges geometrically at rate (1-α) for every α in (0,1], whereas the
/// ρ_j route only converges for α > 1/2.
MixtureRep mixture_rep(const GmolParams& theta, const SeriesAccuracy& acc = {});

/// The first `k_count` coefficients computed literally as
/// φ_k = ((-1)^k/(k+1)) Σ_{j>=k} (j+1) C(j,k) ρ_j.
///
/// Throws AccuracyError when the j-sum diverges ((1-α)/α >= 1) or when it does
/// not meet tail_tol within j_max terms.
std::vector<double> mixture_coefficients_via_rho(const GmolParams& theta, int k_count,
                                                 const SeriesAccuracy& acc = {});

/// p-th raw moment E[X^p]; requires p < τ (MomentError otherwise).
double moment(int p, const GmolParams& theta, const SeriesAccuracy& acc = {});
double moment(int p, const MixtureRep& rep);

/// m_p(s) = ∫_0^s x^p f(x) dx through upper incomplete beta functions.
double incomplete_moment(int p, double s, const GmolParams& theta, const SeriesAccuracy& acc = {});
double incomplete_moment(int p, double s, const MixtureRep& rep);

/// Lorenz curve L(ν) = m_1(Q(ν)) / E[X]; requires τ > 1.
double lorenz(double nu, const GmolParams& theta, const SeriesAccuracy& acc = {});

/// Bonferroni curve B(ν) = L(ν) / ν; requires τ > 1.
double bonferroni(double nu, const GmolParams& theta, const SeriesAccuracy& acc = {});

/// [Q(3/4) - 2Q(1/2) + Q(1/4)] / [Q(3/4) - Q(1/4)].
double bowley_skewness(const GmolParams& theta);

/// [Q(7/8) - Q(5/8) + Q(3/8) - Q(1/8)] / [Q(3/4) - Q(1/4)].
double moors_kurtosis(const GmolParams& theta);

/// E[e^{tX}] for t < 0 by adaptive quadrature of e^{tx} f(x).
double mgf(double t, const GmolParams& theta, const SeriesAccuracy& acc = {});

/// E[e^{tX}] for t < 0 through the mixture, each Lomax component by quadrature.
double mgf_mixture(double t, const GmolParams& theta, const SeriesAccuracy& acc = {});

/// Closed-form generating-function evaluations compared against quadrature.
///
/// `printed` evaluates M_{τ,β}(t) = τ^{-1} ₁F₁(1, 1-τ; -βt) + e^{-βt} combined with
/// the mixture exactly as written in the source derivation; `kummer` uses the
/// Kummer reduction M_{τ,β}(t) = ₁F₁(1, 1-τ; z) + τΓ(-τ) z^τ e^z with z = -βt.
/// Entries are NaN where the series cannot be evaluated (integer τ*, |z| > 50).
struct MgfDiagnostic {
  double quadrature;
  double printed;
  double kummer;
  double printed_discrepancy() const { return printed - quadrature; }
  double kummer_discrepancy() const { return kummer - quadrature; }
};

MgfDiagnostic mgf_diagnostic(double t, const GmolParams& theta, const SeriesAccuracy& acc = {});

}  // namespace gmol
