#pragma once

namespace gmol::specfun {

/// Truncation policy shared by the series evaluators in this header.
struct Accuracy {
  double abs_tol = 1e-12;
  int max_terms = 10'000;

  /// Throws DomainError unless abs_tol > 0 and max_terms >= 1.
  void validate() const;
};

/// ln Γ(x) for x > 0.
double log_gamma(double x);

/// Complete beta function B(a, b) for a, b > 0.
double beta(double a, double b);

/// Regularized lower incomplete beta I_z(a, b).
double regularized_incomplete_beta(double z, double a, double b);

/// Upper incomplete beta B_z(a,b) = ∫_z^1 t^{a-1} (1-t)^{b-1} dt.
///
/// Evaluated as B(a,b) minus the lower integral, where the lower integral comes
/// from the continued fraction for I_z(a,b) (or its reflection I_{1-z}(b,a) when
/// z lies past the mean, which keeps the fraction in its fast-converging regime).
double upper_incomplete_beta(double z, double a, double b);

/// Confluent hypergeometric ₁F₁(a; gamma; z) by direct summation.
///
/// Only |z| <= 50 is accepted; larger arguments raise AccuracyError because the
/// alternating terms lose all significant digits there.
double kummer_1f1(double a, double gamma, double z, const Accuracy& acc = {});

/// Φ(x) for the standard normal distribution.
double std_normal_cdf(double x);

/// Φ⁻¹(u) for u in (0,1).
double std_normal_quantile(double u);

/// Asymptotic Kolmogorov p-value 2 Σ_{k>=1} (-1)^{k-1} exp(-2 k² n d²), clamped to [0,1].
double kolmogorov_p(double d, int n, const Accuracy& acc = {});

/// Upper tail of the chi-square distribution with `df` degrees of freedom.
double chi_square_sf(double x, int df);

}  // namespace gmol::specfun
