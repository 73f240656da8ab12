#include "gmol/distribution.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "gmol/error.hpp"
#include "gmol/random.hpp"

namespace gmol {
namespace {

void check_support(double x, const char* what) {
  if (!(x >= 0.0)) throw DomainError(std::string(what) + ": x must be >= 0");
}

// log of the Lomax survival, -τ log(1 + x/β).
double log_lomax_survival(double x, double tau, double beta) {
  return -tau * std::log1p(x / beta);
}

// Lomax cdf value reached at probability u of the GMOL law.
double generator_inverse(double u, double alpha, double lambda) {
  if (std::abs(1.0 - lambda) < 1e-10) {
    return alpha * u / (1.0 - (1.0 - alpha) * u);
  }
  // Positive root of (1-λ)G² + [λ - (1-α)u]G - αu = 0, written in whichever of the
  // two algebraically equal forms avoids cancellation.
  const double b = lambda - (1.0 - alpha) * u;
  const double disc = std::sqrt(b * b + 4.0 * alpha * (1.0 - lambda) * u);
  if (b >= 0.0) return 2.0 * alpha * u / (b + disc);
  return (disc - b) / (2.0 * (1.0 - lambda));
}

}  // namespace

LomaxParams::LomaxParams(double tau, double beta) : tau_(tau), beta_(beta) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("Lomax tau must be > 0");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("Lomax beta must be > 0");
}

GmolParams::GmolParams(double alpha, double lambda, double tau, double beta)
    : alpha_(alpha), lambda_(lambda), tau_(tau), beta_(beta) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0,1]");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("lambda must lie in [0,1]");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("tau must be > 0");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be > 0");
}

int free_parameter_count(SubModel model) {
  switch (model) {
    case SubModel::GMOL: return 4;
    case SubModel::MOL: return 3;
    case SubModel::Lomax: return 2;
  }
  return 0;
}

std::string_view to_string(SubModel model) {
  switch (model) {
    case SubModel::GMOL: return "gmol";
    case SubModel::MOL: return "mol";
    case SubModel::Lomax: return "lomax";
  }
  return "unknown";
}

SubModel parse_sub_model(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "gmol") return SubModel::GMOL;
  if (lower == "mol") return SubModel::MOL;
  if (lower == "lomax") return SubModel::Lomax;
  throw DomainError("unknown model '" + std::string(name) + "' (expected gmol, mol or lomax)");
}

GmolParams restrict_to(SubModel model, const GmolParams& theta) {
  switch (model) {
    case SubModel::GMOL: return theta;
    case SubModel::MOL: return {theta.alpha(), 1.0, theta.tau(), theta.beta()};
    case SubModel::Lomax: return {1.0, 1.0, theta.tau(), theta.beta()};
  }
  return theta;
}

double lomax_survival(double x, const LomaxParams& p) {
  check_support(x, "lomax_survival");
  return std::exp(log_lomax_survival(x, p.tau(), p.beta()));
}

double lomax_cdf(double x, const LomaxParams& p) {
  check_support(x, "lomax_cdf");
  return -std::expm1(log_lomax_survival(x, p.tau(), p.beta()));
}

double lomax_pdf(double x, const LomaxParams& p) {
  check_support(x, "lomax_pdf");
  // τβ^τ/(β+x)^{τ+1} = τ/(β+x) · [β/(β+x)]^τ, which avoids overflowing β^τ.
  return p.tau() / (p.beta() + x) * std::exp(log_lomax_survival(x, p.tau(), p.beta()));
}

double gmo_transform(double g, double alpha, double lambda) {
  if (!(g >= 0.0 && g <= 1.0)) throw DomainError("gmo_transform: g must lie in [0,1]");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0,1]");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("lambda must lie in [0,1]");
  return (lambda * g + (1.0 - lambda) * g * g) / (alpha + (1.0 - alpha) * g);
}

double cdf(double x, const GmolParams& theta) {
  return gmo_transform(lomax_cdf(x, theta.baseline()), theta.alpha(), theta.lambda());
}

DensityTerms density_terms(double x, double alpha, double lambda, double tau, double beta) {
  const double log1p_ratio = std::log1p(x / beta);
  const double log_s = -tau * log1p_ratio;
  const double s = std::exp(log_s);
  const double g = -std::expm1(log_s);
  const double a1 = 1.0 - alpha;
  const double l1 = 1.0 - lambda;
  return {
      .lomax_cdf = g,
      .lomax_survival = s,
      .log_lomax_pdf = std::log(tau) - std::log(beta) - log1p_ratio + log_s,
      .numerator = a1 * l1 * g * g + 2.0 * alpha * l1 * g + alpha * lambda,
      .denominator = alpha + a1 * g,
  };
}

double pdf(double x, const GmolParams& theta) {
  check_support(x, "pdf");
  const double g = lomax_pdf(x, theta.baseline());
  const double big_g = lomax_cdf(x, theta.baseline());
  const double a = theta.alpha();
  const double l = theta.lambda();
  const double num = (1.0 - a) * (1.0 - l) * big_g * big_g + 2.0 * a * (1.0 - l) * big_g + a * l;
  const double den = a + (1.0 - a) * big_g;
  return g * num / (den * den);
}

double survival(double x, const GmolParams& theta) {
  check_support(x, "survival");
  const double s = lomax_survival(x, theta.baseline());
  const double g = lomax_cdf(x, theta.baseline());
  const double a = theta.alpha();
  return s * (a + (1.0 - theta.lambda()) * g) / (a + (1.0 - a) * g);
}

double hrf(double x, const GmolParams& theta) {
  const double s = survival(x, theta);
  if (!(s > 0.0)) throw RangeError("hrf: survival underflowed to zero");
  return pdf(x, theta) / s;
}

double quantile(double u, const GmolParams& theta) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile requires u in (0,1)");
  const double g = generator_inverse(u, theta.alpha(), theta.lambda());
  // Invert the Lomax cdf: x = β (S^{-1/τ} - 1) with S = 1 - G.
  return theta.beta() * std::expm1(-std::log1p(-g) / theta.tau());
}

std::vector<double> sample(int n, const GmolParams& theta, std::uint64_t seed) {
  if (n < 1) throw DomainError("sample requires n >= 1");
  Rng rng(seed);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(quantile(rng.uniform(), theta));
  return out;
}

}  // namespace gmol
