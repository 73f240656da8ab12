#include "gmol/properties.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "gmol/error.hpp"
#include "gmol/quadrature.hpp"
#include "gmol/specfun.hpp"

namespace gmol {
namespace {

double log_choose(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double lomax_raw_moment(int p, double tau, double beta) {
  return std::exp(p * std::log(beta) + std::lgamma(tau - p) + std::lgamma(p + 1.0) -
                  std::lgamma(tau));
}

void check_moment_order(int p, double tau) {
  if (p < 1) throw DomainError("moment order p must be >= 1");
  if (!(p < tau)) {
    throw MomentError("moment of order " + std::to_string(p) +
                      " does not exist for tau = " + std::to_string(tau));
  }
}

double lomax_mgf_quadrature(double t, double tau, double beta) {
  const LomaxParams base(tau, beta);
  return integrate_half_line(
      [&](double x) { return std::exp(t * x) * lomax_pdf(x, base); }, beta, 1e-11);
}

double lomax_mgf_printed(double t, double tau, double beta) {
  const double z = -beta * t;
  return specfun::kummer_1f1(1.0, 1.0 - tau, z) / tau + std::exp(z);
}

double lomax_mgf_kummer(double t, double tau, double beta) {
  const double z = -beta * t;
  return specfun::kummer_1f1(1.0, 1.0 - tau, z) +
         tau * std::tgamma(-tau) * std::pow(z, tau) * std::exp(z);
}

template <typename F>
double nan_on_error(F&& f) {
  try {
    return f();
  } catch (const Error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

void SeriesAccuracy::validate() const {
  if (!(tail_tol > 0.0)) throw DomainError("SeriesAccuracy.tail_tol must be positive");
  if (j_max < 1) throw DomainError("SeriesAccuracy.j_max must be at least 1");
}

MixtureRep::MixtureRep(std::vector<double> phi, LomaxParams base, double tail_bound)
    : phi_(std::move(phi)), base_(base), tail_bound_(tail_bound) {
  tau_star_.reserve(phi_.size());
  for (std::size_t k = 0; k < phi_.size(); ++k) {
    tau_star_.push_back(static_cast<double>(k + 1) * base_.tau());
  }
}

double MixtureRep::reconstruct_pdf(double x) const {
  double f = lomax_pdf(x, base_);
  for (std::size_t k = 0; k < phi_.size(); ++k) {
    f += phi_[k] * lomax_pdf(x, LomaxParams(tau_star_[k], base_.beta()));
  }
  return f;
}

double MixtureRep::phi_mass() const { return std::accumulate(phi_.begin(), phi_.end(), 0.0); }

double omega(int i, int j, double alpha, double lambda) {
  if (i < 0 || j < 0 || j > i + 1) throw DomainError("omega requires 0 <= j <= i+1");
  const double sign = (j % 2 == 0) ? 1.0 : -1.0;
  return sign * (lambda - alpha) * std::pow(1.0 - alpha, i) * std::exp(log_choose(i + 1, j));
}

double rho(int j, double alpha, double lambda, const SeriesAccuracy& acc) {
  acc.validate();
  if (j < 0) throw DomainError("rho requires j >= 0");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("rho requires alpha in (0,1]");
  if (lambda == alpha) return 0.0;

  const double q = 1.0 - alpha;
  const int start = (j <= 1) ? 0 : j - 1;
  const double sign = (j % 2 == 0) ? 1.0 : -1.0;
  const double scale = std::abs(lambda - alpha);
  if (q == 0.0) {
    return start == 0 ? sign * (lambda - alpha) * std::exp(log_choose(1, j)) : 0.0;
  }

  // t_i = q^i C(i+1, j); consecutive ratios q (i+2)/(i+2-j) decrease in i, so once
  // a ratio r < 1 the remaining tail is bounded by t_i r / (1 - r).
  const long cap = start + 20L * acc.j_max;
  double term = std::exp(start * std::log(q) + log_choose(start + 1, j));
  double sum = 0.0;
  for (long i = start; i <= cap; ++i) {
    sum += term;
    const double ratio = q * (i + 2.0) / (i + 2.0 - j);
    if (ratio < 1.0 && scale * term * ratio / (1.0 - ratio) < acc.tail_tol) {
      return sign * (lambda - alpha) * sum;
    }
    term *= ratio;
  }
  throw AccuracyError("rho: inner series for j=" + std::to_string(j) +
                      " did not reach tail_tol within the term cap");
}

MixtureRep mixture_rep(const GmolParams& theta, const SeriesAccuracy& acc) {
  acc.validate();
  const double a = theta.alpha();
  const double l = theta.lambda();
  const double q = 1.0 - a;
  // f/g = N(G)/D(G)² with N(1-S) = n0 + n1 S + n2 S² and D = 1 - qS.
  const double n0 = 1.0 + a - l;
  const double n1 = -2.0 * (1.0 - l);
  const double n2 = (1.0 - a) * (1.0 - l);
  const double density_scale = theta.tau() / theta.beta();

  auto coefficient = [&](int k) {
    double c = n0 * (k + 1.0) * std::pow(q, k);
    if (k >= 1) c += n1 * k * std::pow(q, k - 1);
    if (k >= 2) c += n2 * (k - 1.0) * std::pow(q, k - 2);
    return c;
  };

  // |c_k| <= B (k+1) q^{k-2} for k >= 2; Σ_{k>=m} (k+1) q^{k-2} has a closed form.
  const double bound_b = std::abs(n0) * q * q + std::abs(n1) * q + std::abs(n2);
  auto tail_from = [&](int m) {
    if (q == 0.0) return m >= 3 ? 0.0 : std::numeric_limits<double>::infinity();
    if (m < 2) return std::numeric_limits<double>::infinity();
    const double geometric = (m + 1.0) / (1.0 - q) + q / ((1.0 - q) * (1.0 - q));
    return density_scale * bound_b * std::pow(q, m - 2) * geometric;
  };

  std::vector<double> phi;
  for (int k = 0; k <= acc.j_max; ++k) {
    const double c = coefficient(k) - (k == 0 ? 1.0 : 0.0);
    phi.push_back(c / (k + 1.0));
    const double tail = tail_from(k + 1);
    if (tail < acc.tail_tol) {
      // Trailing exact zeros (the α = 1 collapse) carry no information.
      while (!phi.empty() && phi.back() == 0.0) phi.pop_back();
      return MixtureRep(std::move(phi), theta.baseline(), tail);
    }
  }
  throw AccuracyError("mixture_rep: tail bound " + std::to_string(tail_from(acc.j_max + 1)) +
                      " still above tail_tol at k = j_max (alpha = " + std::to_string(a) + ")");
}

std::vector<double> mixture_coefficients_via_rho(const GmolParams& theta, int k_count,
                                                 const SeriesAccuracy& acc) {
  acc.validate();
  if (k_count < 1) throw DomainError("k_count must be >= 1");
  const double a = theta.alpha();
  const double l = theta.lambda();
  const double q = 1.0 - a;
  const double r = q / a;
  if (r >= 1.0) {
    throw AccuracyError("rho-route mixture coefficients diverge for alpha <= 1/2");
  }
  if (l == a) return std::vector<double>(static_cast<std::size_t>(k_count), 0.0);

  std::vector<double> rhos;
  auto rho_at = [&](int j) {
    while (static_cast<int>(rhos.size()) <= j) {
      rhos.push_back(rho(static_cast<int>(rhos.size()), a, l, acc));
    }
    return rhos[static_cast<std::size_t>(j)];
  };

  std::vector<double> phi;
  for (int k = 0; k < k_count; ++k) {
    double sum = 0.0;
    bool done = false;
    for (int j = k; j <= acc.j_max; ++j) {
      sum += (j + 1.0) * std::exp(log_choose(j, k)) * rho_at(j);
      if (q == 0.0 && j >= 1) {
        done = true;
        break;
      }
      // |ρ_j| <= |λ-α| q^{j-1}/α^{j+1}; the bound's term ratio (j+2) r/(j+1-k) decreases in j.
      const double ratio = (j + 2.0) * r / (j + 1.0 - k);
      const double next_bound = std::abs(l - a) * (j + 2.0) * std::exp(log_choose(j + 1, k)) *
                                std::pow(q, j) / std::pow(a, j + 2);
      if (ratio < 1.0 && next_bound / (1.0 - ratio) < acc.tail_tol) {
        done = true;
        break;
      }
    }
    if (!done) {
      throw AccuracyError("rho-route coefficient k=" + std::to_string(k) +
                          " did not converge within j_max");
    }
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    phi.push_back(sign * sum / (k + 1.0));
  }
  return phi;
}

double moment(int p, const MixtureRep& rep) {
  const double tau = rep.base().tau();
  const double beta = rep.base().beta();
  check_moment_order(p, tau);
  double m = lomax_raw_moment(p, tau, beta);
  for (std::size_t k = 0; k < rep.size(); ++k) {
    m += rep.phi()[k] * lomax_raw_moment(p, rep.tau_star()[k], beta);
  }
  return m;
}

double moment(int p, const GmolParams& theta, const SeriesAccuracy& acc) {
  check_moment_order(p, theta.tau());
  return moment(p, mixture_rep(theta, acc));
}

double incomplete_moment(int p, double s, const MixtureRep& rep) {
  const double tau = rep.base().tau();
  const double beta = rep.base().beta();
  check_moment_order(p, tau);
  if (!(s > 0.0)) throw DomainError("incomplete_moment requires s > 0");
  const double z = beta / (beta + s);
  const double beta_p = std::pow(beta, p);
  double m = tau * beta_p * specfun::upper_incomplete_beta(z, tau - p, p + 1.0);
  for (std::size_t k = 0; k < rep.size(); ++k) {
    const double ts = rep.tau_star()[k];
    m += rep.phi()[k] * ts * beta_p * specfun::upper_incomplete_beta(z, ts - p, p + 1.0);
  }
  return m;
}

double incomplete_moment(int p, double s, const GmolParams& theta, const SeriesAccuracy& acc) {
  check_moment_order(p, theta.tau());
  return incomplete_moment(p, s, mixture_rep(theta, acc));
}

double lorenz(double nu, const GmolParams& theta, const SeriesAccuracy& acc) {
  if (!(nu > 0.0 && nu < 1.0)) throw DomainError("lorenz requires nu in (0,1)");
  if (!(theta.tau() > 1.0)) throw MomentError("lorenz curve requires tau > 1 (finite mean)");
  const MixtureRep rep = mixture_rep(theta, acc);
  return incomplete_moment(1, quantile(nu, theta), rep) / moment(1, rep);
}

double bonferroni(double nu, const GmolParams& theta, const SeriesAccuracy& acc) {
  return lorenz(nu, theta, acc) / nu;
}

double bowley_skewness(const GmolParams& theta) {
  const double q1 = quantile(0.25, theta);
  const double q2 = quantile(0.5, theta);
  const double q3 = quantile(0.75, theta);
  return (q3 - 2.0 * q2 + q1) / (q3 - q1);
}

double moors_kurtosis(const GmolParams& theta) {
  const double e1 = quantile(0.125, theta);
  const double e3 = quantile(0.375, theta);
  const double e5 = quantile(0.625, theta);
  const double e7 = quantile(0.875, theta);
  return (e7 - e5 + e3 - e1) / (quantile(0.75, theta) - quantile(0.25, theta));
}

double mgf(double t, const GmolParams& theta, const SeriesAccuracy& acc) {
  acc.validate();
  if (!(t < 0.0)) throw DomainError("mgf requires t < 0");
  return integrate_half_line([&](double x) { return std::exp(t * x) * pdf(x, theta); },
                             theta.beta(), 1e-11);
}

double mgf_mixture(double t, const GmolParams& theta, const SeriesAccuracy& acc) {
  if (!(t < 0.0)) throw DomainError("mgf requires t < 0");
  const MixtureRep rep = mixture_rep(theta, acc);
  const double beta = theta.beta();
  double m = lomax_mgf_quadrature(t, theta.tau(), beta);
  for (std::size_t k = 0; k < rep.size(); ++k) {
    m += rep.phi()[k] * lomax_mgf_quadrature(t, rep.tau_star()[k], beta);
  }
  return m;
}

MgfDiagnostic mgf_diagnostic(double t, const GmolParams& theta, const SeriesAccuracy& acc) {
  const double quad = mgf(t, theta, acc);
  const MixtureRep rep = mixture_rep(theta, acc);
  const double beta = theta.beta();

  const double printed = nan_on_error([&] {
    // Exponential term appears once for the base component and once after the sum.
    double m = lomax_mgf_printed(t, theta.tau(), beta);
    for (std::size_t k = 0; k < rep.size(); ++k) {
      m += rep.phi()[k] * specfun::kummer_1f1(1.0, 1.0 - rep.tau_star()[k], -beta * t) /
           rep.tau_star()[k];
    }
    return m + std::exp(-beta * t);
  });
  const double kummer = nan_on_error([&] {
    double m = lomax_mgf_kummer(t, theta.tau(), beta);
    for (std::size_t k = 0; k < rep.size(); ++k) {
      m += rep.phi()[k] * lomax_mgf_kummer(t, rep.tau_star()[k], beta);
    }
    return m;
  });
  return {quad, printed, kummer};
}

}  // namespace gmol
