#include "gmol/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "gmol/error.hpp"
#include "gmol/random.hpp"

namespace gmol {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct RunResult {
  Eigen::VectorXd x;
  double f;  // minimized value
  bool converged;
  int iterations;
};

// Standard Nelder-Mead on the negated objective.
RunResult minimize_once(const std::function<double(const Eigen::VectorXd&)>& f,
                        const Eigen::VectorXd& x0, const OptimizerConfig& cfg) {
  const Eigen::Index n = x0.size();
  std::vector<Eigen::VectorXd> simplex(static_cast<std::size_t>(n + 1), x0);
  std::vector<double> values(static_cast<std::size_t>(n + 1));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double step = std::max(0.1 * std::abs(x0[i]), 0.1);
    simplex[static_cast<std::size_t>(i + 1)][i] += step;
  }
  bool any_finite = false;
  for (std::size_t i = 0; i < simplex.size(); ++i) {
    values[i] = f(simplex[i]);
    any_finite = any_finite || std::isfinite(values[i]);
  }
  if (!any_finite) {
    throw OptimizerError("nelder_mead: objective is non-finite on the whole initial simplex");
  }

  std::vector<std::size_t> order(simplex.size());
  Eigen::VectorXd centroid(n);
  int iter = 0;
  bool converged = false;
  for (; iter < cfg.max_iter; ++iter) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[order.size() - 2];

    const double f_best = values[best];
    const double f_spread = values[worst] - f_best;
    double x_spread = 0.0;
    for (const auto& v : simplex) {
      x_spread = std::max(x_spread, (v - simplex[best]).lpNorm<Eigen::Infinity>());
    }
    const double x_scale = std::max(1.0, simplex[best].lpNorm<Eigen::Infinity>());
    if (std::isfinite(f_spread) && f_spread <= cfg.f_tol * std::max(1.0, std::abs(f_best)) &&
        x_spread <= cfg.x_tol * x_scale) {
      converged = true;
      break;
    }

    centroid.setZero();
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (i != worst) centroid += simplex[i];
    }
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd reflected = centroid + (centroid - simplex[worst]);
    const double f_reflected = f(reflected);
    if (f_reflected < values[best]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - simplex[worst]);
      const double f_expanded = f(expanded);
      if (f_expanded < f_reflected) {
        simplex[worst] = expanded;
        values[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        values[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < values[second_worst]) {
      simplex[worst] = reflected;
      values[worst] = f_reflected;
      continue;
    }
    // Contraction: outside if the reflection beat the worst vertex, inside otherwise.
    const bool outside = f_reflected < values[worst];
    const Eigen::VectorXd contracted =
        outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                : Eigen::VectorXd(centroid + 0.5 * (simplex[worst] - centroid));
    const double f_contracted = f(contracted);
    if (f_contracted < (outside ? f_reflected : values[worst])) {
      simplex[worst] = contracted;
      values[worst] = f_contracted;
      continue;
    }
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (i == best) continue;
      simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
      values[i] = f(simplex[i]);
    }
  }
  const auto best_it = std::min_element(values.begin(), values.end());
  const auto best = static_cast<std::size_t>(best_it - values.begin());
  return {simplex[best], values[best], converged, iter};
}

}  // namespace

void OptimizerConfig::validate() const {
  if (max_iter < 1) throw DomainError("OptimizerConfig.max_iter must be positive");
  if (!(f_tol > 0.0) || !(x_tol > 0.0)) throw DomainError("OptimizerConfig tolerances must be positive");
  if (restarts < 0) throw DomainError("OptimizerConfig.restarts must be non-negative");
}

OptResult nelder_mead(const Objective& objective, const Eigen::VectorXd& x0,
                      const OptimizerConfig& cfg) {
  cfg.validate();
  if (x0.size() == 0) throw DomainError("nelder_mead: empty starting point");
  const auto negated = [&](const Eigen::VectorXd& x) {
    const double v = objective(x);
    return std::isfinite(v) ? -v : kInf;
  };

  RunResult incumbent = minimize_once(negated, x0, cfg);
  int iterations = incumbent.iterations;
  int restarts_used = 0;
  Rng rng(cfg.seed);
  for (int r = 0; r < cfg.restarts; ++r) {
    Eigen::VectorXd start = incumbent.x;
    for (Eigen::Index i = 0; i < start.size(); ++i) {
      start[i] *= 1.0 + 0.1 * (2.0 * rng.uniform() - 1.0);
    }
    RunResult next = [&] {
      try {
        return minimize_once(negated, start, cfg);
      } catch (const OptimizerError&) {
        return RunResult{start, kInf, false, 0};
      }
    }();
    ++restarts_used;
    iterations += next.iterations;
    const double improvement = incumbent.f - next.f;
    if (next.f < incumbent.f) incumbent = std::move(next);
    if (improvement <= cfg.f_tol * std::max(1.0, std::abs(incumbent.f))) break;
  }
  return {incumbent.x, -incumbent.f, incumbent.converged, iterations, restarts_used};
}

Eigen::MatrixXd numerical_hessian(const Objective& objective, const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd h(n);
  for (Eigen::Index i = 0; i < n; ++i) h[i] = std::max(1e-5, 1e-4 * std::abs(x[i]));

  auto eval = [&](const Eigen::VectorXd& p) {
    const double v = objective(p);
    if (!std::isfinite(v)) throw EvaluationError("numerical_hessian: non-finite objective at stencil point");
    return v;
  };

  const double f0 = eval(x);
  Eigen::MatrixXd hess(n, n);
  Eigen::VectorXd p = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    p[i] = x[i] + h[i];
    const double fp = eval(p);
    p[i] = x[i] - h[i];
    const double fm = eval(p);
    p[i] = x[i];
    hess(i, i) = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
    for (Eigen::Index j = 0; j < i; ++j) {
      p[i] = x[i] + h[i];
      p[j] = x[j] + h[j];
      const double fpp = eval(p);
      p[j] = x[j] - h[j];
      const double fpm = eval(p);
      p[i] = x[i] - h[i];
      const double fmm = eval(p);
      p[j] = x[j] + h[j];
      const double fmp = eval(p);
      p[i] = x[i];
      p[j] = x[j];
      hess(i, j) = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
      hess(j, i) = hess(i, j);
    }
  }
  return 0.5 * (hess + hess.transpose());
}

double to_internal(ParamTransform t, double value) {
  switch (t) {
    case ParamTransform::Identity: return value;
    case ParamTransform::Log: return std::log(value);
    case ParamTransform::Logit: return std::log(value) - std::log1p(-value);
  }
  return value;
}

double to_external(ParamTransform t, double internal) {
  switch (t) {
    case ParamTransform::Identity: return internal;
    case ParamTransform::Log: return std::exp(internal);
    case ParamTransform::Logit: return 1.0 / (1.0 + std::exp(-internal));
  }
  return internal;
}

double external_derivative(ParamTransform t, double internal) {
  switch (t) {
    case ParamTransform::Identity: return 1.0;
    case ParamTransform::Log: return std::exp(internal);
    case ParamTransform::Logit: {
      const double s = 1.0 / (1.0 + std::exp(-internal));
      return s * (1.0 - s);
    }
  }
  return 1.0;
}

}  // namespace gmol
