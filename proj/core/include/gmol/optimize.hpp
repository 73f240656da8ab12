#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace gmol {

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct OptimizerConfig {
  int max_iter = 5000;     ///< iteration budget per simplex run
  double f_tol = 1e-10;    ///< relative spread of objective values across the simplex
  double x_tol = 1e-9;     ///< relative size of the simplex
  int restarts = 5;        ///< extra runs restarted around the incumbent
  std::uint64_t seed = 0;  ///< seeds the restart jitter

  void validate() const;
};

struct OptResult {
  Eigen::VectorXd x_opt;
  double f_opt = 0.0;
  bool converged = false;
  int iterations = 0;
  int restarts_used = 0;
};

/// Maximizes `objective` with the Nelder-Mead simplex method.
///
/// Coefficients: reflection 1, expansion 2, contraction 0.5, shrink 0.5. Non-finite
/// objective values are treated as -∞, so the simplex retreats from them. After the
/// first run the simplex is rebuilt around the incumbent perturbed by 10% relative
/// noise, up to `cfg.restarts` times, stopping early once a restart no longer
/// improves the optimum. Throws OptimizerError when every vertex of the initial
/// simplex is non-finite.
OptResult nelder_mead(const Objective& objective, const Eigen::VectorXd& x0,
                      const OptimizerConfig& cfg = {});

/// Central-difference Hessian with steps h_i = max(1e-5, 1e-4 |x_i|), symmetrized.
/// Throws EvaluationError if the objective is non-finite at any stencil point.
Eigen::MatrixXd numerical_hessian(const Objective& objective, const Eigen::VectorXd& x);

/// Maps between a bounded parameter and the unconstrained optimizer coordinate.
enum class ParamTransform {
  Identity,  ///< (-∞, ∞)
  Log,       ///< (0, ∞)
  Logit,     ///< (0, 1)
};

double to_internal(ParamTransform t, double value);
double to_external(ParamTransform t, double internal);
/// d(external)/d(internal) at `internal`; used for delta-method standard errors.
double external_derivative(ParamTransform t, double internal);

}  // namespace gmol
