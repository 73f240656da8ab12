#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gmol/distribution.hpp"
#include "gmol/optimize.hpp"
#include "gmol/regression.hpp"

namespace gmol {

/// Monte Carlo recovery study for iid GMOL samples.
struct IidStudyConfig {
  GmolParams truth{1.0, 1.0, 1.0, 1.0};
  std::vector<int> n_list;
  int reps = 1000;
  std::uint64_t seed = 0;
  int threads = 1;
  OptimizerConfig optimizer{};

  void validate() const;
};

/// Monte Carlo recovery study for the censored regression with one Uniform(0,1) covariate.
struct RegressionStudyConfig {
  RegParams truth;
  std::vector<int> n_list;
  int reps = 1000;
  std::uint64_t seed = 0;
  std::vector<double> censor_targets{0.0};
  int n_probe = 100'000;
  int threads = 1;
  OptimizerConfig optimizer{};

  void validate() const;
};

struct StudyRow {
  std::string param;
  int n;
  double censoring;  ///< target censoring level of the cell
  double ae;
  double bias;
  double mse;
};

/// Bookkeeping for one (n, censoring) cell of a study.
struct StudyCell {
  int n;
  double censoring;
  double bound;               ///< Uniform(0,b) censoring bound (+∞ without censoring)
  int fitted;                 ///< replicates entering the averages
  /// Replicates whose fit threw, did not converge, returned non-finite estimates or
  /// diverged towards the exponential limit (likelihood flat as τ and β grow together).
  int failures;
  double observed_censoring;  ///< mean censored fraction over fitted replicates
};

struct StudyTable {
  std::vector<StudyRow> rows;
  std::vector<StudyCell> cells;
  std::vector<std::string> warnings;  ///< cells with more than 5% failed replicates
};

/// Draws `reps` samples per n from the truth, fits GMOL from the true parameters and
/// aggregates AE, Bias and MSE. Replicate seeds derive from cfg.seed, so the table
/// does not depend on cfg.threads.
StudyTable run_iid_study(const IidStudyConfig& cfg);

/// Upper bound b of Uniform(0,b) censoring times yielding the target censored
/// fraction on a probe of `n_probe` simulated subjects. Returns +∞ for target 0.
double calibrate_censoring_bound(double target, const RegParams& zeta, int n_probe,
                                 std::uint64_t seed = 0);

/// One replicate of the three-step regression design: v ~ U(0,1), lifetimes by
/// inverse transform with β_i, τ_i from the links, censoring times ~ U(0, bound).
CensoredDesign simulate_censored_design(const RegParams& zeta, int n, double bound, std::uint64_t seed);

/// Regression recovery study over n_list × censor_targets.
StudyTable run_regression_study(const RegressionStudyConfig& cfg);

/// CSV with header `param,n,censoring,AE,Bias,MSE`, 12 significant digits, LF endings.
void write_study_csv(std::ostream& out, const StudyTable& table);

}  // namespace gmol
