#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "topograd/regression.hpp"
#include "topograd/synth.hpp"

namespace topograd {

std::string_view beta_kind_name(BetaKind kind);
std::optional<BetaKind> parse_beta_kind(std::string_view name);

/// Repeated synthetic regressions: for every run and sample size, draw
/// training data, pick lambda by cross-validation for each penalty and score
/// the fit on a fresh test set from the same model.
struct RegressionStudy {
  BetaKind beta = BetaKind::three_values;
  /// Ignored for circle_image (always 256).
  int p = 100;
  std::vector<int> sample_sizes{60};
  double sigma = 0.05;
  int runs = 20;
  std::vector<Penalty> penalties{Penalty::ols, Penalty::l1, Penalty::l2, Penalty::top1, Penalty::top2};
  int test_samples = 1000;
  std::vector<double> lambdas = log_grid(1e-4, 10.0, 16);
  int folds = 5;
  SolverOptions solver;
  std::uint64_t seed = 0;
  int threads = 1;

  void validate() const;
};

struct StudyRow {
  int n = 0;
  Penalty penalty = Penalty::ols;
  int runs = 0;
  /// Test-set prediction MSE over runs.
  double mse_mean = 0.0;
  double mse_std = 0.0;
  double beta_mse_mean = 0.0;
  /// Cross-validation error at the selected lambda (NaN for OLS).
  double cv_mse_mean = 0.0;
  double lambda_median = 0.0;
};

/// True weights of run `run`.
Eigen::VectorXd study_beta(const RegressionStudy& study, int run);

/// One row per (sample size, penalty), in that nesting order. Results do not
/// depend on the thread count.
std::vector<StudyRow> run_regression_study(const RegressionStudy& study);

}  // namespace topograd
