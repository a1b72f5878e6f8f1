#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace topograd {

/// Penalties P(beta) for least squares. The top* penalties are diagram
/// losses E(1, 0, i0; PD_0) with i0 = 2 (top1) or i0 = 4 (top2):
///  - top1 / top2 on the weights as points on a line (weak alpha, i.e. the
///    gaps between sorted weights),
///  - top1_level / top2_level on the superlevel filtration of the weights
///    over the path 0 - 1 - ... - (p-1),
///  - image_top is E(1,0,2;PD_0) + E(1,0,2;PD_1) on the superlevel
///    filtration of the weights as a rows x cols image.
enum class Penalty { ols, l1, l2, tv, tv2, top1, top2, top1_level, top2_level, image_top };

std::string_view penalty_name(Penalty penalty);
std::optional<Penalty> parse_penalty(std::string_view name);

struct PenaltyValue {
  double value = 0.0;
  Eigen::VectorXd gradient;  // a subgradient where P is not differentiable
};

/// Shape of the weights when they are an image (image_top only).
struct WeightShape {
  int rows = 0;
  int cols = 0;
};

PenaltyValue evaluate_penalty(Penalty penalty, const Eigen::VectorXd& beta, WeightShape shape = {});

struct SolverOptions {
  int iterations = 2000;
};

/// argmin (1/n) |y - X beta|^2 + lambda P(beta) by full-batch (sub)gradient
/// descent from zero with step 1/L, L the Lipschitz constant of the data
/// term. Penalty::ols ignores lambda and returns the minimum-norm least
/// squares solution. Throws std::invalid_argument on inconsistent shapes or
/// a negative lambda.
Eigen::VectorXd fit_penalized(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, Penalty penalty,
                              double lambda, const SolverOptions& options = {},
                              WeightShape shape = {});

/// n logarithmically spaced points on [lo, hi].
std::vector<double> log_grid(double lo, double hi, int n);

struct RegressionProblem {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  /// True weights, for reporting only (may be empty).
  Eigen::VectorXd beta_true;
  Penalty penalty = Penalty::ols;
  std::vector<double> lambdas = log_grid(1e-4, 10.0, 16);
  int folds = 5;
  std::uint64_t seed = 0;
  WeightShape shape;
  SolverOptions solver;
  int threads = 1;
  /// Also refit on all samples at every lambda.
  bool keep_path = false;

  void validate() const;
};

struct RegressionResult {
  std::vector<double> lambdas;
  /// Mean validation MSE per lambda (empty for OLS).
  std::vector<double> cv_error;
  double lambda = 0.0;
  Eigen::VectorXd beta_hat;
  /// mean((beta_hat - beta_true)^2), or NaN without true weights.
  double beta_mse = 0.0;
  std::vector<Eigen::VectorXd> path;
};

/// K-fold cross-validation over the lambda grid, then a refit on all samples
/// at the selected lambda (the smallest CV error; ties go to the larger lambda).
RegressionResult regularized_regression(const RegressionProblem& problem);

/// Mean squared prediction error of beta on (X, y).
double prediction_mse(const Eigen::VectorXd& beta, const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

}  // namespace topograd
