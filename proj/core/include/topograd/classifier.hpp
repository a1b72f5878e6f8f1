#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "topograd/features.hpp"

namespace topograd {

/// Multinomial logistic regression on standardized features.
class LinearClassifier {
 public:
  LinearClassifier() = default;
  LinearClassifier(Eigen::MatrixXd weights, Eigen::VectorXd bias, Eigen::VectorXd mean,
                   Eigen::VectorXd scale);

  int classes() const { return static_cast<int>(weights_.rows()); }
  int inputs() const { return static_cast<int>(weights_.cols()); }

  Eigen::VectorXd logits(std::span<const double> features) const;
  Eigen::VectorXd probabilities(std::span<const double> features) const;
  int predict(std::span<const double> features) const;

  /// Cross-entropy of `target` and its gradient with respect to the raw
  /// (unstandardized) features.
  double cross_entropy(std::span<const double> features, int target,
                       std::vector<double>* gradient = nullptr) const;

  const Eigen::MatrixXd& weights() const { return weights_; }
  const Eigen::VectorXd& bias() const { return bias_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::VectorXd& scale() const { return scale_; }

 private:
  Eigen::VectorXd standardize(std::span<const double> features) const;

  Eigen::MatrixXd weights_;  // classes x inputs
  Eigen::VectorXd bias_;
  Eigen::VectorXd mean_;
  Eigen::VectorXd scale_;
};

struct TrainOptions {
  double l2 = 1e-3;
  double step_size = 0.5;
  int iterations = 2000;
};

/// Full-batch gradient descent on mean cross-entropy plus l2/2 |W|^2.
LinearClassifier train_classifier(const std::vector<std::vector<double>>& features,
                                  const std::vector<int>& labels, int classes,
                                  const TrainOptions& options = {});

double accuracy(const LinearClassifier& model, const std::vector<std::vector<double>>& features,
                const std::vector<int>& labels);

struct AttackOptions {
  double step_size = 0.01;
  int steps = 20;
};

struct AttackResult {
  ScalarField image;
  bool success = false;
  /// Steps taken until the prediction reached the target (or all of them).
  int steps = 0;
  /// Target cross-entropy before each step and after the last one.
  std::vector<double> loss;
};

/// Iterated signed-gradient descent on the target-class cross-entropy,
/// through the features to the pixels, clamping pixels to [0, 1]. Stops as
/// soon as the model predicts the target.
AttackResult gradient_attack(const LinearClassifier& model, const ScalarField& image, int target,
                             const AttackOptions& options = {});

}  // namespace topograd
