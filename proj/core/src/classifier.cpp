#include "topograd/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace topograd {

LinearClassifier::LinearClassifier(Eigen::MatrixXd weights, Eigen::VectorXd bias,
                                   Eigen::VectorXd mean, Eigen::VectorXd scale)
    : weights_(std::move(weights)), bias_(std::move(bias)), mean_(std::move(mean)), scale_(std::move(scale)) {
  if (bias_.size() != weights_.rows() || mean_.size() != weights_.cols() ||
      scale_.size() != weights_.cols()) {
    throw std::invalid_argument("classifier parameter shapes disagree");
  }
}

Eigen::VectorXd LinearClassifier::standardize(std::span<const double> features) const {
  if (static_cast<Eigen::Index>(features.size()) != mean_.size()) {
    throw std::invalid_argument("classifier expects " + std::to_string(mean_.size()) + " features");
  }
  const Eigen::Map<const Eigen::VectorXd> x(features.data(), static_cast<Eigen::Index>(features.size()));
  return (x - mean_).cwiseQuotient(scale_);
}

Eigen::VectorXd LinearClassifier::logits(std::span<const double> features) const {
  return weights_ * standardize(features) + bias_;
}

Eigen::VectorXd LinearClassifier::probabilities(std::span<const double> features) const {
  const Eigen::VectorXd z = logits(features);
  const Eigen::VectorXd e = (z.array() - z.maxCoeff()).exp();
  return e / e.sum();
}

int LinearClassifier::predict(std::span<const double> features) const {
  Eigen::Index best = 0;
  logits(features).maxCoeff(&best);
  return static_cast<int>(best);
}

double LinearClassifier::cross_entropy(std::span<const double> features, int target,
                                       std::vector<double>* gradient) const {
  if (target < 0 || target >= classes()) throw std::invalid_argument("target class out of range");
  Eigen::VectorXd prob = probabilities(features);
  const double loss = -std::log(std::max(prob[target], 1e-300));
  if (gradient) {
    prob[target] -= 1.0;
    const Eigen::VectorXd g = (weights_.transpose() * prob).cwiseQuotient(scale_);
    gradient->assign(g.data(), g.data() + g.size());
  }
  return loss;
}

LinearClassifier train_classifier(const std::vector<std::vector<double>>& features,
                                  const std::vector<int>& labels, int classes,
                                  const TrainOptions& options) {
  if (features.empty() || features.size() != labels.size()) {
    throw std::invalid_argument("need one label per feature vector");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(features.size());
  const Eigen::Index d = static_cast<Eigen::Index>(features[0].size());
  Eigen::MatrixXd X(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(features[i].size()) != d) throw std::invalid_argument("ragged feature matrix");
    X.row(i) = Eigen::Map<const Eigen::RowVectorXd>(features[i].data(), d);
  }
  for (int y : labels) {
    if (y < 0 || y >= classes) throw std::invalid_argument("label out of range");
  }
  const Eigen::VectorXd mean = X.colwise().mean();
  Eigen::VectorXd scale = ((X.rowwise() - mean.transpose()).colwise().squaredNorm() / double(n)).cwiseSqrt();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (!(scale[j] > 1e-12)) scale[j] = 1.0;  // constant feature
  }
  const Eigen::MatrixXd Z = (X.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
  Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(n, classes);
  for (Eigen::Index i = 0; i < n; ++i) Y(i, labels[i]) = 1.0;

  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(classes, d);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(classes);
  for (int it = 0; it < options.iterations; ++it) {
    Eigen::MatrixXd logits = (Z * W.transpose()).rowwise() + b.transpose();
    logits.colwise() -= logits.rowwise().maxCoeff();
    Eigen::MatrixXd prob = logits.array().exp();
    prob.array().colwise() /= prob.rowwise().sum().array();
    const Eigen::MatrixXd delta = (prob - Y) / double(n);
    W -= options.step_size * (delta.transpose() * Z + options.l2 * W);
    b -= options.step_size * delta.colwise().sum().transpose();
  }
  return LinearClassifier(std::move(W), std::move(b), mean, scale);
}

double accuracy(const LinearClassifier& model, const std::vector<std::vector<double>>& features,
                const std::vector<int>& labels) {
  if (features.empty()) return 0.0;
  int correct = 0;
  for (std::size_t i = 0; i < features.size(); ++i) correct += model.predict(features[i]) == labels[i];
  return static_cast<double>(correct) / static_cast<double>(features.size());
}

AttackResult gradient_attack(const LinearClassifier& model, const ScalarField& image, int target,
                             const AttackOptions& options) {
  if (target < 0 || target >= model.classes()) throw std::invalid_argument("target class out of range");
  if (options.steps < 0 || !(options.step_size >= 0.0)) throw std::invalid_argument("bad attack options");
  AttackResult out{image, false, 0, {}};
  std::vector<double> feature_grad;
  for (int step = 0;; ++step) {
    const TopoFeatures features(out.image);
    const double loss = model.cross_entropy(features.values(), target, &feature_grad);
    out.loss.push_back(loss);
    out.steps = step;
    if (model.predict(features.values()) == target) {
      out.success = true;
      break;
    }
    if (step == options.steps) break;
    const auto pixel_grad = features.vjp(feature_grad);
    auto pixels = out.image.values();
    for (std::size_t i = 0; i < pixels.size(); ++i) {
      const double g = pixel_grad[i];
      const double s = g > 0.0 ? 1.0 : (g < 0.0 ? -1.0 : 0.0);
      pixels[i] = std::clamp(pixels[i] - options.step_size * s, 0.0, 1.0);
    }
  }
  return out;
}

}  // namespace topograd
