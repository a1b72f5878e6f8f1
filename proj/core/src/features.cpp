#include "topograd/features.hpp"

#include <stdexcept>

#include "topograd/backprop.hpp"

namespace topograd {

namespace {

constexpr LossOptions kFeatureLoss{false, EssentialMode::cap};

}  // namespace

TopoFeatures::TopoFeatures(const ScalarField& image, const OrderOptions& order)
    : rows_(image.rows()), cols_(image.cols()), values_(kFeatureCount, 0.0) {
  const auto pixels = image.values();
  for (int d = 0; d < kDirectionCount; ++d) {
    auto mask = directional_mask(rows_, cols_, d);
    std::vector<double> masked(mask.size());
    for (std::size_t i = 0; i < mask.size(); ++i) masked[i] = pixels[i] * mask[i];
    auto filt = grid_filtration(ScalarField(rows_, cols_, std::move(masked)), Direction::superlevel, order);
    auto diagram = reduce(filt, 1);
    for (int k = 0; k < 2; ++k) {
      for (int p = 0; p < kFeatureExponents; ++p) {
        for (int q = 0; q < kFeatureExponents; ++q) {
          values_[feature_index(d, k, p, q)] =
              polynomial_loss(diagram, {double(p), double(q), 1, k}, kFeatureLoss).value;
        }
      }
    }
    masks_.push_back(std::move(mask));
    filtrations_.push_back(std::move(filt));
    diagrams_.push_back(std::move(diagram));
  }
}

std::vector<double> TopoFeatures::vjp(std::span<const double> upstream) const {
  if (upstream.size() != static_cast<std::size_t>(kFeatureCount)) {
    throw std::invalid_argument("feature cotangent must have 400 entries");
  }
  std::vector<double> out(static_cast<std::size_t>(rows_) * cols_, 0.0);
  for (int d = 0; d < kDirectionCount; ++d) {
    const auto& diagram = diagrams_[d];
    auto total = DiagramGradient::zeros(diagram.size());
    bool any = false;
    for (int k = 0; k < 2; ++k) {
      for (int p = 0; p < kFeatureExponents; ++p) {
        for (int q = 0; q < kFeatureExponents; ++q) {
          const double w = upstream[feature_index(d, k, p, q)];
          if (w == 0.0) continue;
          auto loss = polynomial_loss(diagram, {double(p), double(q), 1, k}, kFeatureLoss);
          loss.gradient *= w;
          total += loss.gradient;
          any = true;
        }
      }
    }
    if (!any) continue;
    const auto& filt = filtrations_[d];
    const auto simplex = diagram_to_simplex_grad(diagram, total, filt.size());
    const auto vertex = simplex_to_vertex_grad(filt, simplex);
    // masked = pixel * mask, so d masked / d pixel = mask.
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += vertex[i] * masks_[d][i];
  }
  return out;
}

std::vector<double> topo_features(const ScalarField& image, const OrderOptions& order) {
  const TopoFeatures f(image, order);
  return {f.values().begin(), f.values().end()};
}

}  // namespace topograd
