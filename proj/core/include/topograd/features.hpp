#pragma once

#include <span>
#include <vector>

#include "topograd/diagram.hpp"

namespace topograd {

inline constexpr int kFeatureExponents = 5;  // p, q in {0, ..., 4}
inline constexpr int kFeatureCount = kDirectionCount * 2 * kFeatureExponents * kFeatureExponents;
static_assert(kFeatureCount == 400);

/// Position of E(p, q, 1; PD_k) of direction d in the feature vector:
/// direction-major, then k, then p, then q.
constexpr int feature_index(int direction, int k, int p, int q) {
  return ((direction * 2 + k) * kFeatureExponents + p) * kFeatureExponents + q;
}

/// Directional persistence features of an image: E(p, q, 1; PD_k) for the
/// eight superlevel filtrations of image * mask_d, k in {0, 1} and p, q in
/// {0..4}. Zero-persistence pairs are left out and essential classes are
/// capped at the filtration's last value. Keeps the diagrams so that
/// vector-Jacobian products with respect to the pixels are cheap.
class TopoFeatures {
 public:
  explicit TopoFeatures(const ScalarField& image, const OrderOptions& order = {});

  std::span<const double> values() const { return values_; }

  /// sum_i upstream[i] * d feature_i / d pixel, one entry per pixel.
  std::vector<double> vjp(std::span<const double> upstream) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::vector<double>> masks_;
  std::vector<Filtration> filtrations_;
  std::vector<PersistenceDiagram> diagrams_;
  std::vector<double> values_;
};

/// The 400 feature values of an image.
std::vector<double> topo_features(const ScalarField& image, const OrderOptions& order = {});

}  // namespace topograd
