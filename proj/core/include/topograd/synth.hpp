#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "topograd/filtration.hpp"

namespace topograd {

/// Weight vectors for the regression studies. circle_image is a 16 x 16
/// ring (annulus_image with radii 3 and 6) read as p = 256 weights.
enum class BetaKind { three_values, sawtooth, boxcar, circle_image };

/// p entries drawn i.i.d. from `levels`.
Eigen::VectorXd three_values_beta(int p, const std::array<double, 3>& levels, std::uint64_t seed);

/// Three rising ramps from 0 to 1 that drop back to 0 at the end of each third.
Eigen::VectorXd sawtooth_beta(int p);

/// Baseline 0 with three plateaus of height 1, one centered in each third.
Eigen::VectorXd boxcar_beta(int p);

/// Samples for y = X beta + eps with X_ij ~ N(0, 1) and eps ~ N(0, sigma^2).
struct LinearData {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
};
LinearData linear_data(const Eigen::VectorXd& beta, int n, double sigma, std::mt19937_64& rng);

/// Ring of ones between two radii on a rows x cols grid, zero elsewhere
/// (row-major, used as the true weights of the image regression).
Eigen::VectorXd annulus_image(int rows, int cols, double inner, double outer);

/// Gaussian bump of the given amplitude at the grid center plus i.i.d.
/// Gaussian noise.
ScalarField bump_image(int rows, int cols, double amplitude, double noise, std::uint64_t seed);

/// Classes of the synthetic shape images, distinguished by Betti numbers.
enum class ShapeClass { disk = 0, annulus = 1, two_disks = 2 };
inline constexpr int kShapeClasses = 3;

/// A size x size image in [0, 1] of the given class with random placement,
/// random radii and additive noise clamped to [0, 1].
ScalarField shape_image(ShapeClass shape, int size, double noise, std::mt19937_64& rng);

struct ShapeDataset {
  std::vector<ScalarField> images;
  std::vector<int> labels;
};

/// `per_class` images of each class, interleaved by class.
ShapeDataset shape_dataset(int per_class, int size, double noise, std::uint64_t seed);

}  // namespace topograd
