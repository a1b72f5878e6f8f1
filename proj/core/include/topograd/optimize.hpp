#pragma once

#include <cstdint>
#include <vector>

#include "topograd/objective.hpp"

namespace topograd {

enum class OptimizerFiltration { lower_star, rips, weak_alpha };

/// Gradient descent on a signed, weighted sum of diagram losses.
struct OptimizationConfig {
  std::vector<LossTerm> terms;
  OptimizerFiltration filtration = OptimizerFiltration::weak_alpha;
  /// Rips edge threshold (<= 0: none).
  double rips_threshold = 0.0;
  /// Lower-star direction for scalar fields.
  Direction direction = Direction::superlevel;
  double step_size = 1e-2;
  int steps = 100;
  std::uint64_t seed = 0;
  TieBreak tie_break = TieBreak::deterministic;
  LossOptions loss;
  /// Halve the step until the loss does not increase (at most 30 times).
  bool backtracking = false;
  /// Keep a copy of the parameters every this many steps (0: first and last only).
  int snapshot_interval = 0;

  /// Throws std::invalid_argument on a non-positive step size, a negative
  /// step count, non-finite weights or invalid loss specs.
  void validate() const;
};

struct Snapshot {
  int step = 0;
  std::vector<double> params;
};

struct OptimizationResult {
  /// loss[t] is the objective before step t; loss.back() is the final value.
  std::vector<double> loss;
  std::vector<Snapshot> snapshots;
  std::vector<double> final_params;
};

/// Descends on point coordinates, rebuilding the complex at every step.
/// Degenerate-geometry failures are rethrown as DegenerateInput naming the step.
OptimizationResult optimize_point_cloud(const PointCloud& cloud, const OptimizationConfig& config);

/// Descends on the pixel values of a grid field with lower-star filtrations.
OptimizationResult optimize_scalar_field(const ScalarField& field, const OptimizationConfig& config);

}  // namespace topograd
