#include "topograd/optimize.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "topograd/error.hpp"

namespace topograd {

void OptimizationConfig::validate() const {
  if (!(step_size > 0.0) || !std::isfinite(step_size)) {
    throw std::invalid_argument("step size must be positive and finite");
  }
  if (steps < 0) throw std::invalid_argument("step count must be non-negative");
  if (snapshot_interval < 0) throw std::invalid_argument("snapshot interval must be non-negative");
  for (const auto& t : terms) {
    if (!std::isfinite(t.weight)) throw std::invalid_argument("loss weights must be finite");
    t.spec.validate();
  }
}

namespace {

using Evaluate = std::function<ObjectiveValue(std::span<const double>)>;

OptimizationResult descend(std::vector<double> x, const OptimizationConfig& config,
                           const Evaluate& evaluate) {
  config.validate();
  OptimizationResult out;
  out.snapshots.push_back({0, x});
  auto wrap = [&](int step, std::span<const double> params) {
    try {
      return evaluate(params);
    } catch (const DegenerateInput& e) {
      throw DegenerateInput("step " + std::to_string(step) + ": " + e.what());
    }
  };

  auto current = wrap(0, x);
  std::vector<double> trial(x.size());
  for (int step = 0; step < config.steps; ++step) {
    out.loss.push_back(current.value);
    double eta = config.step_size;
    for (int attempt = 0;; ++attempt) {
      for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] - eta * current.gradient[i];
      ObjectiveValue next;
      try {
        next = wrap(step + 1, trial);
      } catch (const DegenerateInput&) {
        // A collapsed trial counts as a rejected step while backtracking.
        if (!config.backtracking || attempt == 30) throw;
        eta *= 0.5;
        continue;
      }
      if (!config.backtracking || next.value <= current.value || attempt == 30) {
        x.swap(trial);
        current = std::move(next);
        break;
      }
      eta *= 0.5;
    }
    if (config.snapshot_interval > 0 && (step + 1) % config.snapshot_interval == 0 &&
        step + 1 != config.steps) {
      out.snapshots.push_back({step + 1, x});
    }
  }
  out.loss.push_back(current.value);
  if (config.steps > 0) out.snapshots.push_back({config.steps, x});
  out.final_params = std::move(x);
  return out;
}

}  // namespace

OptimizationResult optimize_point_cloud(const PointCloud& cloud, const OptimizationConfig& config) {
  if (config.filtration == OptimizerFiltration::lower_star) {
    throw std::invalid_argument("point clouds need a rips or weak-alpha filtration");
  }
  const PointFiltrationSpec spec{config.filtration == OptimizerFiltration::rips
                                     ? PointFiltration::rips
                                     : PointFiltration::weak_alpha,
                                 config.rips_threshold};
  const OrderOptions order{config.tie_break, config.seed};
  const int dim = cloud.dim();
  std::vector<double> start(cloud.coords().begin(), cloud.coords().end());
  return descend(std::move(start), config, [&](std::span<const double> x) {
    return evaluate_point_cloud(PointCloud(dim, {x.begin(), x.end()}), spec, config.terms,
                                config.loss, order);
  });
}

OptimizationResult optimize_scalar_field(const ScalarField& field, const OptimizationConfig& config) {
  if (config.filtration != OptimizerFiltration::lower_star) {
    throw std::invalid_argument("scalar fields need a lower-star filtration");
  }
  auto grid = std::make_shared<const SimplicialComplex>(build_freudenthal_grid(field.rows(), field.cols()));
  const OrderOptions order{config.tie_break, config.seed};
  std::vector<double> start(field.values().begin(), field.values().end());
  return descend(std::move(start), config, [&](std::span<const double> x) {
    return evaluate_lower_star(grid, x, config.direction, config.terms, config.loss, order);
  });
}

}  // namespace topograd
