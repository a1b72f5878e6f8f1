#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "topograd/backprop.hpp"

namespace topograd {

/// One signed, weighted polynomial loss in an objective; weight < 0 turns
/// "decrease E" into "increase E".
struct LossTerm {
  LossSpec spec;
  double weight = 1.0;
  bool operator==(const LossTerm&) const = default;
};

/// Highest homology dimension any term needs.
int max_term_dimension(std::span<const LossTerm> terms);

struct ObjectiveValue {
  double value = 0.0;
  /// Gradient with respect to the parameters (vertex values or coordinates).
  std::vector<double> gradient;
  /// Fingerprint of the pairing used; changes when the combinatorics do.
  std::uint64_t signature = 0;
  int degenerate_edges = 0;
};

/// Sum of weight * E over the terms for an already-built filtration and its
/// diagram, returned as a per-simplex gradient.
struct SimplexObjective {
  double value = 0.0;
  std::vector<double> simplex_gradient;
};
SimplexObjective evaluate_terms(const Filtration& filtration, const PersistenceDiagram& diagram,
                                std::span<const LossTerm> terms,
                                const LossOptions& options = {});

/// Persistence of the filtration up to `max_dim`, using union-find when only
/// dimension 0 is needed.
PersistenceDiagram compute_diagram(const Filtration& filtration, int max_dim);

/// End-to-end objective of vertex values on a fixed complex.
ObjectiveValue evaluate_lower_star(std::shared_ptr<const SimplicialComplex> complex,
                                   std::span<const double> vertex_values, Direction direction,
                                   std::span<const LossTerm> terms,
                                   const LossOptions& options = {},
                                   const OrderOptions& order = {});

enum class PointFiltration { rips, weak_alpha };

struct PointFiltrationSpec {
  PointFiltration kind = PointFiltration::weak_alpha;
  /// Rips edge threshold; <= 0 means no truncation.
  double threshold = 0.0;
};

/// End-to-end objective of point coordinates. The complex is rebuilt from
/// the current points on every call.
ObjectiveValue evaluate_point_cloud(const PointCloud& cloud, const PointFiltrationSpec& filtration,
                                    std::span<const LossTerm> terms,
                                    const LossOptions& options = {},
                                    const OrderOptions& order = {});

}  // namespace topograd
