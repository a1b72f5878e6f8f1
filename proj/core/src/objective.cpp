#include "topograd/objective.hpp"

#include <algorithm>
#include <stdexcept>

namespace topograd {

int max_term_dimension(std::span<const LossTerm> terms) {
  int k = 0;
  for (const auto& t : terms) k = std::max(k, t.spec.k);
  return k;
}

SimplexObjective evaluate_terms(const Filtration& filtration, const PersistenceDiagram& diagram,
                                std::span<const LossTerm> terms, const LossOptions& options) {
  SimplexObjective out;
  auto total = DiagramGradient::zeros(diagram.size());
  for (const auto& term : terms) {
    auto loss = polynomial_loss(diagram, term.spec, options);
    out.value += term.weight * loss.value;
    loss.gradient *= term.weight;
    total += loss.gradient;
  }
  out.simplex_gradient = diagram_to_simplex_grad(diagram, total, filtration.size());
  return out;
}

PersistenceDiagram compute_diagram(const Filtration& filtration, int max_dim) {
  if (max_dim == 0) return pd0_union_find(filtration);
  return reduce(filtration, std::min(max_dim, filtration.complex().max_dimension()));
}

ObjectiveValue evaluate_lower_star(std::shared_ptr<const SimplicialComplex> complex,
                                   std::span<const double> vertex_values, Direction direction,
                                   std::span<const LossTerm> terms, const LossOptions& options,
                                   const OrderOptions& order) {
  const auto filtration = lower_star(std::move(complex), vertex_values, direction, order);
  const auto diagram = compute_diagram(filtration, max_term_dimension(terms));
  const auto simplex = evaluate_terms(filtration, diagram, terms, options);
  ObjectiveValue out;
  out.value = simplex.value;
  out.gradient = simplex_to_vertex_grad(filtration, simplex.simplex_gradient);
  out.signature = pairing_signature(diagram);
  return out;
}

ObjectiveValue evaluate_point_cloud(const PointCloud& cloud, const PointFiltrationSpec& spec,
                                    std::span<const LossTerm> terms, const LossOptions& options,
                                    const OrderOptions& order) {
  const int max_dim = max_term_dimension(terms);
  ObjectiveValue out;
  out.gradient.assign(cloud.coords().size(), 0.0);
  if (cloud.size() < 2) return out;  // a single point has no finite pairs
  const Filtration filtration = spec.kind == PointFiltration::rips
                                    ? rips_filtration(cloud, max_dim, spec.threshold, order)
                                    : weak_alpha_filtration(cloud, order);
  const auto diagram = compute_diagram(filtration, max_dim);
  const auto simplex = evaluate_terms(filtration, diagram, terms, options);
  auto grad = simplex_to_point_grad(filtration, cloud, simplex.simplex_gradient);
  out.value = simplex.value;
  out.gradient = std::move(grad.coords);
  out.degenerate_edges = grad.degenerate_edges;
  out.signature = pairing_signature(diagram);
  return out;
}

}  // namespace topograd
