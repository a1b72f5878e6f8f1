#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "topograd/diagram.hpp"

namespace topograd {

/// Per-simplex gradient: each pair sends dE/db to its creator and dE/dd to
/// its destroyer. Throws std::invalid_argument when an uncapped essential
/// death carries a nonzero cotangent.
std::vector<double> diagram_to_simplex_grad(const PersistenceDiagram& diagram,
                                            const DiagramGradient& gradient,
                                            Index simplex_count);

/// Routes each simplex gradient to the vertex that sets its value in a
/// lower-star filtration. Values are in reported coordinates, so the result
/// is the gradient with respect to the caller's vertex values for either
/// direction.
std::vector<double> simplex_to_vertex_grad(const Filtration& filtration,
                                           std::span<const double> simplex_grad);

struct PointGradient {
  int dim = 0;
  std::vector<double> coords;  // row-major, same shape as the cloud
  /// Controller edges of length zero; their gradient is dropped.
  int degenerate_edges = 0;
};

/// Routes each simplex gradient to its controller edge (u, v), then to the
/// coordinates through d|x_u - x_v| / dx_u = (x_u - x_v) / |x_u - x_v|.
PointGradient simplex_to_point_grad(const Filtration& filtration, const PointCloud& cloud,
                                    std::span<const double> simplex_grad);

/// Outcome of comparing an analytic gradient with central differences.
struct FiniteDifferenceReport {
  double max_rel_error = 0.0;
  int checked = 0;
  /// Samples skipped because the combinatorial signature changed within +-h.
  int unstable = 0;
};

/// Central stencils: two-point (error O(h^2)) or five-point (error O(h^4)).
enum class Stencil { two_point, five_point };

struct FiniteDifferenceOptions {
  double h = 1e-4;
  int samples = 20;
  std::uint64_t seed = 0;
  /// Denominator floor for the relative error, |a - n| / max(|a|, |n|, floor).
  double scale_floor = 1e-6;
  Stencil stencil = Stencil::five_point;
};

using ScalarFunction = std::function<double(std::span<const double>)>;
/// Fingerprint of the combinatorics at a parameter value (e.g. the pairing);
/// samples where it changes within +-h are reported as unstable.
using SignatureFunction = std::function<std::uint64_t(std::span<const double>)>;

/// Central differences on `samples` randomly chosen coordinates (all of them
/// when samples >= params.size()). A sample is unstable if the signature
/// differs at any stencil point.
FiniteDifferenceReport finite_difference_check(const ScalarFunction& loss,
                                               std::span<const double> analytic_grad,
                                               std::span<const double> params,
                                               const FiniteDifferenceOptions& options = {},
                                               const SignatureFunction& signature = {});

/// Order-sensitive hash of the (creator, destroyer) pairs of a diagram.
std::uint64_t pairing_signature(const PersistenceDiagram& diagram);

}  // namespace topograd
