#pragma once

#include <optional>
#include <span>
#include <vector>

#include "topograd/persistence.hpp"

namespace topograd {

/// Parameters of the polynomial diagram functional
///   E(p, q, i0; PD_k) = sum_{i >= i0} |d_i - b_i|^p ((d_i + b_i) / 2)^q
/// over the ranked index set I_k (1-based).
struct LossSpec {
  double p = 1.0;
  double q = 0.0;
  int i0 = 1;
  int k = 0;

  /// Throws std::invalid_argument unless i0 >= 1, k >= 0 and p, q are finite
  /// and non-negative.
  void validate() const;
  bool operator==(const LossSpec&) const = default;
};

/// What to do with essential classes that fall inside the summation range.
enum class EssentialMode {
  skip,  // leave them out of the sum
  cap,   // treat the death as the value of the filtration's last simplex
};

struct LossOptions {
  bool include_zero_persistence = false;
  EssentialMode essential = EssentialMode::skip;
};

/// Cotangents dE/db_i and dE/dd_i, aligned with PersistenceDiagram::pairs().
struct DiagramGradient {
  std::vector<double> d_birth;
  std::vector<double> d_death;
  /// Set when capped essential deaths carry gradient; those route to the
  /// diagram's terminal simplex.
  bool essential_capped = false;

  static DiagramGradient zeros(Index pair_count);
  DiagramGradient& operator+=(const DiagramGradient& other);
  DiagramGradient& operator*=(double scale);
};

struct LossValue {
  double value = 0.0;
  DiagramGradient gradient;
};

/// Value and analytic gradient of E(p, q, i0; PD_k). Throws DomainError for
/// a fractional q on a negative midpoint.
LossValue polynomial_loss(const PersistenceDiagram& diagram, const LossSpec& spec,
                          const LossOptions& options = {});

/// A finite diagram point.
struct DiagramPoint {
  double birth = 0.0;
  double death = 0.0;
  bool operator==(const DiagramPoint&) const = default;
};

enum class GroundMetric { euclidean, linf };

/// Distance between two points under the ground metric.
double ground_distance(const DiagramPoint& a, const DiagramPoint& b, GroundMetric metric);
/// Distance from a point to its projection ((b+d)/2, (b+d)/2) on the diagonal.
double diagonal_distance(const DiagramPoint& a, GroundMetric metric);

/// p-Wasserstein distance between finite diagrams: optimal assignment of
/// A + proj(B) against B + proj(A), diagonal-to-diagonal free.
/// Throws std::invalid_argument for p < 1.
double wasserstein(std::span<const DiagramPoint> a, std::span<const DiagramPoint> b, double p,
                   GroundMetric metric = GroundMetric::euclidean);

struct WassersteinOptions {
  GroundMetric metric = GroundMetric::euclidean;
  /// Replace infinite deaths by a finite cap instead of dropping them.
  bool cap_essential = false;
  /// Cap value; defaults to the most extreme terminal value of the two diagrams.
  std::optional<double> essential_cap;
  /// Reject diagrams whose essential class counts differ.
  bool strict = false;
};

/// Wasserstein distance between the dimension-k parts of two diagrams.
double wasserstein(const PersistenceDiagram& a, const PersistenceDiagram& b, int k, double p,
                   const WassersteinOptions& options = {});

/// Finite points of dimension k (essential classes dropped).
std::vector<DiagramPoint> finite_points(const PersistenceDiagram& diagram, int k);

/// Minimum-cost perfect matching of a square cost matrix (Hungarian method,
/// O(n^3)). Returns the column assigned to each row.
std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost);

}  // namespace topograd
