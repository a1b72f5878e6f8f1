#pragma once

#include <span>
#include <vector>

#include "topograd/filtration.hpp"

namespace topograd {

/// One point of a persistence diagram together with the simplices that
/// created and destroyed the class. Values are in the filtration's reported
/// coordinates, so superlevel pairs have birth >= death.
struct PersistencePair {
  int dim = 0;
  double birth = 0.0;
  double death = 0.0;  // +inf (sublevel) or -inf (superlevel) when essential
  Index creator = kNoIndex;
  Index destroyer = kNoIndex;

  bool essential() const { return destroyer == kNoIndex; }
  bool zero_persistence() const { return !essential() && birth == death; }
  /// |death - birth|; infinite for essential classes.
  double lifetime() const;

  bool operator==(const PersistencePair&) const = default;
};

/// Persistence pairs of a filtration, sorted canonically: by dimension, then
/// essential classes, then decreasing lifetime, ties by creator position.
/// Zero-persistence pairs are kept but can be filtered out of the ranking.
class PersistenceDiagram {
 public:
  PersistenceDiagram() = default;
  PersistenceDiagram(const Filtration& filtration, int max_dim, std::vector<PersistencePair> pairs);

  std::span<const PersistencePair> pairs() const { return pairs_; }
  const PersistencePair& pair(Index i) const { return pairs_[i]; }
  Index size() const { return static_cast<Index>(pairs_.size()); }
  int max_dimension() const { return max_dim_; }
  Direction direction() const { return direction_; }

  /// The index set I_k: positions into pairs() of dimension-k pairs in
  /// ranking order (essential first, then decreasing lifetime).
  std::vector<Index> ranked(int k, bool include_zero_persistence = false) const;

  /// Essential classes never die; when a finite stand-in is needed they are
  /// capped at the value of the last simplex in the filtration.
  Index terminal_simplex() const { return terminal_simplex_; }
  double terminal_value() const { return terminal_value_; }

  /// Number of dimension-k pairs with birth <= alpha < death in the
  /// sublevel sense (reported coordinates are negated back for superlevel).
  int betti_at(int k, double alpha) const;

 private:
  std::vector<PersistencePair> pairs_;
  int max_dim_ = -1;
  Direction direction_ = Direction::sublevel;
  Index terminal_simplex_ = kNoIndex;
  double terminal_value_ = 0.0;
};

/// Left-to-right column reduction of the boundary matrix over the
/// two-element field, in the filtration's strict order, with clearing
/// (twist). Reports pairs of dimension 0..max_dim. Throws ConsistencyError if
/// the order puts a face after its coface.
PersistenceDiagram reduce(const Filtration& filtration, int max_dim);

/// Dimension-0 pairs by union-find with the elder rule: a merge kills the
/// component whose oldest vertex entered later.
PersistenceDiagram pd0_union_find(const Filtration& filtration);

}  // namespace topograd
