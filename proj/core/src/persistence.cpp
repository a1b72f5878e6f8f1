#include "topograd/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "topograd/error.hpp"

namespace topograd {

double PersistencePair::lifetime() const {
  if (essential()) return std::numeric_limits<double>::infinity();
  return std::abs(death - birth);
}

PersistenceDiagram::PersistenceDiagram(const Filtration& filtration, int max_dim,
                                       std::vector<PersistencePair> pairs)
    : pairs_(std::move(pairs)), max_dim_(max_dim), direction_(filtration.direction()) {
  if (filtration.size() > 0) {
    terminal_simplex_ = filtration.order().back();
    terminal_value_ = filtration.value(terminal_simplex_);
  }
  std::sort(pairs_.begin(), pairs_.end(), [&](const PersistencePair& a, const PersistencePair& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    if (a.essential() != b.essential()) return a.essential();
    if (!a.essential() && a.lifetime() != b.lifetime()) return a.lifetime() > b.lifetime();
    return filtration.position(a.creator) < filtration.position(b.creator);
  });
}

std::vector<Index> PersistenceDiagram::ranked(int k, bool include_zero_persistence) const {
  std::vector<Index> out;
  for (Index i = 0; i < size(); ++i) {
    const auto& p = pairs_[i];
    if (p.dim != k) continue;
    if (p.zero_persistence() && !include_zero_persistence) continue;
    out.push_back(i);
  }
  return out;
}

int PersistenceDiagram::betti_at(int k, double alpha) const {
  const double sign = direction_ == Direction::sublevel ? 1.0 : -1.0;
  int count = 0;
  for (const auto& p : pairs_) {
    if (p.dim != k) continue;
    const double b = sign * p.birth, d = sign * p.death;
    if (b <= alpha && alpha < d) ++count;
  }
  return count;
}

namespace {

using Column = std::vector<Index>;

// a ^= b for sorted index lists.
void add_column(Column& a, const Column& b, Column& scratch) {
  scratch.clear();
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(scratch));
  a.swap(scratch);
}

double essential_death(const Filtration& f) {
  return f.direction() == Direction::sublevel ? std::numeric_limits<double>::infinity()
                                              : -std::numeric_limits<double>::infinity();
}

}  // namespace

PersistenceDiagram reduce(const Filtration& filtration, int max_dim) {
  const auto& complex = filtration.complex();
  if (max_dim < 0) throw std::invalid_argument("max_dim must be non-negative");
  if (max_dim > complex.max_dimension()) {
    throw std::invalid_argument("max_dim exceeds the complex dimension");
  }
  const Index n = filtration.size();
  const auto order = filtration.order();

  std::vector<Index> pivot_of_row(static_cast<std::size_t>(n), kNoIndex);
  std::vector<bool> cleared(static_cast<std::size_t>(n), false);
  std::vector<bool> zero_column(static_cast<std::size_t>(n), false);
  std::vector<Column> reduced(static_cast<std::size_t>(n));
  Column scratch;

  const int top = std::min(max_dim + 1, complex.max_dimension());
  // Columns by dimension, each in filtration order.
  std::vector<std::vector<Index>> columns_by_dim(static_cast<std::size_t>(top + 1));
  for (Index j = 0; j < n; ++j) {
    const int d = complex.dimension(order[j]);
    if (d <= top) columns_by_dim[d].push_back(j);
  }

  for (int d = top; d >= 1; --d) {
    for (Index j : columns_by_dim[d]) {
      if (cleared[j]) continue;
      Column col;
      for (Index f : complex.faces(order[j])) {
        const Index row = filtration.position(f);
        if (row >= j) throw ConsistencyError("filtration order places a face after its coface");
        col.push_back(row);
      }
      std::sort(col.begin(), col.end());
      while (!col.empty()) {
        const Index pivot = pivot_of_row[col.back()];
        if (pivot == kNoIndex) break;
        add_column(col, reduced[pivot], scratch);
      }
      if (col.empty()) {
        zero_column[j] = true;
      } else {
        const Index low = col.back();
        pivot_of_row[low] = j;
        cleared[low] = true;
        reduced[j] = std::move(col);
      }
    }
  }
  for (Index j : columns_by_dim[0]) zero_column[j] = !cleared[j];

  std::vector<PersistencePair> pairs;
  for (Index i = 0; i < n; ++i) {
    const Index creator = order[i];
    const int d = complex.dimension(creator);
    if (d > max_dim) continue;
    PersistencePair p;
    p.dim = d;
    p.creator = creator;
    p.birth = filtration.value(creator);
    if (pivot_of_row[i] != kNoIndex) {
      p.destroyer = order[pivot_of_row[i]];
      p.death = filtration.value(p.destroyer);
    } else if (zero_column[i]) {
      p.death = essential_death(filtration);
    } else {
      continue;  // destroyer of a lower-dimensional class
    }
    pairs.push_back(p);
  }
  return PersistenceDiagram(filtration, max_dim, std::move(pairs));
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(Index n) : parent_(static_cast<std::size_t>(n)), rank_(static_cast<std::size_t>(n), 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  Index find(Index x) {
    Index root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const Index next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  // Returns the surviving root.
  Index unite(Index a, Index b) {
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return a;
  }

 private:
  std::vector<Index> parent_;
  std::vector<int> rank_;
};

}  // namespace

PersistenceDiagram pd0_union_find(const Filtration& filtration) {
  const auto& complex = filtration.complex();
  const Index nv = complex.vertex_count();
  DisjointSets sets(nv);
  // oldest[root]: the earliest-entering vertex of the component.
  std::vector<Index> oldest(static_cast<std::size_t>(nv));
  std::iota(oldest.begin(), oldest.end(), 0);

  std::vector<PersistencePair> pairs;
  for (Index s : filtration.order()) {
    if (complex.dimension(s) != 1) continue;
    const auto& edge = complex.simplex(s);
    const Index ru = sets.find(edge.vertex(0));
    const Index rv = sets.find(edge.vertex(1));
    if (ru == rv) continue;
    Index elder = oldest[ru], younger = oldest[rv];
    if (filtration.position(elder) > filtration.position(younger)) std::swap(elder, younger);
    pairs.push_back(PersistencePair{0, filtration.value(younger), filtration.value(s), younger, s});
    oldest[sets.unite(ru, rv)] = elder;
  }
  for (Index v = 0; v < nv; ++v) {
    if (sets.find(v) != v) continue;
    const Index creator = oldest[v];
    pairs.push_back(PersistencePair{0, filtration.value(creator), essential_death(filtration),
                                    creator, kNoIndex});
  }
  return PersistenceDiagram(filtration, 0, std::move(pairs));
}

}  // namespace topograd
