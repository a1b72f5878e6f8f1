#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "topograd/diagram.hpp"

namespace topograd {

double ground_distance(const DiagramPoint& a, const DiagramPoint& b, GroundMetric metric) {
  const double db = std::abs(a.birth - b.birth);
  const double dd = std::abs(a.death - b.death);
  return metric == GroundMetric::euclidean ? std::hypot(db, dd) : std::max(db, dd);
}

double diagonal_distance(const DiagramPoint& a, GroundMetric metric) {
  const double life = std::abs(a.death - a.birth);
  return metric == GroundMetric::euclidean ? life / std::sqrt(2.0) : 0.5 * life;
}

std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost) {
  // Shortest augmenting paths with row/column potentials; 1-based internally
  // with column 0 as the virtual source.
  const int n = static_cast<int>(cost.size());
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match_col(n + 1, 0), way(n + 1, 0);
  for (int row = 1; row <= n; ++row) {
    if (static_cast<int>(cost[row - 1].size()) != n) {
      throw std::invalid_argument("assignment cost matrix must be square");
    }
    match_col[0] = row;
    int col0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[col0] = true;
      const int r = match_col[col0];
      double delta = inf;
      int col1 = 0;
      for (int c = 1; c <= n; ++c) {
        if (used[c]) continue;
        const double cur = cost[r - 1][c - 1] - u[r] - v[c];
        if (cur < minv[c]) {
          minv[c] = cur;
          way[c] = col0;
        }
        if (minv[c] < delta) {
          delta = minv[c];
          col1 = c;
        }
      }
      for (int c = 0; c <= n; ++c) {
        if (used[c]) {
          u[match_col[c]] += delta;
          v[c] -= delta;
        } else {
          minv[c] -= delta;
        }
      }
      col0 = col1;
    } while (match_col[col0] != 0);
    do {
      const int col1 = way[col0];
      match_col[col0] = match_col[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<int> assignment(n, -1);
  for (int c = 1; c <= n; ++c) assignment[match_col[c] - 1] = c - 1;
  return assignment;
}

double wasserstein(std::span<const DiagramPoint> a, std::span<const DiagramPoint> b, double p,
                   GroundMetric metric) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("Wasserstein order p must be finite and >= 1");
  }
  const std::size_t na = a.size(), nb = b.size();
  const std::size_t n = na + nb;
  if (n == 0) return 0.0;
  // Rows: A then diagonal slots for B. Columns: B then diagonal slots for A.
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < na; ++i) {
    const double to_diag = std::pow(diagonal_distance(a[i], metric), p);
    for (std::size_t j = 0; j < nb; ++j) cost[i][j] = std::pow(ground_distance(a[i], b[j], metric), p);
    for (std::size_t j = nb; j < n; ++j) cost[i][j] = to_diag;
  }
  for (std::size_t j = 0; j < nb; ++j) {
    const double to_diag = std::pow(diagonal_distance(b[j], metric), p);
    for (std::size_t i = na; i < n; ++i) cost[i][j] = to_diag;
  }
  const auto assignment = solve_assignment(cost);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += cost[i][static_cast<std::size_t>(assignment[i])];
  return std::pow(total, 1.0 / p);
}

std::vector<DiagramPoint> finite_points(const PersistenceDiagram& diagram, int k) {
  std::vector<DiagramPoint> out;
  for (const auto& pair : diagram.pairs()) {
    if (pair.dim == k && !pair.essential()) out.push_back({pair.birth, pair.death});
  }
  return out;
}

double wasserstein(const PersistenceDiagram& a, const PersistenceDiagram& b, int k, double p,
                   const WassersteinOptions& options) {
  auto essential_births = [k](const PersistenceDiagram& d) {
    std::vector<double> births;
    for (const auto& pair : d.pairs()) {
      if (pair.dim == k && pair.essential()) births.push_back(pair.birth);
    }
    return births;
  };
  const auto ea = essential_births(a);
  const auto eb = essential_births(b);
  if (options.strict && ea.size() != eb.size()) {
    throw std::invalid_argument("diagrams have different numbers of essential classes in dimension " +
                                std::to_string(k));
  }
  auto pa = finite_points(a, k);
  auto pb = finite_points(b, k);
  if (options.cap_essential) {
    double cap = 0.0;
    if (options.essential_cap) {
      cap = *options.essential_cap;
    } else {
      const bool superlevel = a.direction() == Direction::superlevel;
      cap = superlevel ? std::min(a.terminal_value(), b.terminal_value())
                       : std::max(a.terminal_value(), b.terminal_value());
    }
    for (double birth : ea) pa.push_back({birth, cap});
    for (double birth : eb) pb.push_back({birth, cap});
  }
  return wasserstein(pa, pb, p, options.metric);
}

}  // namespace topograd
