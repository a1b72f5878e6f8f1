#include "topograd/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace topograd {

PointCloud::PointCloud(int dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
  if (dim < 1) throw std::invalid_argument("point cloud dimension must be positive");
  if (coords_.size() % static_cast<std::size_t>(dim) != 0) {
    throw std::invalid_argument("coordinate count is not a multiple of the dimension");
  }
  for (double x : coords_) {
    if (!std::isfinite(x)) throw std::invalid_argument("point cloud has a non-finite coordinate");
  }
}

PointCloud PointCloud::from_points(std::span<const std::array<double, 2>> pts) {
  std::vector<double> coords;
  coords.reserve(pts.size() * 2);
  for (const auto& p : pts) {
    coords.push_back(p[0]);
    coords.push_back(p[1]);
  }
  return PointCloud(2, std::move(coords));
}

double PointCloud::distance(Index u, Index v) const {
  double sq = 0.0;
  for (int k = 0; k < dim_; ++k) {
    const double d = (*this)(u, k) - (*this)(v, k);
    sq += d * d;
  }
  return std::sqrt(sq);
}

double PointCloud::diameter() const {
  double best = 0.0;
  for (Index u = 0; u < size(); ++u) {
    for (Index v = u + 1; v < size(); ++v) best = std::max(best, distance(u, v));
  }
  return best;
}

std::vector<std::array<double, 2>> PointCloud::planar() const {
  if (dim_ != 2) throw std::invalid_argument("expected a planar point cloud");
  std::vector<std::array<double, 2>> out(static_cast<std::size_t>(size()));
  for (Index i = 0; i < size(); ++i) out[i] = {(*this)(i, 0), (*this)(i, 1)};
  return out;
}

ScalarField::ScalarField(int rows, int cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("scalar field needs a positive shape");
  if (values_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    throw std::invalid_argument("scalar field has " + std::to_string(values_.size()) +
                                " values for shape " + std::to_string(rows) + "x" +
                                std::to_string(cols));
  }
  for (double x : values_) {
    if (!std::isfinite(x)) throw std::invalid_argument("scalar field has a non-finite value");
  }
}

ScalarField ScalarField::line(std::vector<double> values) {
  const int n = static_cast<int>(values.size());
  return ScalarField(1, n, std::move(values));
}

std::vector<Index> strict_order(const SimplicialComplex& complex,
                                std::span<const double> sublevel_values,
                                const OrderOptions& options) {
  const Index n = complex.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  // Within a dimension simplices are already stored lexicographically, so
  // the simplex index doubles as the lexicographic key.
  if (options.tie_break == TieBreak::deterministic) {
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
      if (sublevel_values[a] != sublevel_values[b]) return sublevel_values[a] < sublevel_values[b];
      return a < b;
    });
  } else {
    std::mt19937_64 rng(options.seed);
    std::vector<std::uint64_t> key(static_cast<std::size_t>(n));
    for (auto& k : key) k = rng();
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
      if (sublevel_values[a] != sublevel_values[b]) return sublevel_values[a] < sublevel_values[b];
      const int da = complex.dimension(a), db = complex.dimension(b);
      if (da != db) return da < db;
      if (key[a] != key[b]) return key[a] < key[b];
      return a < b;
    });
  }
  return order;
}

Filtration::Filtration(std::shared_ptr<const SimplicialComplex> complex, FiltrationKind kind,
                       Direction direction, std::vector<double> values,
                       std::vector<Controller> controllers, OrderOptions order)
    : complex_(std::move(complex)),
      kind_(kind),
      direction_(direction),
      order_options_(order),
      values_(std::move(values)),
      controllers_(std::move(controllers)) {
  const Index n = complex_->size();
  if (static_cast<Index>(values_.size()) != n || static_cast<Index>(controllers_.size()) != n) {
    throw std::invalid_argument("filtration values and controllers must cover every simplex");
  }
  std::vector<double> sub(values_.size());
  for (Index s = 0; s < n; ++s) {
    if (!std::isfinite(values_[s])) throw std::invalid_argument("filtration value is not finite");
    sub[s] = sublevel_value(s);
  }
  order_ = strict_order(*complex_, sub, order_options_);
  position_.assign(static_cast<std::size_t>(n), 0);
  for (Index i = 0; i < n; ++i) position_[order_[i]] = i;
}

bool Filtration::is_monotone() const {
  for (Index s = 0; s < size(); ++s) {
    for (Index f : complex_->faces(s)) {
      if (sublevel_value(f) > sublevel_value(s)) return false;
      if (position_[f] > position_[s]) return false;
    }
  }
  return true;
}

Filtration lower_star(std::shared_ptr<const SimplicialComplex> complex,
                      std::span<const double> vertex_values, Direction direction,
                      const OrderOptions& order) {
  const Index nv = complex->vertex_count();
  if (static_cast<Index>(vertex_values.size()) != nv) {
    throw std::invalid_argument("lower-star filtration got " +
                                std::to_string(vertex_values.size()) + " values for " +
                                std::to_string(nv) + " vertices");
  }
  // The argmax vertex is the one entering last among the vertices, so rank
  // the vertices by the same strict order the full filtration will use.
  const double sign = direction == Direction::sublevel ? 1.0 : -1.0;
  std::vector<Index> vertex_rank(static_cast<std::size_t>(nv));
  {
    std::vector<Index> idx(static_cast<std::size_t>(nv));
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<std::uint64_t> key(static_cast<std::size_t>(nv), 0);
    if (order.tie_break == TieBreak::random) {
      // Same random stream as strict_order so vertex ranks agree with it.
      std::mt19937_64 rng(order.seed);
      for (auto& k : key) k = rng();
    }
    std::sort(idx.begin(), idx.end(), [&](Index a, Index b) {
      const double va = sign * vertex_values[a], vb = sign * vertex_values[b];
      if (va != vb) return va < vb;
      if (key[a] != key[b]) return key[a] < key[b];
      return a < b;
    });
    for (Index i = 0; i < nv; ++i) vertex_rank[idx[i]] = i;
  }

  const Index n = complex->size();
  std::vector<double> values(static_cast<std::size_t>(n));
  std::vector<Controller> controllers(static_cast<std::size_t>(n));
  for (Index s = 0; s < n; ++s) {
    Index best = kNoIndex;
    for (Index v : complex->simplex(s).vertices()) {
      if (best == kNoIndex || vertex_rank[v] > vertex_rank[best]) best = v;
    }
    values[s] = vertex_values[best];
    controllers[s] = Controller{best, kNoIndex};
  }
  return Filtration(std::move(complex), FiltrationKind::lower_star, direction, std::move(values),
                    std::move(controllers), order);
}

Filtration flag(std::shared_ptr<const SimplicialComplex> complex,
                std::span<const double> edge_values, double vertex_value,
                const OrderOptions& order) {
  const auto [ebegin, eend] = complex->dimension_range(1);
  const Index ne = eend - ebegin;
  if (static_cast<Index>(edge_values.size()) != ne) {
    throw std::invalid_argument("flag filtration is missing edge values: got " +
                                std::to_string(edge_values.size()) + " for " +
                                std::to_string(ne) + " edges");
  }
  // Random keys are drawn from the same stream as strict_order so the
  // argmax edge is also the last of the tied edges in the strict order.
  std::vector<std::uint64_t> key(static_cast<std::size_t>(ne), 0);
  if (order.tie_break == TieBreak::random) {
    std::mt19937_64 rng(order.seed);
    for (Index s = 0; s < ebegin; ++s) rng();
    for (auto& k : key) k = rng();
  }
  // True when edge a enters after edge b.
  auto later = [&](Index a, Index b) {
    const double va = edge_values[a - ebegin], vb = edge_values[b - ebegin];
    if (va != vb) return va > vb;
    if (key[a - ebegin] != key[b - ebegin]) return key[a - ebegin] > key[b - ebegin];
    return a > b;
  };

  const Index n = complex->size();
  std::vector<double> values(static_cast<std::size_t>(n), vertex_value);
  std::vector<Controller> controllers(static_cast<std::size_t>(n));
  std::vector<Index> argmax_edge(static_cast<std::size_t>(n), kNoIndex);
  for (Index s = ebegin; s < eend; ++s) {
    argmax_edge[s] = s;
  }
  // Faces are stored before cofaces, so one pass over increasing indices
  // propagates the maximum edge upward.
  for (Index s = eend; s < n; ++s) {
    Index best = kNoIndex;
    for (Index f : complex->faces(s)) {
      const Index e = argmax_edge[f];
      if (best == kNoIndex || later(e, best)) best = e;
    }
    argmax_edge[s] = best;
  }
  for (Index s = ebegin; s < n; ++s) {
    const Index e = argmax_edge[s];
    values[s] = edge_values[e - ebegin];
    const auto& edge = complex->simplex(e);
    controllers[s] = Controller{edge.vertex(0), edge.vertex(1)};
  }
  return Filtration(std::move(complex), FiltrationKind::flag, Direction::sublevel,
                    std::move(values), std::move(controllers), order);
}

Filtration from_simplex_values(std::shared_ptr<const SimplicialComplex> complex,
                               std::vector<double> values, Direction direction,
                               const OrderOptions& order) {
  if (static_cast<Index>(values.size()) != complex->size()) {
    throw std::invalid_argument("need one value per simplex");
  }
  const double sign = direction == Direction::sublevel ? 1.0 : -1.0;
  for (Index s = 0; s < complex->size(); ++s) {
    for (Index f : complex->faces(s)) {
      if (sign * values[f] > sign * values[s]) {
        throw std::invalid_argument("simplex values are not monotone under taking faces");
      }
    }
  }
  std::vector<Controller> controllers(values.size());
  return Filtration(std::move(complex), FiltrationKind::generic, direction, std::move(values),
                    std::move(controllers), order);
}

namespace {

std::vector<double> edge_lengths(const SimplicialComplex& complex, const PointCloud& cloud) {
  const auto [ebegin, eend] = complex.dimension_range(1);
  std::vector<double> lengths;
  lengths.reserve(static_cast<std::size_t>(eend - ebegin));
  for (Index e = ebegin; e < eend; ++e) {
    const auto& s = complex.simplex(e);
    lengths.push_back(cloud.distance(s.vertex(0), s.vertex(1)));
  }
  return lengths;
}

// Cliques of size up to max_size in the graph with sorted adjacency lists,
// each emitted once with increasing vertices.
void expand_cliques(const std::vector<std::vector<Index>>& upper, std::vector<Index>& clique,
                    const std::vector<Index>& candidates, int max_size,
                    std::vector<Simplex>& out) {
  out.emplace_back(clique);
  if (static_cast<int>(clique.size()) == max_size) return;
  for (Index v : candidates) {
    std::vector<Index> next;
    std::set_intersection(candidates.begin(), candidates.end(), upper[v].begin(), upper[v].end(),
                          std::back_inserter(next));
    clique.push_back(v);
    expand_cliques(upper, clique, next, max_size, out);
    clique.pop_back();
  }
}

}  // namespace

Filtration rips_filtration(const PointCloud& cloud, int max_hom_dim, double threshold,
                           const OrderOptions& order) {
  if (max_hom_dim < 0) throw std::invalid_argument("max_hom_dim must be non-negative");
  const Index n = cloud.size();
  if (n < 1) throw std::invalid_argument("Rips filtration needs at least one point");
  if (threshold <= 0.0) threshold = cloud.diameter();
  // upper[v]: neighbours w > v within the threshold.
  std::vector<std::vector<Index>> upper(static_cast<std::size_t>(n));
  for (Index u = 0; u < n; ++u) {
    for (Index v = u + 1; v < n; ++v) {
      if (cloud.distance(u, v) <= threshold) upper[u].push_back(v);
    }
  }
  std::vector<Simplex> simplices;
  std::vector<Index> clique;
  for (Index v = 0; v < n; ++v) {
    clique.assign(1, v);
    expand_cliques(upper, clique, upper[v], max_hom_dim + 2, simplices);
  }
  auto complex = std::make_shared<const SimplicialComplex>(
      SimplicialComplex::from_simplices(std::move(simplices), n));
  const auto lengths = edge_lengths(*complex, cloud);
  return flag(std::move(complex), lengths, 0.0, order);
}

Filtration weak_alpha_filtration(const PointCloud& cloud, const OrderOptions& order) {
  if (cloud.dim() != 2) {
    throw std::invalid_argument("weak Alpha filtration is implemented for planar clouds only");
  }
  const auto pts = cloud.planar();
  auto complex = std::make_shared<const SimplicialComplex>(delaunay_2d(pts));
  const auto lengths = edge_lengths(*complex, cloud);
  return flag(std::move(complex), lengths, 0.0, order);
}

std::vector<double> directional_mask(int rows, int cols, int direction) {
  if (direction < 0 || direction >= kDirectionCount) {
    throw std::invalid_argument("direction index must lie in [0, 8)");
  }
  // cos/sin of k*pi/4 from a table so opposite directions negate exactly.
  constexpr double h = 0.70710678118654752440;
  static constexpr std::array<double, 8> kCos{1.0, h, 0.0, -h, -1.0, -h, 0.0, h};
  static constexpr std::array<double, 8> kSin{0.0, h, 1.0, h, 0.0, -h, -1.0, -h};
  std::vector<double> g(static_cast<std::size_t>(rows) * cols);
  double lo = 0.0, hi = 0.0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double v = kCos[direction] * c + kSin[direction] * r;
      g[static_cast<std::size_t>(r) * cols + c] = v;
      if (r == 0 && c == 0) lo = hi = v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  for (double& v : g) {
    // A direction orthogonal to a one-pixel-wide grid is constant; use 1.
    v = hi > lo ? (v - lo) / (hi - lo) : 1.0;
  }
  return g;
}

namespace {

std::shared_ptr<const SimplicialComplex> cached_grid(int rows, int cols) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const SimplicialComplex>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{rows, cols}];
  if (!slot) slot = std::make_shared<const SimplicialComplex>(build_freudenthal_grid(rows, cols));
  return slot;
}

}  // namespace

Filtration grid_filtration(const ScalarField& image, Direction direction,
                           const OrderOptions& order) {
  return lower_star(cached_grid(image.rows(), image.cols()), image.values(), direction, order);
}

std::array<Filtration, kDirectionCount> directional_filtrations(const ScalarField& image,
                                                                const OrderOptions& order) {
  auto make = [&](int k) {
    auto mask = directional_mask(image.rows(), image.cols(), k);
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] *= image.values()[i];
    return grid_filtration(ScalarField(image.rows(), image.cols(), std::move(mask)),
                           Direction::superlevel, order);
  };
  return {make(0), make(1), make(2), make(3), make(4), make(5), make(6), make(7)};
}

}  // namespace topograd
