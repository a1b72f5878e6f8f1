#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include <boost/multiprecision/cpp_int.hpp>

#include "topograd/complex.hpp"
#include "topograd/error.hpp"

namespace topograd {

namespace {

using Point = std::array<double, 2>;
using Rational = boost::multiprecision::cpp_rational;

constexpr double kEps = 0x1p-53;
// Static error bounds for the floating-point filters (Shewchuk).
constexpr double kOrientBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kInCircleBound = (10.0 + 96.0 * kEps) * kEps;

template <typename T>
int sign_of(const T& x) {
  return x > 0 ? 1 : (x < 0 ? -1 : 0);
}

int orient_exact(const Point& a, const Point& b, const Point& c) {
  const Rational acx = Rational(a[0]) - c[0], bcx = Rational(b[0]) - c[0];
  const Rational acy = Rational(a[1]) - c[1], bcy = Rational(b[1]) - c[1];
  return sign_of(acx * bcy - acy * bcx);
}

int incircle_exact(const Point& a, const Point& b, const Point& c, const Point& d) {
  const Rational adx = Rational(a[0]) - d[0], ady = Rational(a[1]) - d[1];
  const Rational bdx = Rational(b[0]) - d[0], bdy = Rational(b[1]) - d[1];
  const Rational cdx = Rational(c[0]) - d[0], cdy = Rational(c[1]) - d[1];
  const Rational alift = adx * adx + ady * ady;
  const Rational blift = bdx * bdx + bdy * bdy;
  const Rational clift = cdx * cdx + cdy * cdy;
  const Rational det = alift * (bdx * cdy - bdy * cdx) + blift * (cdx * ady - cdy * adx) +
                       clift * (adx * bdy - ady * bdx);
  return sign_of(det);
}

}  // namespace

int orient2d(const Point& a, const Point& b, const Point& c) {
  const double left = (a[0] - c[0]) * (b[1] - c[1]);
  const double right = (a[1] - c[1]) * (b[0] - c[0]);
  const double det = left - right;
  const double bound = kOrientBound * (std::abs(left) + std::abs(right));
  if (det > bound || -det > bound) return sign_of(det);
  return orient_exact(a, b, c);
}

int incircle(const Point& a, const Point& b, const Point& c, const Point& d) {
  const double adx = a[0] - d[0], ady = a[1] - d[1];
  const double bdx = b[0] - d[0], bdy = b[1] - d[1];
  const double cdx = c[0] - d[0], cdy = c[1] - d[1];
  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;
  const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
                     clift * (adxbdy - bdxady);
  const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                           (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                           (std::abs(adxbdy) + std::abs(bdxady)) * clift;
  const double bound = kInCircleBound * permanent;
  if (det > bound || -det > bound) return sign_of(det);
  return incircle_exact(a, b, c, d);
}

namespace {

// In-circle test with the lifted coordinate of point i raised by an
// infinitesimal eps_i, where eps_i dominates eps_j whenever i > j. The
// perturbed determinant is linear in each eps, so on an exact zero the sign
// comes from the cofactor of the highest-index point with a nonzero cofactor.
int incircle_perturbed(std::span<const Point> pts, Index a, Index b, Index c, Index d) {
  const int s = incircle(pts[a], pts[b], pts[c], pts[d]);
  if (s != 0) return s;
  struct Term {
    Index idx;
    int sign;
  };
  std::array<Term, 4> terms{{
      {a, orient2d(pts[b], pts[c], pts[d])},
      {b, -orient2d(pts[a], pts[c], pts[d])},
      {c, orient2d(pts[a], pts[b], pts[d])},
      {d, -orient2d(pts[a], pts[b], pts[c])},
  }};
  std::sort(terms.begin(), terms.end(),
            [](const Term& x, const Term& y) { return x.idx > y.idx; });
  for (const auto& t : terms) {
    if (t.sign != 0) return t.sign;
  }
  return 0;
}

std::uint64_t edge_key(Index u, Index v) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(v);
}

class Triangulation {
 public:
  explicit Triangulation(std::span<const Point> pts) : pts_(pts) {}

  void add(Index a, Index b, Index c) {
    const auto id = static_cast<int>(tris_.size());
    tris_.push_back({a, b, c});
    alive_.push_back(true);
    edges_[edge_key(a, b)] = id;
    edges_[edge_key(b, c)] = id;
    edges_[edge_key(c, a)] = id;
  }

  void remove(int id) {
    const auto& t = tris_[id];
    for (int i = 0; i < 3; ++i) edges_.erase(edge_key(t[i], t[(i + 1) % 3]));
    alive_[id] = false;
  }

  int find(Index u, Index v) const {
    auto it = edges_.find(edge_key(u, v));
    return it == edges_.end() ? -1 : it->second;
  }

  Index opposite(int id, Index u, Index v) const {
    for (Index w : tris_[id]) {
      if (w != u && w != v) return w;
    }
    throw ConsistencyError("triangle lost its opposite vertex");
  }

  // Lawson flips until every interior edge is locally Delaunay.
  void legalize(std::vector<std::pair<Index, Index>> stack) {
    while (!stack.empty()) {
      auto [a, b] = stack.back();
      stack.pop_back();
      const int t1 = find(a, b);
      const int t2 = find(b, a);
      if (t1 < 0 || t2 < 0) continue;
      const Index c = opposite(t1, a, b);
      const Index d = opposite(t2, b, a);
      if (incircle_perturbed(pts_, a, b, c, d) <= 0) continue;
      remove(t1);
      remove(t2);
      add(a, d, c);
      add(d, b, c);
      stack.emplace_back(a, d);
      stack.emplace_back(d, b);
      stack.emplace_back(b, c);
      stack.emplace_back(c, a);
    }
  }

  std::vector<std::pair<Index, Index>> all_edges() const {
    std::vector<std::pair<Index, Index>> out;
    for (std::size_t i = 0; i < tris_.size(); ++i) {
      if (!alive_[i]) continue;
      const auto& t = tris_[i];
      for (int k = 0; k < 3; ++k) out.emplace_back(t[k], t[(k + 1) % 3]);
    }
    return out;
  }

  std::vector<std::array<Index, 3>> triangles() const {
    std::vector<std::array<Index, 3>> out;
    for (std::size_t i = 0; i < tris_.size(); ++i) {
      if (alive_[i]) out.push_back(tris_[i]);
    }
    return out;
  }

 private:
  std::span<const Point> pts_;
  std::vector<std::array<Index, 3>> tris_;
  std::vector<bool> alive_;
  std::unordered_map<std::uint64_t, int> edges_;
};

}  // namespace

std::vector<std::array<Index, 3>> delaunay_triangles(std::span<const Point> pts) {
  const auto n = static_cast<Index>(pts.size());
  if (n < 3) {
    throw DegenerateInput("Delaunay triangulation needs at least 3 points, got " +
                          std::to_string(n));
  }
  for (const auto& p : pts) {
    if (!std::isfinite(p[0]) || !std::isfinite(p[1])) {
      throw std::invalid_argument("Delaunay input has a non-finite coordinate");
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Index i, Index j) { return pts[i] < pts[j]; });
  for (Index i = 1; i < n; ++i) {
    if (pts[order[i]] == pts[order[i - 1]]) {
      throw DegenerateInput("Delaunay input has coincident points " +
                            std::to_string(order[i - 1]) + " and " + std::to_string(order[i]));
    }
  }

  // The first point off the line through the two smallest points.
  Index m = 2;
  int turn = 0;
  for (; m < n; ++m) {
    turn = orient2d(pts[order[0]], pts[order[1]], pts[order[m]]);
    if (turn != 0) break;
  }
  if (m == n) throw DegenerateInput("Delaunay input points are all collinear");

  Triangulation tri(pts);
  std::vector<Index> next(static_cast<std::size_t>(n), kNoIndex);
  std::vector<Index> prev(static_cast<std::size_t>(n), kNoIndex);
  auto link = [&](Index u, Index v) {
    next[u] = v;
    prev[v] = u;
  };

  const Index apex = order[m];
  for (Index i = 0; i + 1 < m; ++i) {
    if (turn > 0) {
      tri.add(order[i], order[i + 1], apex);
      link(order[i], order[i + 1]);
    } else {
      tri.add(order[i + 1], order[i], apex);
      link(order[i + 1], order[i]);
    }
  }
  if (turn > 0) {
    link(order[m - 1], apex);
    link(apex, order[0]);
  } else {
    link(order[0], apex);
    link(apex, order[m - 1]);
  }

  // Sweep in lexicographic order: each new point is outside the current hull
  // and sees a contiguous chain of hull edges.
  Index last = apex;
  for (Index j = m + 1; j < n; ++j) {
    const Index p = order[j];
    auto visible = [&](Index u) { return orient2d(pts[u], pts[next[u]], pts[p]) < 0; };
    Index u = last;
    while (!visible(u)) {
      u = next[u];
      if (u == last) throw ConsistencyError("sweep point sees no hull edge");
    }
    Index first = u;
    while (visible(prev[first]) && prev[first] != u) first = prev[first];
    Index end = u;
    while (visible(next[end]) && next[end] != first) end = next[end];
    const Index after = next[end];
    for (Index x = first; x != after;) {
      const Index y = next[x];
      tri.add(y, x, p);
      x = y;
    }
    link(first, p);
    link(p, after);
    last = p;
  }

  tri.legalize(tri.all_edges());
  return tri.triangles();
}

SimplicialComplex delaunay_2d(std::span<const Point> pts) {
  std::vector<Simplex> gens;
  for (const auto& t : delaunay_triangles(pts)) gens.push_back(Simplex{t[0], t[1], t[2]});
  return SimplicialComplex::from_simplices(std::move(gens), static_cast<Index>(pts.size()));
}

}  // namespace topograd
