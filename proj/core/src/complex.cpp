#include "topograd/complex.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace topograd {

Simplex::Simplex(std::vector<Index> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) {
    throw std::invalid_argument("simplex needs at least one vertex");
  }
  std::sort(vertices_.begin(), vertices_.end());
  if (vertices_.front() < 0) {
    throw std::invalid_argument("simplex vertex indices must be non-negative");
  }
  if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end()) {
    throw std::invalid_argument("simplex has a repeated vertex");
  }
}

bool Simplex::contains(Index v) const {
  return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

std::size_t SimplexHash::operator()(const Simplex& s) const noexcept {
  // FNV-1a over the vertex list.
  std::uint64_t h = 1469598103934665603ull;
  for (Index v : s.vertices()) {
    h ^= static_cast<std::uint32_t>(v);
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

std::vector<Simplex> boundary_faces(const Simplex& simplex) {
  std::vector<Simplex> faces;
  if (simplex.dimension() < 1) return faces;
  const auto verts = simplex.vertices();
  faces.reserve(verts.size());
  for (std::size_t skip = 0; skip < verts.size(); ++skip) {
    std::vector<Index> face;
    face.reserve(verts.size() - 1);
    for (std::size_t i = 0; i < verts.size(); ++i) {
      if (i != skip) face.push_back(verts[i]);
    }
    faces.emplace_back(std::move(face));
  }
  return faces;
}

namespace {

bool dim_lex_less(const Simplex& a, const Simplex& b) {
  if (a.dimension() != b.dimension()) return a.dimension() < b.dimension();
  return a < b;
}

}  // namespace

SimplicialComplex SimplicialComplex::from_simplices(std::vector<Simplex> generators,
                                                    Index vertex_count) {
  std::unordered_set<Simplex, SimplexHash> closed;
  std::vector<Simplex> stack = std::move(generators);
  Index max_vertex = vertex_count - 1;
  while (!stack.empty()) {
    Simplex s = std::move(stack.back());
    stack.pop_back();
    if (closed.contains(s)) continue;
    max_vertex = std::max(max_vertex, s.back());
    for (auto& f : boundary_faces(s)) {
      if (!closed.contains(f)) stack.push_back(std::move(f));
    }
    closed.insert(std::move(s));
  }
  for (Index v = 0; v <= max_vertex; ++v) closed.insert(Simplex{v});

  SimplicialComplex out;
  out.simplices_.assign(closed.begin(), closed.end());
  std::sort(out.simplices_.begin(), out.simplices_.end(), dim_lex_less);

  const int top = out.simplices_.empty() ? -1 : out.simplices_.back().dimension();
  out.dim_begin_.assign(static_cast<std::size_t>(top + 2), 0);
  for (Index i = 0, d = 0; d <= top + 1; ++d) {
    while (i < out.size() && out.simplices_[i].dimension() < d) ++i;
    out.dim_begin_[d] = i;
  }

  out.lookup_.reserve(out.simplices_.size());
  for (Index i = 0; i < out.size(); ++i) out.lookup_.emplace(out.simplices_[i], i);

  out.face_begin_.assign(out.simplices_.size() + 1, 0);
  for (Index i = 0; i < out.size(); ++i) {
    const int d = out.simplices_[i].dimension();
    out.face_begin_[i + 1] = out.face_begin_[i] + (d > 0 ? d + 1 : 0);
  }
  out.face_data_.reserve(out.face_begin_.back());
  for (Index i = 0; i < out.size(); ++i) {
    for (const auto& f : boundary_faces(out.simplices_[i])) {
      out.face_data_.push_back(out.lookup_.at(f));
    }
  }
  return out;
}

Index SimplicialComplex::count(int dim) const {
  if (dim < 0 || dim > max_dimension()) return 0;
  return dim_begin_[dim + 1] - dim_begin_[dim];
}

std::pair<Index, Index> SimplicialComplex::dimension_range(int dim) const {
  if (dim < 0 || dim > max_dimension()) return {size(), size()};
  return {dim_begin_[dim], dim_begin_[dim + 1]};
}

std::optional<Index> SimplicialComplex::find(const Simplex& s) const {
  auto it = lookup_.find(s);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<Index> SimplicialComplex::find_edge(Index u, Index v) const {
  if (u == v || u < 0 || v < 0) return std::nullopt;
  return find(Simplex{u, v});
}

int SimplicialComplex::euler_characteristic() const {
  int chi = 0;
  for (int d = 0; d <= max_dimension(); ++d) chi += (d % 2 == 0 ? 1 : -1) * count(d);
  return chi;
}

SimplicialComplex build_freudenthal_grid(int rows, int cols) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("grid needs rows >= 1 and cols >= 1, got " +
                                std::to_string(rows) + "x" + std::to_string(cols));
  }
  auto id = [cols](int r, int c) { return static_cast<Index>(r * cols + c); };
  std::vector<Simplex> gens;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) gens.push_back(Simplex{id(r, c), id(r, c + 1)});
      if (r + 1 < rows) gens.push_back(Simplex{id(r, c), id(r + 1, c)});
      if (r + 1 < rows && c + 1 < cols) {
        gens.push_back(Simplex{id(r, c), id(r, c + 1), id(r + 1, c + 1)});
        gens.push_back(Simplex{id(r, c), id(r + 1, c), id(r + 1, c + 1)});
      }
    }
  }
  return SimplicialComplex::from_simplices(std::move(gens), rows * cols);
}

SimplicialComplex build_clique_complex(int n, int max_dim) {
  if (n < 1) throw std::invalid_argument("clique complex needs n >= 1");
  if (max_dim < 0 || max_dim > n - 1) {
    throw std::invalid_argument("clique complex max_dim must lie in [0, n-1]");
  }
  std::vector<Simplex> gens;
  // Enumerate all (max_dim+1)-subsets; closure supplies the rest.
  std::vector<Index> pick(static_cast<std::size_t>(max_dim + 1));
  for (int i = 0; i <= max_dim; ++i) pick[i] = i;
  while (true) {
    gens.emplace_back(pick);
    int i = max_dim;
    while (i >= 0 && pick[i] == n - (max_dim + 1) + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j <= max_dim; ++j) pick[j] = pick[j - 1] + 1;
  }
  return SimplicialComplex::from_simplices(std::move(gens), n);
}

namespace {

using Row = std::vector<std::uint64_t>;

// Rank over GF(2) of a dense 0/1 matrix given as bit-packed rows.
int gf2_rank(std::vector<Row> rows, std::size_t ncols) {
  int rank = 0;
  const std::size_t nrows = rows.size();
  for (std::size_t col = 0; col < ncols && static_cast<std::size_t>(rank) < nrows; ++col) {
    const std::size_t word = col / 64;
    const std::uint64_t bit = std::uint64_t{1} << (col % 64);
    std::size_t pivot = static_cast<std::size_t>(rank);
    while (pivot < nrows && !(rows[pivot][word] & bit)) ++pivot;
    if (pivot == nrows) continue;
    std::swap(rows[pivot], rows[rank]);
    for (std::size_t r = 0; r < nrows; ++r) {
      if (r != static_cast<std::size_t>(rank) && (rows[r][word] & bit)) {
        for (std::size_t w = 0; w < rows[r].size(); ++w) rows[r][w] ^= rows[rank][w];
      }
    }
    ++rank;
  }
  return rank;
}

// Rank of the boundary map from dimension d to d-1.
int boundary_rank(const SimplicialComplex& complex, int d) {
  if (d <= 0 || d > complex.max_dimension()) return 0;
  const auto [cbegin, cend] = complex.dimension_range(d);
  const auto [rbegin, rend] = complex.dimension_range(d - 1);
  const std::size_t ncols = static_cast<std::size_t>(rend - rbegin);
  const std::size_t words = (ncols + 63) / 64;
  std::vector<Row> rows;
  rows.reserve(static_cast<std::size_t>(cend - cbegin));
  for (Index s = cbegin; s < cend; ++s) {
    Row row(words, 0);
    for (Index f : complex.faces(s)) {
      const auto c = static_cast<std::size_t>(f - rbegin);
      row[c / 64] ^= std::uint64_t{1} << (c % 64);
    }
    rows.push_back(std::move(row));
  }
  return gf2_rank(std::move(rows), ncols);
}

}  // namespace

int betti_oracle(const SimplicialComplex& complex, int k) {
  if (k < 0 || k > complex.max_dimension()) return 0;
  return complex.count(k) - boundary_rank(complex, k) - boundary_rank(complex, k + 1);
}

}  // namespace topograd
