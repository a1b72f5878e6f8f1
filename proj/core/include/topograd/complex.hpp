#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace topograd {

/// Index of a vertex or of a simplex inside a complex.
using Index = std::int32_t;

inline constexpr Index kNoIndex = -1;

/// A simplex given by its strictly increasing vertex list.
class Simplex {
 public:
  Simplex() = default;

  /// Sorts the vertices; throws std::invalid_argument on repeats, negative
  /// indices, or an empty list.
  explicit Simplex(std::vector<Index> vertices);
  Simplex(std::initializer_list<Index> vertices)
      : Simplex(std::vector<Index>(vertices)) {}

  int dimension() const { return static_cast<int>(vertices_.size()) - 1; }
  std::span<const Index> vertices() const { return vertices_; }
  Index vertex(std::size_t i) const { return vertices_[i]; }
  Index front() const { return vertices_.front(); }
  Index back() const { return vertices_.back(); }
  bool contains(Index v) const;

  auto operator<=>(const Simplex&) const = default;
  bool operator==(const Simplex&) const = default;

 private:
  std::vector<Index> vertices_;
};

struct SimplexHash {
  std::size_t operator()(const Simplex& s) const noexcept;
};

/// Codimension-1 faces obtained by deleting each vertex in turn, in the order
/// v0 removed, v1 removed, ... A vertex has no faces.
std::vector<Simplex> boundary_faces(const Simplex& simplex);

/// Finite, face-closed simplicial complex. Simplices are stored grouped by
/// dimension and lexicographically within a dimension; vertex v is simplex v.
/// Immutable after construction.
class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  /// Closure of `generators` under taking faces. Vertices 0..vertex_count-1
  /// are always present, so isolated vertices need not be listed.
  static SimplicialComplex from_simplices(std::vector<Simplex> generators,
                                          Index vertex_count = 0);

  Index size() const { return static_cast<Index>(simplices_.size()); }
  int max_dimension() const { return static_cast<int>(dim_begin_.size()) - 2; }
  Index vertex_count() const { return count(0); }
  Index count(int dim) const;

  /// [begin, end) of the simplices of dimension `dim`.
  std::pair<Index, Index> dimension_range(int dim) const;

  const Simplex& simplex(Index i) const { return simplices_[i]; }
  std::span<const Simplex> simplices() const { return simplices_; }
  int dimension(Index i) const { return simplices_[i].dimension(); }

  /// Indices of the codimension-1 faces of simplex i.
  std::span<const Index> faces(Index i) const {
    return {face_data_.data() + face_begin_[i],
            face_data_.data() + face_begin_[i + 1]};
  }

  std::optional<Index> find(const Simplex& s) const;
  std::optional<Index> find_edge(Index u, Index v) const;

  int euler_characteristic() const;

 private:
  std::vector<Simplex> simplices_;
  std::vector<Index> dim_begin_;  // size max_dim + 2
  std::vector<std::size_t> face_begin_;
  std::vector<Index> face_data_;
  std::unordered_map<Simplex, Index, SimplexHash> lookup_;
};

/// Triangulated pixel grid: vertex r*cols+c, axis edges, and the diagonal
/// (r,c)-(r+1,c+1) splitting each cell into two triangles.
SimplicialComplex build_freudenthal_grid(int rows, int cols);

/// Every simplex on n vertices up to dimension max_dim.
SimplicialComplex build_clique_complex(int n, int max_dim);

/// Delaunay triangulation of planar points. Throws DegenerateInput for fewer
/// than three points, coincident points, or an all-collinear input.
/// Cocircular configurations are resolved by a symbolic perturbation of the
/// lifted coordinates in which larger point indices dominate.
SimplicialComplex delaunay_2d(std::span<const std::array<double, 2>> points);

/// Triangles of the Delaunay triangulation as counter-clockwise vertex
/// triples. Same preconditions as delaunay_2d.
std::vector<std::array<Index, 3>> delaunay_triangles(
    std::span<const std::array<double, 2>> points);

/// dim H_k over the two-element field, by dense Gaussian elimination of the
/// boundary matrices. Meant as a test oracle for small complexes.
int betti_oracle(const SimplicialComplex& complex, int k);

/// Sign of the orientation determinant of (a, b, c), computed exactly:
/// +1 counter-clockwise, -1 clockwise, 0 collinear.
int orient2d(const std::array<double, 2>& a, const std::array<double, 2>& b,
             const std::array<double, 2>& c);

/// Exact sign of the in-circle determinant: positive when d lies strictly
/// inside the circle through the counter-clockwise triangle (a, b, c).
int incircle(const std::array<double, 2>& a, const std::array<double, 2>& b,
             const std::array<double, 2>& c, const std::array<double, 2>& d);

}  // namespace topograd
