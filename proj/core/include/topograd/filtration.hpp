#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "topograd/complex.hpp"

namespace topograd {

enum class Direction { sublevel, superlevel };

/// How simplices entering at the same value are put in a strict order.
/// deterministic: (value, dimension, lexicographic vertices).
/// random: (value, dimension, seeded random key); samples other subgradients.
enum class TieBreak { deterministic, random };

struct OrderOptions {
  TieBreak tie_break = TieBreak::deterministic;
  std::uint64_t seed = 0;
};

enum class FiltrationKind { lower_star, flag, generic };

/// n points in R^d, stored row-major.
class PointCloud {
 public:
  PointCloud() = default;
  PointCloud(int dim, std::vector<double> coords);

  static PointCloud from_points(std::span<const std::array<double, 2>> pts);

  Index size() const { return dim_ == 0 ? 0 : static_cast<Index>(coords_.size() / dim_); }
  int dim() const { return dim_; }
  std::span<const double> point(Index i) const {
    return {coords_.data() + static_cast<std::size_t>(i) * dim_, static_cast<std::size_t>(dim_)};
  }
  double operator()(Index i, int k) const { return coords_[static_cast<std::size_t>(i) * dim_ + k]; }
  double& operator()(Index i, int k) { return coords_[static_cast<std::size_t>(i) * dim_ + k]; }
  std::span<const double> coords() const { return coords_; }
  std::span<double> coords() { return coords_; }

  double distance(Index u, Index v) const;
  double diameter() const;
  std::vector<std::array<double, 2>> planar() const;

 private:
  int dim_ = 0;
  std::vector<double> coords_;
};

/// Real values on grid pixels (row-major) or on the indices of a line.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(int rows, int cols, std::vector<double> values);

  static ScalarField line(std::vector<double> values);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Index size() const { return static_cast<Index>(values_.size()); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator()(int r, int c) const { return values_[static_cast<std::size_t>(r) * cols_ + c]; }
  double& operator()(int r, int c) { return values_[static_cast<std::size_t>(r) * cols_ + c]; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> values_;
};

/// The parameter that sets a simplex's value: a vertex (`second` unset) for
/// lower-star filtrations, an edge (first < second) for flag filtrations.
/// Vertices of a flag filtration have no controller.
struct Controller {
  Index first = kNoIndex;
  Index second = kNoIndex;

  bool is_vertex() const { return first != kNoIndex && second == kNoIndex; }
  bool is_edge() const { return second != kNoIndex; }
  bool empty() const { return first == kNoIndex; }
  bool operator==(const Controller&) const = default;
};

/// A complex with a value per simplex and a strict total order compatible
/// with those values. Values are reported in the caller's coordinates; a
/// superlevel filtration orders by the negated values internally.
class Filtration {
 public:
  Filtration(std::shared_ptr<const SimplicialComplex> complex, FiltrationKind kind,
             Direction direction, std::vector<double> values,
             std::vector<Controller> controllers, OrderOptions order);

  const SimplicialComplex& complex() const { return *complex_; }
  std::shared_ptr<const SimplicialComplex> complex_ptr() const { return complex_; }
  FiltrationKind kind() const { return kind_; }
  Direction direction() const { return direction_; }
  const OrderOptions& order_options() const { return order_options_; }
  Index size() const { return complex_->size(); }

  double value(Index s) const { return values_[s]; }
  std::span<const double> values() const { return values_; }
  /// Value in the sublevel convention (negated for superlevel).
  double sublevel_value(Index s) const {
    return direction_ == Direction::sublevel ? values_[s] : -values_[s];
  }

  /// order()[i] is the i-th simplex to enter.
  std::span<const Index> order() const { return order_; }
  Index position(Index s) const { return position_[s]; }
  const Controller& controller(Index s) const { return controllers_[s]; }

  /// Every face enters no later than its cofaces, in value and in order.
  bool is_monotone() const;

 private:
  std::shared_ptr<const SimplicialComplex> complex_;
  FiltrationKind kind_;
  Direction direction_;
  OrderOptions order_options_;
  std::vector<double> values_;
  std::vector<Controller> controllers_;
  std::vector<Index> order_;
  std::vector<Index> position_;
};

/// Strict order of simplices by (value, dimension, tie key); sublevel values
/// are expected. The tie key is the lexicographic vertex tuple, or a seeded
/// random key in TieBreak::random mode.
std::vector<Index> strict_order(const SimplicialComplex& complex,
                                std::span<const double> sublevel_values,
                                const OrderOptions& options = {});

/// Lower-star extension: a simplex takes the max of its vertex values
/// (min for superlevel). Throws std::invalid_argument on a length mismatch.
Filtration lower_star(std::shared_ptr<const SimplicialComplex> complex,
                      std::span<const double> vertex_values,
                      Direction direction = Direction::sublevel,
                      const OrderOptions& order = {});

/// Flag extension of per-edge values; `edge_values` is aligned with the
/// complex's edges (complex.dimension_range(1)).
Filtration flag(std::shared_ptr<const SimplicialComplex> complex,
                std::span<const double> edge_values, double vertex_value = 0.0,
                const OrderOptions& order = {});

/// Filtration from explicit per-simplex values (no parameter controllers).
/// Throws std::invalid_argument if some face has a larger value than a coface.
Filtration from_simplex_values(std::shared_ptr<const SimplicialComplex> complex,
                               std::vector<double> values,
                               Direction direction = Direction::sublevel,
                               const OrderOptions& order = {});

/// Rips filtration: clique complex on edges of length <= threshold, up to
/// simplex dimension max_hom_dim + 1. A non-positive threshold means the
/// diameter of the cloud (no truncation).
Filtration rips_filtration(const PointCloud& cloud, int max_hom_dim,
                           double threshold = 0.0, const OrderOptions& order = {});

/// Flag filtration of edge lengths on the planar Delaunay triangulation.
Filtration weak_alpha_filtration(const PointCloud& cloud, const OrderOptions& order = {});

inline constexpr int kDirectionCount = 8;

/// cos(theta) x + sin(theta) y for theta = k pi/4 with x = column and
/// y = row, mapped affinely onto [0, 1] over the grid.
std::vector<double> directional_mask(int rows, int cols, int direction);

/// The eight superlevel lower-star filtrations of image * mask_k over the
/// Freudenthal triangulation of the image grid.
std::array<Filtration, kDirectionCount> directional_filtrations(
    const ScalarField& image, const OrderOptions& order = {});

/// Superlevel or sublevel lower-star filtration on a shared grid complex.
Filtration grid_filtration(const ScalarField& image, Direction direction,
                           const OrderOptions& order = {});

}  // namespace topograd
