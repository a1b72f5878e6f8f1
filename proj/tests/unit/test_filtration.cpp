#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "topograd/filtration.hpp"

using namespace topograd;

namespace {

std::shared_ptr<const SimplicialComplex> path_complex(int n) {
  return std::make_shared<const SimplicialComplex>(build_freudenthal_grid(1, n));
}

}  // namespace

TEST_CASE("lower-star values and controllers on a path") {
  const std::vector<double> f{0.0, 2.0, 1.0};
  const auto filt = lower_star(path_complex(3), f);
  const auto& c = filt.complex();
  const Index e01 = *c.find_edge(0, 1), e12 = *c.find_edge(1, 2);
  CHECK(filt.value(e01) == 2.0);
  CHECK(filt.value(e12) == 2.0);
  CHECK(filt.controller(e01) == Controller{1, kNoIndex});
  CHECK(filt.controller(e12) == Controller{1, kNoIndex});
  CHECK(filt.is_monotone());
  // Order: v0(0), v2(1), v1(2), e01, e12.
  const std::vector<Index> expected{0, 2, 1, e01, e12};
  CHECK(std::vector<Index>(filt.order().begin(), filt.order().end()) == expected);
}

TEST_CASE("superlevel lower-star takes the minimum and reverses the order") {
  const std::vector<double> f{0.0, 2.0, 1.0};
  const auto filt = lower_star(path_complex(3), f, Direction::superlevel);
  const auto& c = filt.complex();
  CHECK(filt.value(*c.find_edge(0, 1)) == 0.0);
  CHECK(filt.value(*c.find_edge(1, 2)) == 1.0);
  CHECK(filt.order()[0] == 1);
  CHECK(filt.sublevel_value(1) == -2.0);
  CHECK(filt.is_monotone());
}

TEST_CASE("lower-star rejects a wrong number of values") {
  const std::vector<double> f{0.0, 1.0};
  CHECK_THROWS_AS(lower_star(path_complex(3), f), std::invalid_argument);
  const std::vector<double> nan{0.0, std::nan(""), 1.0};
  CHECK_THROWS_AS(lower_star(path_complex(3), nan), std::invalid_argument);
}

TEST_CASE("flag filtration: triangle enters with its longest edge") {
  auto c = std::make_shared<const SimplicialComplex>(SimplicialComplex::from_simplices({Simplex{0, 1, 2}}));
  // Edges in lex order: (0,1), (0,2), (1,2).
  const std::vector<double> lengths{1.0, 2.0, 3.0};
  const auto filt = flag(c, lengths);
  const Index tri = c->dimension_range(2).first;
  CHECK(filt.value(tri) == 3.0);
  CHECK(filt.controller(tri) == Controller{1, 2});
  CHECK(filt.value(0) == 0.0);
  CHECK(filt.controller(0).empty());
  CHECK(filt.is_monotone());
  CHECK_THROWS_AS(flag(c, std::vector<double>{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("flag filtration: tied edges pick the one last in the strict order") {
  auto c = std::make_shared<const SimplicialComplex>(SimplicialComplex::from_simplices({Simplex{0, 1, 2}}));
  const std::vector<double> lengths{1.0, 1.0, 1.0};
  const auto det = flag(c, lengths);
  const Index tri = c->dimension_range(2).first;
  CHECK(det.controller(tri) == Controller{1, 2});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto rnd = flag(c, lengths, 0.0, {TieBreak::random, seed});
    const auto ctrl = rnd.controller(tri);
    const Index e = *c->find_edge(ctrl.first, ctrl.second);
    for (Index f : c->faces(tri)) CHECK(rnd.position(f) <= rnd.position(e));
    CHECK(rnd.is_monotone());
  }
}

TEST_CASE("random tie-breaking keeps lower-star controllers consistent") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> level(0, 2);
  auto grid = std::make_shared<const SimplicialComplex>(build_freudenthal_grid(5, 5));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::vector<double> f(25);
    for (auto& v : f) v = level(rng);
    const auto filt = lower_star(grid, f, Direction::sublevel, {TieBreak::random, seed});
    CHECK(filt.is_monotone());
    for (Index s = 0; s < filt.size(); ++s) {
      const Index ctrl = filt.controller(s).first;
      for (Index v : grid->simplex(s).vertices()) CHECK(filt.position(v) <= filt.position(ctrl));
    }
  }
}

TEST_CASE("strict order is by value, then dimension, then lexicographic") {
  auto c = std::make_shared<const SimplicialComplex>(SimplicialComplex::from_simplices({Simplex{0, 1, 2}}));
  const std::vector<double> values(7, 0.0);
  const auto order = strict_order(*c, values);
  for (Index i = 0; i < 7; ++i) CHECK(order[i] == i);
}

TEST_CASE("from_simplex_values validates monotonicity") {
  auto c = std::make_shared<const SimplicialComplex>(build_freudenthal_grid(1, 2));
  CHECK_NOTHROW(from_simplex_values(c, {0.0, 1.0, 1.0}));
  CHECK_THROWS_AS(from_simplex_values(c, {0.0, 2.0, 1.0}), std::invalid_argument);
  CHECK_NOTHROW(from_simplex_values(c, {0.0, 2.0, 0.0}, Direction::superlevel));
}

TEST_CASE("Rips filtration on a unit square") {
  const std::vector<std::array<double, 2>> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const auto filt = rips_filtration(PointCloud::from_points(sq), 1);
  const auto& c = filt.complex();
  CHECK(c.count(0) == 4);
  CHECK(c.count(1) == 6);
  CHECK(c.count(2) == 4);
  CHECK(c.count(3) == 0);
  CHECK(filt.value(*c.find_edge(0, 2)) == doctest::Approx(std::sqrt(2.0)));
  CHECK(filt.is_monotone());

  const auto cut = rips_filtration(PointCloud::from_points(sq), 1, 1.2);
  CHECK(cut.complex().count(1) == 4);
  CHECK(cut.complex().count(2) == 0);
}

TEST_CASE("weak alpha filtration uses Delaunay edges") {
  std::mt19937_64 rng(9);
  const auto pts = oracle::uniform_points(rng, 30);
  const auto filt = weak_alpha_filtration(PointCloud::from_points(pts));
  CHECK(filt.complex().count(0) == 30);
  CHECK(filt.complex().euler_characteristic() == 1);
  CHECK(filt.is_monotone());
  CHECK_THROWS_AS(weak_alpha_filtration(PointCloud(3, std::vector<double>(9, 0.0))), std::invalid_argument);
}

TEST_CASE("directional masks") {
  const auto m0 = directional_mask(3, 4, 0);
  CHECK(m0[0] == 0.0);
  CHECK(m0[3] == 1.0);
  CHECK(m0[8 + 3] == 1.0);
  const auto m4 = directional_mask(3, 4, 4);
  for (std::size_t i = 0; i < m0.size(); ++i) CHECK(m0[i] + m4[i] == doctest::Approx(1.0));
  const auto m2 = directional_mask(3, 4, 2);
  CHECK(m2[0] == 0.0);
  CHECK(m2[8] == 1.0);
  // Orthogonal to a single row: constant.
  const auto flat = directional_mask(1, 5, 2);
  for (double v : flat) CHECK(v == 1.0);
  for (int k = 0; k < 8; ++k) {
    for (double v : directional_mask(7, 5, k)) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
  CHECK_THROWS_AS(directional_mask(3, 3, 8), std::invalid_argument);
}

TEST_CASE("directional filtrations are superlevel on the shared grid") {
  ScalarField img(4, 4, std::vector<double>(16, 1.0));
  const auto fs = directional_filtrations(img);
  for (const auto& f : fs) {
    CHECK(f.direction() == Direction::superlevel);
    CHECK(f.size() == fs[0].size());
    CHECK(f.complex_ptr() == fs[0].complex_ptr());
  }
}

TEST_CASE("ScalarField validates its shape") {
  CHECK_THROWS_AS(ScalarField(2, 2, {1.0, 2.0, 3.0}), std::invalid_argument);
  const auto line = ScalarField::line({1.0, 2.0});
  CHECK(line.rows() == 1);
  CHECK(line.cols() == 2);
}
