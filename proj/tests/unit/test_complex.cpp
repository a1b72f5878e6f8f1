#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "topograd/complex.hpp"
#include "topograd/error.hpp"

using namespace topograd;

TEST_CASE("boundary_faces deletes one vertex at a time") {
  const auto tri = boundary_faces(Simplex{0, 1, 2});
  REQUIRE(tri.size() == 3);
  CHECK(tri[0] == Simplex{1, 2});
  CHECK(tri[1] == Simplex{0, 2});
  CHECK(tri[2] == Simplex{0, 1});

  const auto edge = boundary_faces(Simplex{3, 7});
  REQUIRE(edge.size() == 2);
  CHECK(edge[0] == Simplex{7});
  CHECK(edge[1] == Simplex{3});

  CHECK(boundary_faces(Simplex{5}).empty());
}

TEST_CASE("Simplex rejects repeated or negative vertices") {
  CHECK_THROWS_AS(Simplex({1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Simplex({-1, 2}), std::invalid_argument);
  CHECK(Simplex{2, 0, 1}.vertices()[0] == 0);
}

TEST_CASE("Freudenthal grid counts") {
  const auto g22 = build_freudenthal_grid(2, 2);
  CHECK(g22.count(0) == 4);
  CHECK(g22.count(1) == 5);
  CHECK(g22.count(2) == 2);
  CHECK(g22.euler_characteristic() == 1);

  const auto g33 = build_freudenthal_grid(3, 3);
  CHECK(g33.count(0) == 9);
  CHECK(g33.count(1) == 16);
  CHECK(g33.count(2) == 8);

  const auto path = build_freudenthal_grid(1, 5);
  CHECK(path.count(0) == 5);
  CHECK(path.count(1) == 4);
  CHECK(path.count(2) == 0);

  CHECK(g22.find(Simplex{0, 3}).has_value());   // diagonal (0,0)-(1,1)
  CHECK_FALSE(g22.find(Simplex{1, 2}).has_value());

  CHECK_THROWS_AS(build_freudenthal_grid(0, 3), std::invalid_argument);

  for (int r = 1; r <= 6; ++r) {
    for (int c = 1; c <= 6; ++c) {
      const auto g = build_freudenthal_grid(r, c);
      CHECK(g.euler_characteristic() == 1);
      CHECK(g.count(1) == r * (c - 1) + c * (r - 1) + (r - 1) * (c - 1));
      CHECK(g.count(2) == 2 * (r - 1) * (c - 1));
    }
  }
}

TEST_CASE("clique complex counts") {
  const auto k41 = build_clique_complex(4, 1);
  CHECK(k41.count(0) == 4);
  CHECK(k41.count(1) == 6);
  CHECK(k41.count(2) == 0);
  const auto k42 = build_clique_complex(4, 2);
  CHECK(k42.count(2) == 4);
  const auto single = build_clique_complex(1, 0);
  CHECK(single.size() == 1);
  CHECK_THROWS_AS(build_clique_complex(3, 3), std::invalid_argument);
}

TEST_CASE("betti oracle on small complexes") {
  const auto hollow = SimplicialComplex::from_simplices({Simplex{0, 1}, Simplex{1, 2}, Simplex{0, 2}});
  CHECK(betti_oracle(hollow, 0) == 1);
  CHECK(betti_oracle(hollow, 1) == 1);

  const auto filled = SimplicialComplex::from_simplices({Simplex{0, 1, 2}});
  CHECK(betti_oracle(filled, 0) == 1);
  CHECK(betti_oracle(filled, 1) == 0);

  const auto two = SimplicialComplex::from_simplices({}, 2);
  CHECK(betti_oracle(two, 0) == 2);

  // Boundary of a tetrahedron is a sphere.
  std::vector<Simplex> sphere{Simplex{0, 1, 2}, Simplex{0, 1, 3}, Simplex{0, 2, 3}, Simplex{1, 2, 3}};
  const auto s2 = SimplicialComplex::from_simplices(sphere);
  CHECK(betti_oracle(s2, 0) == 1);
  CHECK(betti_oracle(s2, 1) == 0);
  CHECK(betti_oracle(s2, 2) == 1);
}

TEST_CASE("random complexes: boundary of boundary vanishes, beta0 counts components") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto complex = oracle::random_complex(rng, 30, 3);
    for (Index s = 0; s < complex->size(); ++s) {
      if (complex->dimension(s) < 2) continue;
      std::multiset<Index> second;
      for (Index f : complex->faces(s)) {
        for (Index g : complex->faces(f)) second.insert(g);
      }
      for (Index g : second) CHECK(second.count(g) % 2 == 0);
    }
    CHECK(betti_oracle(*complex, 0) == oracle::components(*complex));
    int chi = 0;
    for (int k = 0; k <= complex->max_dimension(); ++k) chi += (k % 2 ? -1 : 1) * betti_oracle(*complex, k);
    CHECK(chi == complex->euler_characteristic());
  }
}

TEST_CASE("Delaunay: small configurations") {
  const std::vector<std::array<double, 2>> tri{{0, 0}, {1, 0}, {0, 1}};
  const auto c3 = delaunay_2d(tri);
  CHECK(c3.count(0) == 3);
  CHECK(c3.count(1) == 3);
  CHECK(c3.count(2) == 1);

  const std::vector<std::array<double, 2>> inner{{0, 0}, {4, 0}, {0, 4}, {1, 1}};
  const auto c4 = delaunay_2d(inner);
  CHECK(c4.count(2) == 3);
  for (const auto& t : delaunay_triangles(inner)) {
    for (Index d = 0; d < 4; ++d) {
      if (d == t[0] || d == t[1] || d == t[2]) continue;
      CHECK_FALSE(oracle::strictly_inside_circumcircle(inner[t[0]], inner[t[1]], inner[t[2]], inner[d]));
    }
  }
}

TEST_CASE("Delaunay: degenerate inputs are rejected") {
  const std::vector<std::array<double, 2>> two{{0, 0}, {1, 1}};
  CHECK_THROWS_AS(delaunay_2d(two), DegenerateInput);
  const std::vector<std::array<double, 2>> line{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  CHECK_THROWS_AS(delaunay_2d(line), DegenerateInput);
  const std::vector<std::array<double, 2>> dup{{0, 0}, {1, 0}, {0, 1}, {1, 0}};
  CHECK_THROWS_AS(delaunay_2d(dup), DegenerateInput);
}

TEST_CASE("Delaunay: cocircular inputs give a deterministic valid triangulation") {
  const std::vector<std::array<double, 2>> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const auto a = delaunay_triangles(square);
  const auto b = delaunay_triangles(square);
  CHECK(a.size() == 2);
  CHECK(a == b);

  std::vector<std::array<double, 2>> lattice;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) lattice.push_back({double(c), double(r)});
  }
  const auto tris = delaunay_triangles(lattice);
  CHECK(tris.size() == 18);
  double area = 0.0;
  for (const auto& t : tris) {
    area += oracle::triangle_area(lattice[t[0]], lattice[t[1]], lattice[t[2]]);
    for (Index d = 0; d < static_cast<Index>(lattice.size()); ++d) {
      if (d == t[0] || d == t[1] || d == t[2]) continue;
      CHECK(incircle(lattice[t[0]], lattice[t[1]], lattice[t[2]], lattice[d]) <= 0);
    }
  }
  CHECK(area == doctest::Approx(9.0).epsilon(1e-12));

  // Collinear prefix in sweep order.
  const std::vector<std::array<double, 2>> fan{{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1.5}, {2, -1}};
  const auto cf = delaunay_2d(fan);
  CHECK(cf.euler_characteristic() == 1);
}

TEST_CASE("Delaunay: random points satisfy the empty-circumcircle property and tile the hull") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pts = oracle::uniform_points(rng, 20 + trial * 5);
    const auto tris = delaunay_triangles(pts);
    double area = 0.0;
    for (const auto& t : tris) {
      CHECK(orient2d(pts[t[0]], pts[t[1]], pts[t[2]]) > 0);
      area += oracle::triangle_area(pts[t[0]], pts[t[1]], pts[t[2]]);
      for (Index d = 0; d < static_cast<Index>(pts.size()); ++d) {
        if (d == t[0] || d == t[1] || d == t[2]) continue;
        CHECK_FALSE(oracle::strictly_inside_circumcircle(pts[t[0]], pts[t[1]], pts[t[2]], pts[d]));
      }
    }
    const double hull = oracle::hull_area(pts);
    CHECK(std::abs(area - hull) <= 1e-9 * hull);
    const auto complex = delaunay_2d(pts);
    CHECK(complex.euler_characteristic() == 1);
    CHECK(complex.vertex_count() == static_cast<Index>(pts.size()));
  }
}

TEST_CASE("exact predicates resolve near-degenerate orientation") {
  const std::array<double, 2> a{0.5, 0.5}, b{12.0, 12.0}, c{24.0, 24.0};
  CHECK(orient2d(a, b, c) == 0);
  const std::array<double, 2> d{0.5 + 0x1p-52, 0.5};
  CHECK(orient2d(d, b, c) != 0);
}
