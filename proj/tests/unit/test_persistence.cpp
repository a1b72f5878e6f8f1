#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "topograd/error.hpp"
#include "topograd/persistence.hpp"

using namespace topograd;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::pair<double, double>> points_of(const PersistenceDiagram& d, int k) {
  std::vector<std::pair<double, double>> out;
  for (const auto& p : d.pairs()) {
    if (p.dim == k) out.emplace_back(p.birth, p.death);
  }
  return out;
}

// Filtration values drawn from the set of values that actually occur.
std::set<double> levels(const Filtration& f) {
  return {f.values().begin(), f.values().end()};
}

}  // namespace

TEST_CASE("path with a peak") {
  auto c = std::make_shared<const SimplicialComplex>(build_freudenthal_grid(1, 3));
  const std::vector<double> f{0.0, 2.0, 1.0};
  const auto filt = lower_star(c, f);
  const auto pd = reduce(filt, 1);
  using P = std::pair<double, double>;
  CHECK(points_of(pd, 0) == std::vector<P>{{0.0, kInf}, {1.0, 2.0}, {2.0, 2.0}});
  CHECK(points_of(pd, 1).empty());
  const auto ranked = pd.ranked(0);
  REQUIRE(ranked.size() == 2);
  CHECK(pd.pair(ranked[0]).essential());
  CHECK(pd.pair(ranked[1]).birth == 1.0);
  CHECK(pd.ranked(0, true).size() == 3);
  CHECK(pd.pair(ranked[1]).creator == 2);
  CHECK(pd.pair(ranked[1]).destroyer == *c->find_edge(1, 2));
}

TEST_CASE("superlevel diagrams are reported in original coordinates") {
  auto c = std::make_shared<const SimplicialComplex>(build_freudenthal_grid(1, 3));
  const std::vector<double> f{3.0, 0.0, 2.0};
  const auto pd = reduce(lower_star(c, f, Direction::superlevel), 0);
  using P = std::pair<double, double>;
  CHECK(points_of(pd, 0) == std::vector<P>{{3.0, -kInf}, {2.0, 0.0}, {0.0, 0.0}});
  CHECK(pd.pair(pd.ranked(0)[1]).lifetime() == 2.0);
  CHECK(pd.terminal_value() == 0.0);
  CHECK(pd.betti_at(0, -2.5) == 1);  // superlevel set {f >= 2.5}
  CHECK(pd.betti_at(0, -1.5) == 2);
}

TEST_CASE("Rips on the unit square has one loop") {
  const std::vector<std::array<double, 2>> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const auto pd = reduce(rips_filtration(PointCloud::from_points(sq), 1), 1);
  std::vector<std::pair<double, double>> loops;
  for (Index i : pd.ranked(1)) loops.emplace_back(pd.pair(i).birth, pd.pair(i).death);
  REQUIRE(loops.size() == 1);
  CHECK(loops[0].first == 1.0);
  CHECK(loops[0].second == doctest::Approx(std::sqrt(2.0)));
  std::vector<std::pair<double, double>> comps;
  for (Index i : pd.ranked(0)) comps.emplace_back(pd.pair(i).birth, pd.pair(i).death);
  REQUIRE(comps.size() == 4);
  CHECK(comps[0].second == kInf);
  for (int i = 1; i < 4; ++i) CHECK(comps[i] == std::make_pair(0.0, 1.0));
}

TEST_CASE("two points") {
  const std::vector<std::array<double, 2>> pts{{0, 0}, {1, 0}};
  const auto pd = reduce(rips_filtration(PointCloud::from_points(pts), 0), 0);
  using P = std::pair<double, double>;
  CHECK(points_of(pd, 0) == std::vector<P>{{0.0, kInf}, {0.0, 1.0}});
}

TEST_CASE("equilateral triangle under weak alpha") {
  const double s = 2.0;
  const std::vector<std::array<double, 2>> pts{{0, 0}, {s, 0}, {s / 2, s * std::sqrt(3.0) / 2}};
  const auto pd = reduce(weak_alpha_filtration(PointCloud::from_points(pts)), 1);
  const auto pd0 = pd.ranked(0);
  REQUIRE(pd0.size() == 3);
  CHECK(pd.pair(pd0[0]).essential());
  CHECK(pd.pair(pd0[1]).death == doctest::Approx(s));
  CHECK(pd.pair(pd0[2]).death == doctest::Approx(s));
  CHECK(pd.ranked(1).empty());
  CHECK(pd.ranked(1, true).size() == 1);
}

TEST_CASE("pairing properties on random filtrations") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const auto complex = oracle::random_complex(rng, 30, 2);
    const auto values = oracle::random_monotone_values(*complex, rng);
    const auto filt = from_simplex_values(complex, values);
    const auto pd = reduce(filt, complex->max_dimension());

    std::vector<int> uses(static_cast<std::size_t>(complex->size()), 0);
    for (const auto& p : pd.pairs()) {
      ++uses[p.creator];
      if (!p.essential()) {
        ++uses[p.destroyer];
        CHECK(complex->dimension(p.destroyer) == p.dim + 1);
        CHECK(filt.position(p.creator) < filt.position(p.destroyer));
        CHECK(p.birth <= p.death);
      }
      CHECK(complex->dimension(p.creator) == p.dim);
    }
    for (int u : uses) CHECK(u == 1);

    for (int k = 0; k <= complex->max_dimension(); ++k) {
      for (double alpha : levels(filt)) {
        const auto sub = oracle::sublevel_complex(filt, alpha);
        CHECK(pd.betti_at(k, alpha) == betti_oracle(sub, k));
      }
    }

    const auto uf = pd0_union_find(filt);
    CHECK(points_of(uf, 0) == points_of(pd, 0));
    int e0 = 0;
    for (const auto& p : pd.pairs()) e0 += (p.dim == 0 && p.essential());
    CHECK(e0 == oracle::components(*complex));
  }
}

TEST_CASE("union-find matches reduction on images, including ties") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> level(0, 3);
  auto grid = std::make_shared<const SimplicialComplex>(build_freudenthal_grid(8, 9));
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> f(72);
    for (auto& v : f) v = level(rng);
    for (auto dir : {Direction::sublevel, Direction::superlevel}) {
      const auto filt = lower_star(grid, f, dir, {TieBreak::random, static_cast<std::uint64_t>(trial)});
      const auto a = reduce(filt, 0);
      const auto b = pd0_union_find(filt);
      REQUIRE(a.size() == b.size());
      for (Index i = 0; i < a.size(); ++i) CHECK(a.pair(i) == b.pair(i));
    }
  }
}

TEST_CASE("essential classes of a closed surface") {
  std::vector<Simplex> sphere{Simplex{0, 1, 2}, Simplex{0, 1, 3}, Simplex{0, 2, 3}, Simplex{1, 2, 3}};
  auto c = std::make_shared<const SimplicialComplex>(SimplicialComplex::from_simplices(sphere));
  std::vector<double> values(static_cast<std::size_t>(c->size()));
  for (Index s = 0; s < c->size(); ++s) values[s] = c->dimension(s);
  const auto pd = reduce(from_simplex_values(c, values), 2);
  int essential[3] = {0, 0, 0};
  for (const auto& p : pd.pairs()) essential[p.dim] += p.essential();
  CHECK(essential[0] == 1);
  CHECK(essential[1] == 0);
  CHECK(essential[2] == 1);
  CHECK(pd.terminal_simplex() == c->size() - 1);
}
