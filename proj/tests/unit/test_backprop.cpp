#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "topograd/objective.hpp"

using namespace topograd;

namespace {

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("finite-difference checker on a smooth function") {
  const ScalarFunction f = [](std::span<const double> x) { return x[0] * x[0] + 3.0 * x[1]; };
  const std::vector<double> x{1.5, -2.0};
  const std::vector<double> good{3.0, 3.0};
  const auto ok = finite_difference_check(f, good, x);
  CHECK(ok.checked == 2);
  CHECK(ok.max_rel_error < 1e-8);
  const std::vector<double> bad{3.0, 2.0};
  CHECK(finite_difference_check(f, bad, x).max_rel_error > 0.1);
  const SignatureFunction sig = [](std::span<const double> y) { return y[0] > 1.5 ? 1u : 0u; };
  const auto skipped = finite_difference_check(f, good, x, {}, sig);
  CHECK(skipped.unstable == 1);
  CHECK(skipped.checked == 1);
}

TEST_CASE("five-point stencil removes the cubic truncation term") {
  // x^3 at x = 0.01: two-point error h^2 = 1e-8 against a slope of 3e-4.
  const ScalarFunction cube = [](std::span<const double> x) { return x[0] * x[0] * x[0]; };
  const std::vector<double> x{0.01}, g{3e-4};
  FiniteDifferenceOptions two;
  two.stencil = Stencil::two_point;
  CHECK(finite_difference_check(cube, g, x, two).max_rel_error > 1e-5);
  CHECK(finite_difference_check(cube, g, x).max_rel_error < 1e-9);
}

TEST_CASE("lower-star gradients match finite differences on images") {
  std::mt19937_64 rng(4);
  auto grid = std::make_shared<const SimplicialComplex>(build_freudenthal_grid(8, 8));
  int checked = 0;
  for (int k = 0; k <= 1; ++k) {
    for (double p = 0; p <= 2; ++p) {
      for (double q = 0; q <= 2; ++q) {
        for (auto dir : {Direction::sublevel, Direction::superlevel}) {
          const auto img = random_values(rng, 64);
          const std::vector<LossTerm> terms{{{p, q, 1, k}, 1.0}};
          auto eval = [&](std::span<const double> x) {
            return evaluate_lower_star(grid, x, dir, terms);
          };
          const auto at = eval(img);
          const auto report = finite_difference_check(
              [&](std::span<const double> x) { return eval(x).value; }, at.gradient, img,
              {1e-4, 64, static_cast<std::uint64_t>(k)},
              [&](std::span<const double> x) { return eval(x).signature; });
          CHECK(report.max_rel_error <= 1e-5);
          checked += report.checked;
        }
      }
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("Rips and weak alpha gradients match finite differences") {
  std::mt19937_64 rng(8);
  for (auto kind : {PointFiltration::rips, PointFiltration::weak_alpha}) {
    for (int k = 0; k <= 1; ++k) {
      for (double p : {1.0, 2.0}) {
        for (double q : {0.0, 1.0}) {
          const auto coords = random_values(rng, 30);
          const std::vector<LossTerm> terms{{{p, q, 1, k}, 1.0}};
          auto eval = [&](std::span<const double> x) {
            return evaluate_point_cloud(PointCloud(2, {x.begin(), x.end()}), {kind, 0.0}, terms);
          };
          const auto at = eval(coords);
          const auto report = finite_difference_check(
              [&](std::span<const double> x) { return eval(x).value; }, at.gradient, coords,
              {1e-4, 30, 1}, [&](std::span<const double> x) { return eval(x).signature; });
          CHECK(report.max_rel_error <= 1e-5);
          CHECK(report.checked > 0);
        }
      }
    }
  }
}

TEST_CASE("gradient step decreases the loss even at ties") {
  // Three tied minima; every tie-break gives a descent direction.
  auto c = std::make_shared<const SimplicialComplex>(build_freudenthal_grid(1, 5));
  const std::vector<double> f{0.0, 1.0, 0.0, 1.0, 0.0};
  const std::vector<LossTerm> terms{{{1.0, 0.0, 2, 0}, 1.0}};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const OrderOptions order{TieBreak::random, seed};
    const auto at = evaluate_lower_star(c, f, Direction::sublevel, terms, {}, order);
    CHECK(at.value == 2.0);
    auto g = f;
    for (std::size_t i = 0; i < g.size(); ++i) g[i] -= 0.1 * at.gradient[i];
    const auto after = evaluate_lower_star(c, g, Direction::sublevel, terms, {}, order);
    CHECK(after.value < at.value);
  }
}

TEST_CASE("weighted terms combine linearly") {
  auto grid = std::make_shared<const SimplicialComplex>(build_freudenthal_grid(5, 5));
  std::mt19937_64 rng(1);
  const auto img = random_values(rng, 25);
  const LossSpec a{1.0, 0.0, 2, 0}, b{2.0, 1.0, 1, 1};
  const std::vector<LossTerm> ta{{a, 1.0}}, tb{{b, 1.0}}, both{{a, 2.0}, {b, -0.5}};
  const auto ea = evaluate_lower_star(grid, img, Direction::sublevel, ta);
  const auto eb = evaluate_lower_star(grid, img, Direction::sublevel, tb);
  const auto e = evaluate_lower_star(grid, img, Direction::sublevel, both);
  CHECK(e.value == doctest::Approx(2.0 * ea.value - 0.5 * eb.value));
  for (std::size_t i = 0; i < img.size(); ++i) {
    CHECK(e.gradient[i] == doctest::Approx(2.0 * ea.gradient[i] - 0.5 * eb.gradient[i]));
  }
}

TEST_CASE("point gradients skip zero-length controller edges") {
  const std::vector<double> coords{0.0, 0.0, 0.0, 0.0, 1.0, 0.0};
  const auto filt = rips_filtration(PointCloud(2, coords), 0);
  std::vector<double> g(static_cast<std::size_t>(filt.size()), 1.0);
  const auto grad = simplex_to_point_grad(filt, PointCloud(2, coords), g);
  CHECK(grad.degenerate_edges == 1);
  for (double x : grad.coords) CHECK(std::isfinite(x));
}

TEST_CASE("gradient routing needs the matching filtration kind") {
  auto c = std::make_shared<const SimplicialComplex>(build_freudenthal_grid(1, 3));
  const auto ls = lower_star(c, std::vector<double>{0.0, 1.0, 2.0});
  const std::vector<double> g(static_cast<std::size_t>(ls.size()), 0.0);
  CHECK_THROWS_AS(simplex_to_point_grad(ls, PointCloud(1, {0.0, 1.0, 2.0}), g), std::invalid_argument);
  const auto fl = rips_filtration(PointCloud(1, {0.0, 1.0, 2.0}), 0);
  const std::vector<double> h(static_cast<std::size_t>(fl.size()), 0.0);
  CHECK_THROWS_AS(simplex_to_vertex_grad(fl, h), std::invalid_argument);
}

TEST_CASE("a single point has no loss") {
  const std::vector<LossTerm> terms{{{1.0, 0.0, 1, 0}, 1.0}};
  const auto e = evaluate_point_cloud(PointCloud(2, {0.5, 0.5}), {PointFiltration::rips, 0.0}, terms);
  CHECK(e.value == 0.0);
  CHECK(e.gradient.size() == 2);
}
