#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <random>
#include <string>

#include "commands.hpp"
#include "io.hpp"
#include "oracles.hpp"
#include "topograd/backprop.hpp"
#include "topograd/objective.hpp"
#include "topograd/persistence.hpp"

namespace topograd::cli {

namespace {

struct Suite {
  explicit Suite(std::string n) : name(std::move(n)) {}

  std::string name;
  int cases = 0;
  int failures = 0;
  std::string first_failure;

  void fail(const std::string& what) {
    if (failures++ == 0) first_failure = what;
  }
};

Suite betti_suite(int trials, std::mt19937_64& rng) {
  Suite s{"betti"};
  for (int t = 0; t < trials; ++t) {
    const auto complex = oracle::random_complex(rng);
    const auto filt = from_simplex_values(complex, oracle::random_monotone_values(*complex, rng));
    const auto diagram = reduce(filt, std::min(2, complex->max_dimension()));
    for (Index a = 0; a < filt.size(); ++a) {
      const double alpha = filt.value(a);
      const auto sub = oracle::sublevel_complex(filt, alpha);
      for (int k = 0; k <= 2; ++k) {
        ++s.cases;
        if (diagram.betti_at(k, alpha) != betti_oracle(sub, k)) {
          s.fail("trial " + std::to_string(t) + ", dim " + std::to_string(k) + ", alpha " + format_double(alpha));
        }
      }
    }
    // Every simplex creates or destroys exactly one class.
    std::vector<int> uses(static_cast<std::size_t>(filt.size()), 0);
    for (const auto& p : diagram.pairs()) {
      ++uses[p.creator];
      if (!p.essential()) ++uses[p.destroyer];
    }
    for (int u : uses) {
      if (u != 1) s.fail("trial " + std::to_string(t) + ": pairing is not a partition");
    }
  }
  return s;
}

Suite union_find_suite(int trials, std::mt19937_64& rng) {
  Suite s{"union-find vs reduce"};
  std::uniform_int_distribution<int> level(0, 5);
  for (int t = 0; t < trials; ++t) {
    std::vector<double> v(42);
    for (auto& x : v) x = level(rng);
    const ScalarField img(6, 7, v);
    for (auto dir : {Direction::sublevel, Direction::superlevel}) {
      const auto filt = grid_filtration(img, dir);
      const auto uf = pd0_union_find(filt);
      const auto red = reduce(filt, 0);
      ++s.cases;
      if (!std::equal(uf.pairs().begin(), uf.pairs().end(), red.pairs().begin(), red.pairs().end())) {
        s.fail("trial " + std::to_string(t));
      }
    }
  }
  return s;
}

Suite gradient_suite(int trials, std::mt19937_64& rng) {
  Suite s{"finite differences"};
  auto grid = std::make_shared<const SimplicialComplex>(build_freudenthal_grid(6, 6));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < trials; ++t) {
    std::vector<double> img(36);
    for (auto& x : img) x = u(rng);
    const LossSpec spec{static_cast<double>(t % 3), static_cast<double>((t / 3) % 3), 1, t % 2};
    const std::vector<LossTerm> terms{{spec, 1.0}};
    const auto dir = t % 4 < 2 ? Direction::sublevel : Direction::superlevel;
    auto eval = [&](std::span<const double> x) { return evaluate_lower_star(grid, x, dir, terms); };
    const auto at = eval(img);
    const auto report = finite_difference_check(
        [&](std::span<const double> x) { return eval(x).value; }, at.gradient, img,
        {1e-4, 10, static_cast<std::uint64_t>(t)}, [&](std::span<const double> x) { return eval(x).signature; });
    s.cases += report.checked;
    if (report.max_rel_error > 1e-5) {
      s.fail("trial " + std::to_string(t) + ": relative error " + format_double(report.max_rel_error));
    }
  }
  return s;
}

Suite wasserstein_suite(int trials, std::mt19937_64& rng) {
  Suite s{"wasserstein vs brute force"};
  for (int t = 0; t < trials; ++t) {
    const auto a = oracle::random_diagram(rng), b = oracle::random_diagram(rng);
    for (double p : {1.0, 2.0}) {
      ++s.cases;
      const double fast = wasserstein(a, b, p);
      const double slow = oracle::brute_force_wasserstein(a, b, p);
      if (std::abs(fast - slow) > 1e-9) {
        s.fail("trial " + std::to_string(t) + ": " + format_double(fast) + " vs " + format_double(slow));
      }
    }
  }
  return s;
}

}  // namespace

bool run_selftest(int trials, std::uint64_t seed, std::ostream& out) {
  std::mt19937_64 rng(seed);
  bool ok = true;
  for (auto suite : {betti_suite, union_find_suite, gradient_suite, wasserstein_suite}) {
    const auto start = std::chrono::steady_clock::now();
    const Suite s = suite(trials, rng);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    out << (s.failures ? "FAIL " : "PASS ") << s.name << ": " << s.cases << " checks, " << s.failures
        << " failures (" << static_cast<int>(ms) << " ms)";
    if (s.failures) out << "; first: " << s.first_failure;
    out << "\n";
    ok = ok && s.failures == 0;
  }
  return ok;
}

}  // namespace topograd::cli
