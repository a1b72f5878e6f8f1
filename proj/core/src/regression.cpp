#include "topograd/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "topograd/objective.hpp"
#include "topograd/parallel.hpp"

namespace topograd {

namespace {

constexpr std::pair<Penalty, std::string_view> kNames[] = {
    {Penalty::ols, "ols"},        {Penalty::l1, "l1"},
    {Penalty::l2, "l2"},          {Penalty::tv, "tv"},
    {Penalty::tv2, "tv2"},        {Penalty::top1, "top1"},
    {Penalty::top2, "top2"},      {Penalty::top1_level, "top1-level"},
    {Penalty::top2_level, "top2-level"}, {Penalty::image_top, "image-top"},
};

std::shared_ptr<const SimplicialComplex> cached_complex(int rows, int cols) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const SimplicialComplex>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{rows, cols}];
  if (!slot) slot = std::make_shared<const SimplicialComplex>(build_freudenthal_grid(rows, cols));
  return slot;
}

// E(1, 0, i0; PD_0) of the weights as points on a line: the finite PD_0
// lifetimes are the gaps between consecutive sorted weights.
PenaltyValue gap_penalty(const Eigen::VectorXd& beta, int i0) {
  const Eigen::Index p = beta.size();
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(p));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return beta[a] < beta[b]; });
  std::vector<Eigen::Index> gaps;
  for (Eigen::Index j = 0; j + 1 < p; ++j) {
    if (beta[idx[j + 1]] > beta[idx[j]]) gaps.push_back(j);
  }
  std::stable_sort(gaps.begin(), gaps.end(), [&](auto a, auto b) {
    return beta[idx[a + 1]] - beta[idx[a]] > beta[idx[b + 1]] - beta[idx[b]];
  });
  PenaltyValue out;
  out.gradient = Eigen::VectorXd::Zero(p);
  // Rank 1 is the essential class; finite gaps start at rank 2.
  for (std::size_t r = static_cast<std::size_t>(std::max(0, i0 - 2)); r < gaps.size(); ++r) {
    const Eigen::Index j = gaps[r];
    out.value += beta[idx[j + 1]] - beta[idx[j]];
    out.gradient[idx[j + 1]] += 1.0;
    out.gradient[idx[j]] -= 1.0;
  }
  return out;
}

// E(1, 0, i0; PD_0) of the superlevel filtration of the weights on the path
// graph, by union-find over vertices in decreasing order (elder rule).
PenaltyValue level_penalty(const Eigen::VectorXd& beta, int i0) {
  const Eigen::Index p = beta.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return beta[a] > beta[b]; });
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(p), -1);  // -1: not yet entered
  std::vector<Eigen::Index> oldest(static_cast<std::size_t>(p));
  auto find = [&](Eigen::Index v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  struct Pair {
    Eigen::Index creator, destroyer;
    double life;
  };
  std::vector<Pair> pairs;
  std::vector<Eigen::Index> position(static_cast<std::size_t>(p));
  for (Eigen::Index i = 0; i < p; ++i) position[order[i]] = i;
  for (Eigen::Index v : order) {
    parent[v] = v;
    oldest[v] = v;
    for (Eigen::Index u : {v - 1, v + 1}) {
      if (u < 0 || u >= p || parent[u] < 0) continue;
      Eigen::Index a = find(u), b = find(v);
      if (a == b) continue;
      if (position[oldest[a]] > position[oldest[b]]) std::swap(a, b);
      // a holds the elder component; b's oldest vertex dies at v.
      const Eigen::Index young = oldest[b];
      if (beta[young] > beta[v]) pairs.push_back({young, v, beta[young] - beta[v]});
      parent[b] = a;
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(), [&](const Pair& x, const Pair& y) {
    if (x.life != y.life) return x.life > y.life;
    return position[x.creator] < position[y.creator];
  });
  PenaltyValue out;
  out.gradient = Eigen::VectorXd::Zero(p);
  for (std::size_t r = static_cast<std::size_t>(std::max(0, i0 - 2)); r < pairs.size(); ++r) {
    out.value += pairs[r].life;
    out.gradient[pairs[r].creator] += 1.0;
    out.gradient[pairs[r].destroyer] -= 1.0;
  }
  return out;
}

PenaltyValue diagram_penalty(const Eigen::VectorXd& beta, int rows, int cols,
                             const std::vector<LossTerm>& terms) {
  const auto complex = cached_complex(rows, cols);
  const auto e = evaluate_lower_star(complex, std::span<const double>(beta.data(), beta.size()),
                                     Direction::superlevel, terms);
  PenaltyValue out;
  out.value = e.value;
  out.gradient = Eigen::Map<const Eigen::VectorXd>(e.gradient.data(), beta.size());
  return out;
}

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

double max_eigenvalue_gram(const Eigen::MatrixXd& X) {
  const Eigen::MatrixXd gram = X.rows() <= X.cols() ? Eigen::MatrixXd(X * X.transpose())
                                                    : Eigen::MatrixXd(X.transpose() * X);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

}  // namespace

std::string_view penalty_name(Penalty penalty) {
  for (const auto& [p, name] : kNames) {
    if (p == penalty) return name;
  }
  return "unknown";
}

std::optional<Penalty> parse_penalty(std::string_view name) {
  for (const auto& [p, n] : kNames) {
    if (n == name) return p;
  }
  return std::nullopt;
}

PenaltyValue evaluate_penalty(Penalty penalty, const Eigen::VectorXd& beta, WeightShape shape) {
  const Eigen::Index p = beta.size();
  PenaltyValue out;
  out.gradient = Eigen::VectorXd::Zero(p);
  switch (penalty) {
    case Penalty::ols:
      break;
    case Penalty::l1:
      out.value = beta.lpNorm<1>();
      out.gradient = beta.unaryExpr(&sign);
      break;
    case Penalty::l2:
      out.value = beta.norm();
      if (out.value > 0.0) out.gradient = beta / out.value;
      break;
    case Penalty::tv:
      for (Eigen::Index j = 0; j + 1 < p; ++j) {
        const double d = beta[j + 1] - beta[j];
        out.value += std::abs(d);
        out.gradient[j + 1] += sign(d);
        out.gradient[j] -= sign(d);
      }
      break;
    case Penalty::tv2: {
      if (p < 2) break;
      const Eigen::VectorXd d = beta.tail(p - 1) - beta.head(p - 1);
      out.value = d.norm();
      if (out.value > 0.0) {
        out.gradient.tail(p - 1) += d / out.value;
        out.gradient.head(p - 1) -= d / out.value;
      }
      break;
    }
    case Penalty::top1:
      return gap_penalty(beta, 2);
    case Penalty::top2:
      return gap_penalty(beta, 4);
    case Penalty::top1_level:
      return level_penalty(beta, 2);
    case Penalty::top2_level:
      return level_penalty(beta, 4);
    case Penalty::image_top:
      if (static_cast<Eigen::Index>(shape.rows) * shape.cols != p) {
        throw std::invalid_argument("image penalty needs rows * cols = " + std::to_string(p));
      }
      return diagram_penalty(beta, shape.rows, shape.cols,
                             {{{1.0, 0.0, 2, 0}, 1.0}, {{1.0, 0.0, 2, 1}, 1.0}});
  }
  return out;
}

Eigen::VectorXd fit_penalized(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, Penalty penalty,
                              double lambda, const SolverOptions& options, WeightShape shape) {
  if (X.rows() != y.size()) throw std::invalid_argument("X and y have different numbers of rows");
  if (X.rows() == 0 || X.cols() == 0) throw std::invalid_argument("empty regression problem");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be finite and >= 0");
  if (penalty == Penalty::ols) return X.completeOrthogonalDecomposition().solve(y);

  const double n = static_cast<double>(X.rows());
  const double lipschitz = 2.0 / n * max_eigenvalue_gram(X);
  if (!(lipschitz > 0.0)) throw std::invalid_argument("design matrix is zero");
  const double eta = 1.0 / lipschitz;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(X.cols());
  Eigen::VectorXd residual(X.rows());
  for (int t = 0; t < options.iterations; ++t) {
    residual.noalias() = X * beta - y;
    Eigen::VectorXd grad = (2.0 / n) * (X.transpose() * residual);
    if (lambda > 0.0) grad += lambda * evaluate_penalty(penalty, beta, shape).gradient;
    beta -= eta * grad;
  }
  return beta;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi >= lo) || n < 1) throw std::invalid_argument("bad logarithmic grid");
  std::vector<double> out(static_cast<std::size_t>(n));
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) out[i] = n == 1 ? lo : std::exp(a + (b - a) * i / (n - 1));
  out.front() = lo;
  if (n > 1) out.back() = hi;
  return out;
}

void RegressionProblem::validate() const {
  if (X.rows() != y.size()) throw std::invalid_argument("X and y have different numbers of rows");
  if (beta_true.size() != 0 && beta_true.size() != X.cols()) {
    throw std::invalid_argument("true weights do not match the number of features");
  }
  if (lambdas.empty()) throw std::invalid_argument("lambda grid is empty");
  for (double l : lambdas) {
    if (!(l > 0.0) || !std::isfinite(l)) throw std::invalid_argument("lambda grid must be positive");
  }
  if (penalty != Penalty::ols && (folds < 2 || folds > X.rows())) {
    throw std::invalid_argument("need 2 <= folds <= number of samples");
  }
}

double prediction_mse(const Eigen::VectorXd& beta, const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  return (X * beta - y).squaredNorm() / static_cast<double>(y.size());
}

RegressionResult regularized_regression(const RegressionProblem& problem) {
  problem.validate();
  RegressionResult out;
  auto finish = [&] {
    out.beta_mse = problem.beta_true.size() == 0
                       ? std::numeric_limits<double>::quiet_NaN()
                       : (out.beta_hat - problem.beta_true).squaredNorm() /
                             static_cast<double>(problem.beta_true.size());
    return out;
  };
  if (problem.penalty == Penalty::ols) {
    out.beta_hat = fit_penalized(problem.X, problem.y, Penalty::ols, 0.0);
    return finish();
  }

  out.lambdas = problem.lambdas;
  const int n = static_cast<int>(problem.X.rows());
  const int nl = static_cast<int>(problem.lambdas.size());
  const int k = problem.folds;
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(problem.seed);
  std::shuffle(perm.begin(), perm.end(), rng);

  // Fold f holds positions [f n / k, (f + 1) n / k) of the permutation.
  std::vector<double> fold_error(static_cast<std::size_t>(nl) * k, 0.0);
  parallel_for(nl * k, problem.threads, [&](int task) {
    const int li = task / k, f = task % k;
    const int lo = f * n / k, hi = (f + 1) * n / k;
    Eigen::MatrixXd Xtr(n - (hi - lo), problem.X.cols()), Xva(hi - lo, problem.X.cols());
    Eigen::VectorXd ytr(Xtr.rows()), yva(Xva.rows());
    for (int i = 0, a = 0, b = 0; i < n; ++i) {
      const int row = perm[i];
      if (i >= lo && i < hi) {
        Xva.row(b) = problem.X.row(row);
        yva[b++] = problem.y[row];
      } else {
        Xtr.row(a) = problem.X.row(row);
        ytr[a++] = problem.y[row];
      }
    }
    const auto beta = fit_penalized(Xtr, ytr, problem.penalty, problem.lambdas[li], problem.solver,
                                    problem.shape);
    fold_error[task] = prediction_mse(beta, Xva, yva);
  });
  out.cv_error.assign(static_cast<std::size_t>(nl), 0.0);
  for (int li = 0; li < nl; ++li) {
    for (int f = 0; f < k; ++f) out.cv_error[li] += fold_error[static_cast<std::size_t>(li) * k + f] / k;
  }
  int best = 0;
  for (int li = 1; li < nl; ++li) {
    if (out.cv_error[li] <= out.cv_error[best]) best = li;
  }
  out.lambda = problem.lambdas[best];
  if (problem.keep_path) {
    out.path.resize(static_cast<std::size_t>(nl));
    parallel_for(nl, problem.threads, [&](int li) {
      out.path[li] = fit_penalized(problem.X, problem.y, problem.penalty, problem.lambdas[li],
                                   problem.solver, problem.shape);
    });
    out.beta_hat = out.path[best];
  } else {
    out.beta_hat = fit_penalized(problem.X, problem.y, problem.penalty, out.lambda, problem.solver,
                                 problem.shape);
  }
  return finish();
}

}  // namespace topograd
