#include "topograd/study.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "topograd/parallel.hpp"

namespace topograd {

namespace {

constexpr std::pair<BetaKind, std::string_view> kBetaNames[] = {
    {BetaKind::three_values, "three-values"},
    {BetaKind::sawtooth, "sawtooth"},
    {BetaKind::boxcar, "boxcar"},
    {BetaKind::circle_image, "noisy-circle"},
};

constexpr int kCircleSide = 16;

std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{seed, seed >> 32, a, b};
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

}  // namespace

std::string_view beta_kind_name(BetaKind kind) {
  for (const auto& [k, name] : kBetaNames) {
    if (k == kind) return name;
  }
  return "?";
}

std::optional<BetaKind> parse_beta_kind(std::string_view name) {
  for (const auto& [k, n] : kBetaNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

void RegressionStudy::validate() const {
  if (beta != BetaKind::circle_image && p < 6) throw std::invalid_argument("need p >= 6");
  if (sample_sizes.empty() || penalties.empty()) throw std::invalid_argument("nothing to run");
  for (int n : sample_sizes) {
    if (n < folds) throw std::invalid_argument("sample size below the fold count");
  }
  if (!(sigma >= 0.0) || runs < 1 || test_samples < 1 || folds < 2 || lambdas.empty()) {
    throw std::invalid_argument("bad study parameters");
  }
  for (auto penalty : penalties) {
    if (penalty == Penalty::image_top && beta != BetaKind::circle_image) {
      throw std::invalid_argument("image-top needs image weights (noisy-circle)");
    }
  }
}

Eigen::VectorXd study_beta(const RegressionStudy& study, int run) {
  switch (study.beta) {
    case BetaKind::three_values:
      return three_values_beta(study.p, {1.0, 2.0, 3.0}, mix(study.seed, 0, static_cast<std::uint64_t>(run)));
    case BetaKind::sawtooth:
      return sawtooth_beta(study.p);
    case BetaKind::boxcar:
      return boxcar_beta(study.p);
    case BetaKind::circle_image:
      return annulus_image(kCircleSide, kCircleSide, 3.0, 6.0);
  }
  throw std::invalid_argument("unknown weight kind");
}

std::vector<StudyRow> run_regression_study(const RegressionStudy& study) {
  study.validate();
  const int ns = static_cast<int>(study.sample_sizes.size());
  const int np = static_cast<int>(study.penalties.size());
  const WeightShape shape = study.beta == BetaKind::circle_image ? WeightShape{kCircleSide, kCircleSide}
                                                                 : WeightShape{};
  // mse[(run * ns + si) * np + pi]
  const std::size_t cells = static_cast<std::size_t>(study.runs) * ns * np;
  std::vector<double> mse(cells), beta_mse(cells), cv_mse(cells), lambda(cells);
  parallel_for(study.runs * ns, study.threads, [&](int task) {
    const int run = task / ns, si = task % ns;
    const Eigen::VectorXd beta = study_beta(study, run);
    std::mt19937_64 rng(mix(study.seed, 1 + static_cast<std::uint64_t>(si), static_cast<std::uint64_t>(run)));
    const auto train = linear_data(beta, study.sample_sizes[si], study.sigma, rng);
    const auto test = linear_data(beta, study.test_samples, study.sigma, rng);
    for (int pi = 0; pi < np; ++pi) {
      RegressionProblem problem;
      problem.X = train.X;
      problem.y = train.y;
      problem.beta_true = beta;
      problem.penalty = study.penalties[pi];
      problem.lambdas = study.lambdas;
      problem.folds = study.folds;
      problem.seed = static_cast<std::uint64_t>(run);
      problem.shape = shape;
      problem.solver = study.solver;
      const auto fit = regularized_regression(problem);
      const std::size_t cell = static_cast<std::size_t>(task) * np + pi;
      mse[cell] = prediction_mse(fit.beta_hat, test.X, test.y);
      beta_mse[cell] = fit.beta_mse;
      cv_mse[cell] = fit.cv_error.empty() ? std::numeric_limits<double>::quiet_NaN()
                                          : *std::min_element(fit.cv_error.begin(), fit.cv_error.end());
      lambda[cell] = fit.lambda;
    }
  });

  std::vector<StudyRow> rows;
  for (int si = 0; si < ns; ++si) {
    for (int pi = 0; pi < np; ++pi) {
      StudyRow row{study.sample_sizes[si], study.penalties[pi], study.runs};
      std::vector<double> m, lam;
      for (int run = 0; run < study.runs; ++run) {
        const std::size_t cell = (static_cast<std::size_t>(run) * ns + si) * np + pi;
        m.push_back(mse[cell]);
        lam.push_back(lambda[cell]);
        row.beta_mse_mean += beta_mse[cell] / study.runs;
        row.cv_mse_mean += cv_mse[cell] / study.runs;
      }
      for (double v : m) row.mse_mean += v / study.runs;
      double var = 0.0;
      for (double v : m) var += (v - row.mse_mean) * (v - row.mse_mean);
      row.mse_std = study.runs > 1 ? std::sqrt(var / (study.runs - 1)) : 0.0;
      std::sort(lam.begin(), lam.end());
      const std::size_t mid = lam.size() / 2;
      row.lambda_median = lam.size() % 2 ? lam[mid] : 0.5 * (lam[mid - 1] + lam[mid]);
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace topograd
