#include "topograd/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace topograd {

Eigen::VectorXd three_values_beta(int p, const std::array<double, 3>& levels, std::uint64_t seed) {
  if (p < 1) throw std::invalid_argument("need at least one feature");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, 2);
  Eigen::VectorXd beta(p);
  for (int j = 0; j < p; ++j) beta[j] = levels[pick(rng)];
  return beta;
}

Eigen::VectorXd sawtooth_beta(int p) {
  if (p < 3) throw std::invalid_argument("a sawtooth needs at least three features");
  Eigen::VectorXd beta(p);
  for (int j = 0; j < p; ++j) {
    int tooth = 2;
    while (tooth > 0 && tooth * p / 3 > j) --tooth;
    const int begin = tooth * p / 3, end = (tooth + 1) * p / 3;
    const int width = std::max(1, end - begin - 1);
    beta[j] = static_cast<double>(j - begin) / width;
  }
  return beta;
}

Eigen::VectorXd boxcar_beta(int p) {
  if (p < 6) throw std::invalid_argument("boxcars need at least six features");
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  for (int box = 0; box < 3; ++box) {
    const int begin = box * p / 3, end = (box + 1) * p / 3;
    const int quarter = (end - begin) / 4;
    for (int j = begin + quarter; j < end - quarter; ++j) beta[j] = 1.0;
  }
  return beta;
}

LinearData linear_data(const Eigen::VectorXd& beta, int n, double sigma, std::mt19937_64& rng) {
  if (n < 1) throw std::invalid_argument("need at least one sample");
  std::normal_distribution<double> normal(0.0, 1.0);
  LinearData d;
  d.X.resize(n, beta.size());
  for (Eigen::Index i = 0; i < d.X.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.X.cols(); ++j) d.X(i, j) = normal(rng);
  }
  d.y = d.X * beta;
  for (Eigen::Index i = 0; i < d.y.size(); ++i) d.y[i] += sigma * normal(rng);
  return d;
}

Eigen::VectorXd annulus_image(int rows, int cols, double inner, double outer) {
  Eigen::VectorXd img(static_cast<Eigen::Index>(rows) * cols);
  const double cr = 0.5 * (rows - 1), cc = 0.5 * (cols - 1);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double rad = std::hypot(r - cr, c - cc);
      img[static_cast<Eigen::Index>(r) * cols + c] = (rad >= inner && rad <= outer) ? 1.0 : 0.0;
    }
  }
  return img;
}

ScalarField bump_image(int rows, int cols, double amplitude, double noise, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double cr = 0.5 * (rows - 1), cc = 0.5 * (cols - 1);
  const double width = 0.2 * std::min(rows, cols);
  std::vector<double> values(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double d2 = (r - cr) * (r - cr) + (c - cc) * (c - cc);
      values[static_cast<std::size_t>(r) * cols + c] =
          amplitude * std::exp(-d2 / (2.0 * width * width)) + noise * normal(rng);
    }
  }
  return ScalarField(rows, cols, std::move(values));
}

namespace {

struct Disk {
  double r, c, radius;
};

// Soft disk indicator: 1 inside, linear ramp over one pixel at the edge.
double coverage(const Disk& d, int r, int c) {
  const double dist = std::hypot(r - d.r, c - d.c);
  return std::clamp(d.radius + 0.5 - dist, 0.0, 1.0);
}

}  // namespace

ScalarField shape_image(ShapeClass shape, int size, double noise, std::mt19937_64& rng) {
  if (size < 12) throw std::invalid_argument("shape images need at least 12 pixels per side");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double s = size;
  auto jitter = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };
  std::vector<double> values(static_cast<std::size_t>(size) * size, 0.0);
  auto paint = [&](auto&& value_at) {
    for (int r = 0; r < size; ++r) {
      for (int c = 0; c < size; ++c) values[static_cast<std::size_t>(r) * size + c] = value_at(r, c);
    }
  };
  switch (shape) {
    case ShapeClass::disk: {
      const double radius = jitter(0.2, 0.32) * s;
      const Disk d{jitter(radius + 1, s - 2 - radius), jitter(radius + 1, s - 2 - radius), radius};
      paint([&](int r, int c) { return coverage(d, r, c); });
      break;
    }
    case ShapeClass::annulus: {
      const double outer = jitter(0.34, 0.42) * s;
      const double inner = outer * jitter(0.45, 0.55);
      const double cr = jitter(outer + 0.5, s - 1.5 - outer), cc = jitter(outer + 0.5, s - 1.5 - outer);
      const Disk big{cr, cc, outer}, hole{cr, cc, inner};
      paint([&](int r, int c) { return coverage(big, r, c) * (1.0 - coverage(hole, r, c)); });
      break;
    }
    case ShapeClass::two_disks: {
      const double r1 = jitter(0.1, 0.15) * s, r2 = jitter(0.1, 0.15) * s;
      // One disk in each half along a random axis, so they never touch.
      const bool vertical = u(rng) < 0.5;
      const double a = jitter(r1 + 1, 0.5 * s - 1 - r1), b = jitter(0.5 * s + 1 + r2, s - 2 - r2);
      const double o1 = jitter(r1 + 1, s - 2 - r1), o2 = jitter(r2 + 1, s - 2 - r2);
      const Disk d1 = vertical ? Disk{a, o1, r1} : Disk{o1, a, r1};
      const Disk d2 = vertical ? Disk{b, o2, r2} : Disk{o2, b, r2};
      paint([&](int r, int c) { return std::max(coverage(d1, r, c), coverage(d2, r, c)); });
      break;
    }
  }
  for (double& v : values) v = std::clamp(v + noise * normal(rng), 0.0, 1.0);
  return ScalarField(size, size, std::move(values));
}

ShapeDataset shape_dataset(int per_class, int size, double noise, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ShapeDataset out;
  for (int i = 0; i < per_class; ++i) {
    for (int k = 0; k < kShapeClasses; ++k) {
      out.images.push_back(shape_image(static_cast<ShapeClass>(k), size, noise, rng));
      out.labels.push_back(k);
    }
  }
  return out;
}

}  // namespace topograd
