#include "topograd/backprop.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace topograd {

std::vector<double> diagram_to_simplex_grad(const PersistenceDiagram& diagram,
                                            const DiagramGradient& gradient,
                                            Index simplex_count) {
  std::vector<double> out(static_cast<std::size_t>(simplex_count), 0.0);
  if (gradient.d_birth.empty()) return out;
  if (static_cast<Index>(gradient.d_birth.size()) != diagram.size() ||
      static_cast<Index>(gradient.d_death.size()) != diagram.size()) {
    throw std::invalid_argument("diagram gradient does not match the diagram");
  }
  for (Index i = 0; i < diagram.size(); ++i) {
    const auto& pair = diagram.pair(i);
    out.at(pair.creator) += gradient.d_birth[i];
    const double dd = gradient.d_death[i];
    if (dd == 0.0) continue;
    if (!pair.essential()) {
      out.at(pair.destroyer) += dd;
    } else if (gradient.essential_capped) {
      out.at(diagram.terminal_simplex()) += dd;
    } else {
      throw std::invalid_argument("gradient on the death of an essential class");
    }
  }
  return out;
}

std::vector<double> simplex_to_vertex_grad(const Filtration& filtration,
                                           std::span<const double> simplex_grad) {
  if (filtration.kind() != FiltrationKind::lower_star) {
    throw std::invalid_argument("vertex gradients need a lower-star filtration");
  }
  std::vector<double> out(static_cast<std::size_t>(filtration.complex().vertex_count()), 0.0);
  for (Index s = 0; s < filtration.size(); ++s) {
    if (simplex_grad[s] != 0.0) out[filtration.controller(s).first] += simplex_grad[s];
  }
  return out;
}

PointGradient simplex_to_point_grad(const Filtration& filtration, const PointCloud& cloud,
                                    std::span<const double> simplex_grad) {
  if (filtration.kind() != FiltrationKind::flag) {
    throw std::invalid_argument("point gradients need a flag filtration");
  }
  PointGradient out;
  out.dim = cloud.dim();
  out.coords.assign(cloud.coords().size(), 0.0);
  for (Index s = 0; s < filtration.size(); ++s) {
    const double g = simplex_grad[s];
    if (g == 0.0) continue;
    const auto& ctrl = filtration.controller(s);
    if (!ctrl.is_edge()) continue;  // vertex entry values are constant
    const Index u = ctrl.first, v = ctrl.second;
    const double len = cloud.distance(u, v);
    if (len == 0.0) {
      ++out.degenerate_edges;
      continue;
    }
    for (int k = 0; k < cloud.dim(); ++k) {
      const double dir = (cloud(u, k) - cloud(v, k)) / len;
      out.coords[static_cast<std::size_t>(u) * cloud.dim() + k] += g * dir;
      out.coords[static_cast<std::size_t>(v) * cloud.dim() + k] -= g * dir;
    }
  }
  return out;
}

FiniteDifferenceReport finite_difference_check(const ScalarFunction& loss,
                                               std::span<const double> analytic_grad,
                                               std::span<const double> params,
                                               const FiniteDifferenceOptions& options,
                                               const SignatureFunction& signature) {
  if (analytic_grad.size() != params.size()) {
    throw std::invalid_argument("gradient and parameter sizes differ");
  }
  std::vector<std::size_t> coords(params.size());
  std::iota(coords.begin(), coords.end(), std::size_t{0});
  if (options.samples >= 0 && static_cast<std::size_t>(options.samples) < coords.size()) {
    std::mt19937_64 rng(options.seed);
    std::shuffle(coords.begin(), coords.end(), rng);
    coords.resize(static_cast<std::size_t>(options.samples));
  }

  FiniteDifferenceReport report;
  std::vector<double> x(params.begin(), params.end());
  const std::uint64_t base_sig = signature ? signature(x) : 0;
  const bool five = options.stencil == Stencil::five_point;
  for (std::size_t c : coords) {
    const double saved = x[c];
    bool stable = true;
    auto at = [&](double offset) {
      x[c] = saved + offset;
      const double v = loss(x);
      if (signature && signature(x) != base_sig) stable = false;
      return v;
    };
    const double h = options.h;
    double numeric = 0.0;
    if (five) {
      const double p1 = at(h), m1 = at(-h), p2 = at(2.0 * h), m2 = at(-2.0 * h);
      numeric = (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * h);
    } else {
      numeric = (at(h) - at(-h)) / (2.0 * h);
    }
    x[c] = saved;
    if (!stable) {
      ++report.unstable;
      continue;
    }
    const double a = analytic_grad[c];
    const double denom = std::max({std::abs(a), std::abs(numeric), options.scale_floor});
    report.max_rel_error = std::max(report.max_rel_error, std::abs(a - numeric) / denom);
    ++report.checked;
  }
  return report;
}

std::uint64_t pairing_signature(const PersistenceDiagram& diagram) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t x) {
    h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  for (const auto& pair : diagram.pairs()) {
    mix(static_cast<std::uint64_t>(pair.dim));
    mix(static_cast<std::uint64_t>(static_cast<std::uint32_t>(pair.creator)));
    mix(static_cast<std::uint64_t>(static_cast<std::uint32_t>(pair.destroyer)));
  }
  return h;
}

}  // namespace topograd
