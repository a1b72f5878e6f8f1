#include "topograd/diagram.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "topograd/error.hpp"

namespace topograd {

void LossSpec::validate() const {
  if (!std::isfinite(p) || p < 0.0) throw std::invalid_argument("loss exponent p must be finite and >= 0");
  if (!std::isfinite(q) || q < 0.0) throw std::invalid_argument("loss exponent q must be finite and >= 0");
  if (i0 < 1) throw std::invalid_argument("loss start index i0 must be >= 1");
  if (k < 0) throw std::invalid_argument("homology dimension k must be >= 0");
}

DiagramGradient DiagramGradient::zeros(Index pair_count) {
  DiagramGradient g;
  g.d_birth.assign(static_cast<std::size_t>(pair_count), 0.0);
  g.d_death.assign(static_cast<std::size_t>(pair_count), 0.0);
  return g;
}

DiagramGradient& DiagramGradient::operator+=(const DiagramGradient& other) {
  if (d_birth.empty()) {
    *this = other;
    return *this;
  }
  if (other.d_birth.size() != d_birth.size()) {
    throw std::invalid_argument("adding gradients of different diagrams");
  }
  for (std::size_t i = 0; i < d_birth.size(); ++i) {
    d_birth[i] += other.d_birth[i];
    d_death[i] += other.d_death[i];
  }
  essential_capped = essential_capped || other.essential_capped;
  return *this;
}

DiagramGradient& DiagramGradient::operator*=(double scale) {
  for (double& g : d_birth) g *= scale;
  for (double& g : d_death) g *= scale;
  return *this;
}

namespace {

bool is_integer(double x) { return std::floor(x) == x; }

// x^e with the conventions 0^0 = 1 and x^e = 0 for e > 0, x = 0.
double power(double x, double e) {
  if (e == 0.0) return 1.0;
  if (x < 0.0 && !is_integer(e)) {
    throw DomainError("fractional exponent " + std::to_string(e) + " of negative midpoint " +
                      std::to_string(x));
  }
  return std::pow(x, e);
}

}  // namespace

LossValue polynomial_loss(const PersistenceDiagram& diagram, const LossSpec& spec,
                          const LossOptions& options) {
  spec.validate();
  LossValue out;
  out.gradient = DiagramGradient::zeros(diagram.size());
  if (spec.k > diagram.max_dimension()) return out;

  const auto ranked = diagram.ranked(spec.k, options.include_zero_persistence);
  const double p = spec.p, q = spec.q;
  for (std::size_t rank = static_cast<std::size_t>(spec.i0 - 1); rank < ranked.size(); ++rank) {
    const Index idx = ranked[rank];
    const auto& pair = diagram.pair(idx);
    double death = pair.death;
    if (pair.essential()) {
      if (options.essential == EssentialMode::skip) continue;
      death = diagram.terminal_value();
      out.gradient.essential_capped = true;
    }
    const double b = pair.birth;
    const double diff = death - b;
    const double life = std::abs(diff);
    const double sgn = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
    const double mid = 0.5 * (death + b);

    const double life_p = power(life, p);
    const double mid_q = power(mid, q);
    out.value += life_p * mid_q;

    // d/dd and d/db of |d - b|^p m^q, m = (d + b) / 2.
    const double from_life = (p == 0.0 || sgn == 0.0) ? 0.0 : p * power(life, p - 1.0) * sgn * mid_q;
    const double from_mid = (q == 0.0 || life_p == 0.0) ? 0.0 : life_p * q * power(mid, q - 1.0) * 0.5;
    out.gradient.d_death[idx] += from_life + from_mid;
    out.gradient.d_birth[idx] += -from_life + from_mid;
  }
  return out;
}

}  // namespace topograd
