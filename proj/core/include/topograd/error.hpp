#pragma once

#include <stdexcept>
#include <string>

namespace topograd {

/// Raised for geometric inputs a construction cannot handle: too few points,
/// all points collinear, coincident points.
class DegenerateInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mathematical operation evaluated outside its domain (e.g. a fractional
/// power of a negative midpoint).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Broken internal invariant. Not reachable through the public constructors;
/// seeing one means a bug.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace topograd
