#pragma once

#include <stdexcept>
#include <string>

namespace lshape {

/// Input violates a documented precondition (bad parameters, out-of-range t, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// b = 0: the horizontal foliation has a single cylinder, so there is no
/// two-annulus structure to report.
class DegenerateDecomposition : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A twist map whose Jacobian data leave the quasiconformal regime.
class DegenerateMap : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace lshape
