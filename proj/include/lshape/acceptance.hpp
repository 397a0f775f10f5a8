#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lshape/sweep.hpp"

namespace lshape {

struct CriterionResult {
  /// 0 is the quadrature self-check; 1..11 are the acceptance criteria.
  int id = 0;
  std::string name;
  bool pass = false;
  std::string measured;
};

struct AcceptanceOptions {
  RunConfig config;
  unsigned jobs = 1;
  std::uint64_t seed = 20240611u;
};

/// Runs the quadrature self-check and criteria 1 to 11 in order.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

/// "[PASS] 5 r(t) asymptotics: ..." style line.
std::string format_result(const CriterionResult& result);

/// Rectangle-map prediction: the lambda with K(k')/K(k) = a, k^2 = (1 + lambda)/2.
double rectangle_lambda_prediction(double a);

}  // namespace lshape
