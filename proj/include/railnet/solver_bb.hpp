#pragma once

#include "railnet/milp.hpp"

#include <optional>
#include <vector>

namespace railnet {

struct SolveLimits {
  std::optional<double> time_limit;  // seconds
  std::optional<long> node_limit;
  Rational absolute_gap = 0;
  // Accepted for interface compatibility; the search always runs on one thread.
  int threads = 1;
  // When false, only the bound from fixed variables is used (no relaxation).
  bool lp_bound = true;
};

enum class SolveStatus { Optimal, Infeasible, LimitReached };

const char* status_name(SolveStatus status);

struct SolveStats {
  long nodes = 0;
  long lp_iterations = 0;
  long lp_failures = 0;
  double wall_seconds = 0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::LimitReached;
  std::optional<std::vector<int>> incumbent;  // 0/1 per variable
  std::optional<Rational> objective;
  std::optional<Rational> bound;  // absent means +infinity
  SolveStats stats;
};

// Exact 0/1 branch-and-bound. Throws std::overflow_error when the system's
// coefficients do not fit the integer representation.
SolveResult solve(const ConstraintSystem& system, const SolveLimits& limits = {});

}  // namespace railnet
