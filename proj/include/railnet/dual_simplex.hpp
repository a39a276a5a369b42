#pragma once

#include "railnet/milp.hpp"

#include <vector>

namespace railnet {

// min c.x  s.t.  A x (sense) b,  lb <= x <= ub  with finite structural bounds.
// Dense row-major A. Floating point; callers certify anything they rely on.
struct LpProblem {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;  // rows * cols
  std::vector<double> b;
  std::vector<Sense> sense;
  std::vector<double> c;
};

// Dense tableau of the basis inverse applied to [A | I] plus bookkeeping.
// Copyable, so a child node can resume from its parent's final basis.
struct LpState {
  int rows = 0;
  int width = 0;  // structural columns + one slack per row
  std::vector<double> tableau;
  std::vector<double> beta;
  std::vector<double> reduced;
  std::vector<int> basis;     // column basic in each row
  std::vector<int> position;  // row of a basic column, -1 if nonbasic
  std::vector<char> at_upper;
  int pivots_since_refactor = 0;

  std::size_t entries() const { return tableau.size(); }
};

enum class LpStatus { Optimal, Infeasible, IterationLimit };

struct LpOutcome {
  LpStatus status = LpStatus::IterationLimit;
  int iterations = 0;
  double objective = 0;
  std::vector<double> x;     // structural values
  std::vector<double> duals;  // one per row
  std::vector<double> ray;    // Farkas direction on rows when infeasible
};

// Slack basis; dual feasible because every structural column is boxed.
LpState initial_lp_state(const LpProblem& lp);

// Bounded dual simplex with Harris ratio test and periodic refactorization.
LpOutcome solve_lp(const LpProblem& lp, LpState& state, const std::vector<double>& lb,
                   const std::vector<double>& ub, int max_iterations);

}  // namespace railnet
