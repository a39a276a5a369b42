#pragma once

#include "railnet/milp.hpp"
#include "railnet/solver_bb.hpp"

#include <stdexcept>
#include <vector>

namespace railnet {

// Raised when a 0/1 assignment does not describe one walk per routed train.
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Literal decode: expanded arcs are exactly the Expand columns set to 1.
// Throws DecodeError.
Solution decode_assignment(const Instance& instance, const ConstraintSystem& system, const std::vector<int>& x);

// Decodes the incumbent, drops zero-cost expansions that no window needs,
// and checks the recomputed objective against the solver's. Throws
// DecodeError on any mismatch and std::invalid_argument without incumbent.
Solution extract_solution(const Instance& instance, const ConstraintSystem& system, const SolveResult& result);

// Fills cost_breakdown and objective_value from expanded_arcs and routes.
void compute_costs(const Instance& instance, Solution& solution);

// Removes expansions of zero-cost arcs whose windows fit the base capacity.
void drop_idle_free_expansions(const Instance& instance, Solution& solution);

}  // namespace railnet
