#pragma once

#include "railnet/milp.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace railnet {

class LpParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// CPLEX-style LP text: Minimize / Subject To / Binaries / End. Coefficients
// are written as exact decimals. A row (or the objective) whose numbers have
// no finite decimal expansion is multiplied through by the lcm L of its
// denominators and preceded by a "\ scale L" comment, which parse_lp undoes.
std::string export_lp(const ConstraintSystem& system);

// Reads the subset of the format that export_lp writes. Terms with zero
// coefficients are dropped. Row families are recovered from name prefixes.
// Every variable with a nonzero coefficient must be listed under Binaries.
ConstraintSystem parse_lp(std::string_view text);

// Same variables in the same order, same objective, and the same multiset of
// named rows, ignoring term order and zero coefficients.
bool systems_equivalent(const ConstraintSystem& a, const ConstraintSystem& b);

RowFamily family_from_row_name(std::string_view name);

}  // namespace railnet
