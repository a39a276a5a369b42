#pragma once

#include "railnet/model.hpp"

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace railnet {

enum class VariableKind { Expand, Route, Dwell, Generic };

// A binary column. For Expand `arc` is set; for Route `train`, `arc` and
// `time` (departure); for Dwell `train`, `node` and `time` (start of the
// dwell step). Generic columns come from parsed LP files.
struct Variable {
  std::string name;
  VariableKind kind = VariableKind::Generic;
  int arc = -1;
  int train = -1;
  int node = -1;
  TimeStep time = -1;
};

enum class Sense { LessEqual, Equal, GreaterEqual };

struct Term {
  int var = 0;
  Rational coef;

  friend bool operator==(const Term&, const Term&) = default;
};

enum class RowFamily { Capacity, Departure, Arrival, Headway, Flow, Connection, Via, Other };

const char* family_name(RowFamily family);

struct RowTag {
  RowFamily family = RowFamily::Other;
  std::string name;
  int arc = -1;
  int train = -1;
  int train2 = -1;
  int node = -1;
  TimeStep time = -1;
  TimeStep time2 = -1;
  int scenario = -1;
};

struct LinearRow {
  std::vector<Term> terms;
  Sense sense = Sense::LessEqual;
  Rational rhs;
  RowTag tag;
};

struct ConstraintSystem {
  std::vector<Variable> variables;
  std::vector<LinearRow> rows;
  // Minimized: objective_offset + sum of terms.
  std::vector<Term> objective;
  Rational objective_offset;

  // Name lookup, maintained by add_variable.
  std::unordered_map<std::string, int> by_name;

  // Throws std::invalid_argument on a duplicate name.
  int add_variable(Variable v);
  std::optional<int> find_variable(const std::string& name) const;
};

// Evaluates a row or the objective on a 0/1 assignment.
Rational row_activity(const LinearRow& row, const std::vector<int>& x);
bool row_satisfied(const LinearRow& row, const std::vector<int>& x);
Rational objective_value(const ConstraintSystem& system, const std::vector<int>& x);
bool assignment_feasible(const ConstraintSystem& system, const std::vector<int>& x);

// The linearized minimum-headway row for x1 departing at t1 and x2 at t2,
// or nothing when the separation already covers the headway.
std::optional<LinearRow> headway_row(int M, TimeStep t1, TimeStep t2, int x1, int x2);

// Throws std::invalid_argument on invalid instances, optional trains in
// connections or VIA requirements, and arcs with multiplicity above 1.
ConstraintSystem build(const Instance& instance);

std::map<RowFamily, int> count_rows(const ConstraintSystem& system);

}  // namespace railnet
