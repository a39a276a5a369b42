#pragma once

#include "railnet/model.hpp"

#include <string>
#include <vector>

namespace railnet {

// Declaration order is the report order.
enum class ViolationFamily { Capacity, Departure, Arrival, Headway, Flow, Connection, Via, Objective, Structure };

const char* violation_family_name(ViolationFamily family);

struct Violation {
  ViolationFamily family = ViolationFamily::Structure;
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Semantic re-check of a solution, independent of the constraint system.
// Sorted by family, then detail. Empty means the timetable is operable and
// the stated objective is exact.
std::vector<Violation> verify(const Instance& instance, const Solution& solution);

// "family<TAB>detail"
std::string format_violation(const Violation& v);

}  // namespace railnet
