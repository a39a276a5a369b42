#pragma once

#include "railnet/milp.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace railnet {

// A ConstraintSystem with every row and the objective multiplied to integer
// coefficients. Magnitudes are capped at kMaxIntegerCoefficient so that
// activities and certificate arithmetic cannot overflow.
struct IntegerRow {
  std::vector<std::pair<int, std::int64_t>> terms;
  Sense sense = Sense::LessEqual;
  std::int64_t rhs = 0;
};

struct IntegerModel {
  int num_vars = 0;
  std::vector<IntegerRow> rows;
  // Per variable: (row, coefficient).
  std::vector<std::vector<std::pair<int, std::int64_t>>> columns;
  // Objective of the system equals offset + (cost . x) / cost_scale.
  std::vector<std::int64_t> cost;
  BigInt cost_scale = 1;
  Rational offset;

  Rational objective_of(std::int64_t scaled) const { return offset + Rational(BigInt(scaled), cost_scale); }
  std::int64_t scaled_cost(const std::vector<int>& x) const;
  bool feasible(const std::vector<int>& x) const;
};

inline constexpr std::int64_t kMaxIntegerCoefficient = std::int64_t{1} << 40;

// Throws std::overflow_error when scaled coefficients exceed the cap.
IntegerModel to_integer_model(const ConstraintSystem& system);

}  // namespace railnet
