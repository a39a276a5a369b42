#include "railnet/integer_model.hpp"

#include <map>
#include <stdexcept>

namespace railnet {

namespace {

std::int64_t checked(const Rational& value, const char* what) {
  if (boost::multiprecision::denominator(value) != 1) throw std::logic_error("scaling left a fraction");
  const BigInt& n = boost::multiprecision::numerator(value);
  if (n > kMaxIntegerCoefficient || n < -kMaxIntegerCoefficient) {
    throw std::overflow_error(std::string(what) + " too large for the built-in solver after scaling");
  }
  return n.convert_to<std::int64_t>();
}

BigInt denominators_lcm(const std::vector<Rational>& values) {
  BigInt l = 1;
  for (const auto& v : values) {
    BigInt den = boost::multiprecision::denominator(v);
    l = l / boost::multiprecision::gcd(l, den) * den;
  }
  return l;
}

}  // namespace

std::int64_t IntegerModel::scaled_cost(const std::vector<int>& x) const {
  std::int64_t sum = 0;
  for (int j = 0; j < num_vars; ++j) {
    if (x[static_cast<std::size_t>(j)]) sum += cost[static_cast<std::size_t>(j)];
  }
  return sum;
}

bool IntegerModel::feasible(const std::vector<int>& x) const {
  for (const auto& row : rows) {
    std::int64_t lhs = 0;
    for (const auto& [j, a] : row.terms) {
      if (x[static_cast<std::size_t>(j)]) lhs += a;
    }
    switch (row.sense) {
      case Sense::LessEqual:
        if (lhs > row.rhs) return false;
        break;
      case Sense::GreaterEqual:
        if (lhs < row.rhs) return false;
        break;
      case Sense::Equal:
        if (lhs != row.rhs) return false;
        break;
    }
  }
  return true;
}

IntegerModel to_integer_model(const ConstraintSystem& system) {
  IntegerModel m;
  m.num_vars = static_cast<int>(system.variables.size());
  m.columns.resize(system.variables.size());
  m.cost.assign(system.variables.size(), 0);

  for (const auto& row : system.rows) {
    // Merge duplicate variables defensively; builders never emit them.
    std::map<int, Rational> merged;
    for (const auto& t : row.terms) merged[t.var] += t.coef;
    std::vector<Rational> values;
    for (const auto& [j, c] : merged) values.push_back(c);
    values.push_back(row.rhs);
    BigInt scale = denominators_lcm(values);

    IntegerRow out;
    out.sense = row.sense;
    out.rhs = checked(row.rhs * scale, "row right-hand side");
    std::int64_t total = 0;
    for (const auto& [j, c] : merged) {
      if (c == 0) continue;
      std::int64_t a = checked(c * scale, "row coefficient");
      total += a < 0 ? -a : a;
      if (total > kMaxIntegerCoefficient) throw std::overflow_error("row activity range too large");
      out.terms.emplace_back(j, a);
    }
    int r = static_cast<int>(m.rows.size());
    for (const auto& [j, a] : out.terms) m.columns[static_cast<std::size_t>(j)].emplace_back(r, a);
    m.rows.push_back(std::move(out));
  }

  std::vector<Rational> costs(system.variables.size());
  for (const auto& t : system.objective) costs[static_cast<std::size_t>(t.var)] += t.coef;
  m.cost_scale = denominators_lcm(costs);
  std::int64_t total = 0;
  for (std::size_t j = 0; j < costs.size(); ++j) {
    m.cost[j] = checked(costs[j] * m.cost_scale, "objective coefficient");
    total += m.cost[j] < 0 ? -m.cost[j] : m.cost[j];
    if (total > kMaxIntegerCoefficient) throw std::overflow_error("objective range too large");
  }
  m.offset = system.objective_offset;
  return m;
}

}  // namespace railnet
