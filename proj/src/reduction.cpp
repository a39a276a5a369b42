#include "railnet/reduction.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

namespace railnet {

void validate_x3c(const X3cInstance& x3c) {
  if (x3c.ground_set.size() % 3 != 0) {
    throw std::invalid_argument("ground set size " + std::to_string(x3c.ground_set.size()) +
                                " is not a multiple of 3");
  }
  std::set<std::string> elements;
  for (const auto& e : x3c.ground_set) {
    if (!is_valid_identifier(e)) throw std::invalid_argument("element '" + e + "' is not a valid identifier");
    if (!elements.insert(e).second) throw std::invalid_argument("element " + e + " appears twice");
  }
  for (std::size_t i = 0; i < x3c.subsets.size(); ++i) {
    const auto& c = x3c.subsets[i];
    for (const auto& e : c) {
      if (!elements.count(e)) {
        throw std::invalid_argument("subset " + std::to_string(i + 1) + " holds " + e + ", not in the ground set");
      }
    }
    if (c[0] == c[1] || c[0] == c[2] || c[1] == c[2]) {
      throw std::invalid_argument("subset " + std::to_string(i + 1) + " repeats an element");
    }
  }
}

ReducedInstance x3c_to_instance(const X3cInstance& x3c, bool unit_capacity) {
  validate_x3c(x3c);
  const int q = static_cast<int>(x3c.ground_set.size() / 3);
  Instance inst;
  inst.horizon = 3;
  inst.capacity_window = 3;
  inst.allow_dwell = false;
  auto& net = inst.network;
  net.nodes.push_back({"s", std::nullopt});
  net.nodes.push_back({"t", std::nullopt});
  for (std::size_t i = 0; i < x3c.subsets.size(); ++i) net.nodes.push_back({"vp_" + std::to_string(i + 1), std::nullopt});
  for (const auto& e : x3c.ground_set) net.nodes.push_back({"v_" + e, std::nullopt});

  auto unit = [&](std::string from, std::string to) {
    Arc a;
    a.from = std::move(from);
    a.to = std::move(to);
    a.capacity = unit_capacity ? 1 : 0;
    a.expandable_capacity = unit_capacity ? 0 : 1;
    a.expansion_cost = 0;
    net.arcs.push_back(std::move(a));
  };
  for (std::size_t i = 0; i < x3c.subsets.size(); ++i) {
    Arc a;
    a.from = "s";
    a.to = "vp_" + std::to_string(i + 1);
    a.capacity = 0;
    a.expandable_capacity = 3;
    a.expansion_cost = 3;
    net.arcs.push_back(std::move(a));
  }
  for (std::size_t i = 0; i < x3c.subsets.size(); ++i) {
    for (const auto& e : x3c.subsets[i]) unit("vp_" + std::to_string(i + 1), "v_" + e);
  }
  for (const auto& e : x3c.ground_set) unit("v_" + e, "t");

  for (int r = 1; r <= 3 * q; ++r) {
    TrainRequest v;
    v.id = "r" + std::to_string(r);
    v.origin = "s";
    v.destination = "t";
    v.earliest_departure = 0;
    v.latest_arrival = 3;
    inst.trains.push_back(std::move(v));
  }
  return {std::move(inst), Rational(3 * q)};
}

namespace {

bool cover(const std::vector<unsigned>& masks, unsigned covered, unsigned full) {
  if (covered == full) return true;
  unsigned first = 0;
  while (covered & (1u << first)) ++first;
  for (unsigned m : masks) {
    if ((m & (1u << first)) && !(m & covered) && cover(masks, covered | m, full)) return true;
  }
  return false;
}

}  // namespace

bool x3c_brute_force(const X3cInstance& x3c) {
  validate_x3c(x3c);
  if (x3c.subsets.size() > kX3cBruteForceLimit) {
    throw std::invalid_argument("brute force limited to " + std::to_string(kX3cBruteForceLimit) + " subsets");
  }
  if (x3c.ground_set.size() > 30) throw std::invalid_argument("brute force limited to 30 elements");
  std::map<std::string, int> bit;
  for (std::size_t i = 0; i < x3c.ground_set.size(); ++i) bit[x3c.ground_set[i]] = static_cast<int>(i);
  std::vector<unsigned> masks;
  for (const auto& c : x3c.subsets) {
    unsigned m = 0;
    for (const auto& e : c) m |= 1u << bit.at(e);
    masks.push_back(m);
  }
  const unsigned full = (1u << x3c.ground_set.size()) - 1;
  // Each step picks a subset containing the lowest uncovered element, so
  // every partition is reached exactly once.
  return cover(masks, 0, full);
}

X3cInstance gen_random_x3c(int q, int num_subsets, std::uint64_t seed, bool planted) {
  if (q < 1) throw std::invalid_argument("q must be at least 1");
  if (num_subsets < q && planted) throw std::invalid_argument("a planted cover needs at least q subsets");
  if (num_subsets < 0) throw std::invalid_argument("negative subset count");
  std::mt19937_64 rng(seed);
  X3cInstance x3c;
  const int n = 3 * q;
  for (int j = 1; j <= n; ++j) x3c.ground_set.push_back("x" + std::to_string(j));
  auto triple = [&](std::vector<int> picks) {
    std::sort(picks.begin(), picks.end());
    std::array<std::string, 3> c;
    for (int k = 0; k < 3; ++k) c[static_cast<std::size_t>(k)] = x3c.ground_set[static_cast<std::size_t>(picks[static_cast<std::size_t>(k)])];
    return c;
  };
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) order[static_cast<std::size_t>(j)] = j;
  if (planted) {
    std::shuffle(order.begin(), order.end(), rng);
    for (int i = 0; i < q; ++i) {
      x3c.subsets.push_back(triple({order[static_cast<std::size_t>(3 * i)], order[static_cast<std::size_t>(3 * i + 1)],
                                    order[static_cast<std::size_t>(3 * i + 2)]}));
    }
  }
  while (static_cast<int>(x3c.subsets.size()) < num_subsets) {
    std::shuffle(order.begin(), order.end(), rng);
    x3c.subsets.push_back(triple({order[0], order[1], order[2]}));
  }
  std::shuffle(x3c.subsets.begin(), x3c.subsets.end(), rng);
  return x3c;
}

}  // namespace railnet
