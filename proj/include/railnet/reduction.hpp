#pragma once

#include "railnet/model.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace railnet {

// Exact cover by 3-sets: can q pairwise disjoint subsets cover the 3q
// elements of the ground set?
struct X3cInstance {
  std::vector<std::string> ground_set;
  std::vector<std::array<std::string, 3>> subsets;
};

// Throws std::invalid_argument unless |X| is a multiple of 3, elements are
// distinct identifiers, and every subset holds 3 distinct elements of X.
void validate_x3c(const X3cInstance& x3c);

struct ReducedInstance {
  Instance instance;
  Rational threshold;  // 3q: optimum <= threshold iff an exact cover exists
};

// Bipartite network s -> vp_<i> -> v_<element> -> t with one train per
// element. Unit lines use c=0, c~=1, k=0 by default; `unit_capacity`
// switches them to c=1, c~=0.
ReducedInstance x3c_to_instance(const X3cInstance& x3c, bool unit_capacity = false);

constexpr std::size_t kX3cBruteForceLimit = 20;

// Exhaustive search. Throws std::invalid_argument above kX3cBruteForceLimit
// subsets or on invalid input.
bool x3c_brute_force(const X3cInstance& x3c);

// Elements x1..x3q. With `planted`, q subsets forming a partition are
// included among the num_subsets; all others are uniform random triples.
X3cInstance gen_random_x3c(int q, int num_subsets, std::uint64_t seed, bool planted);

}  // namespace railnet
