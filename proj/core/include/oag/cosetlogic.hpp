#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "oag/numeric.hpp"

namespace oag::cosetlogic {

using Tuple = std::vector<std::int64_t>;

// Product of cyclic p-groups Z/p^{a_j}, all factors powers of the same prime.
struct FiniteAmbient {
  std::vector<std::int64_t> moduli;
  Int p;

  std::int64_t order() const;
  Tuple zero() const { return Tuple(moduli.size(), 0); }
  Tuple reduce(Tuple t) const;
  Tuple add(const Tuple& a, const Tuple& b) const;
  Tuple sub(const Tuple& a, const Tuple& b) const;
  std::int64_t encode(const Tuple& t) const;
  Tuple decode(std::int64_t code) const;
};

FiniteAmbient make_ambient(std::vector<std::int64_t> moduli);  // throws InvalidSpec

// Subgroup given by a generator list; elements materialized by closure.
struct Subgrp {
  std::vector<Tuple> gens;
};

std::vector<std::int64_t> enumerate_subgroup(const FiniteAmbient& amb, const Subgrp& s);

struct CosetSystem {
  Tuple base_rep;
  Subgrp base_sub;
  std::vector<std::pair<Tuple, Subgrp>> exclusions;
};

struct Violation {
  std::string what;
  std::size_t exclusion_a = 0, exclusion_b = 0;
};

// Containment of every exclusion coset in the base coset and pairwise
// disjointness of the exclusions, checked exhaustively.
std::vector<Violation> validate_system(const CosetSystem& sys, const FiniteAmbient& amb);

// The two-condition membership test for y in Y + G' where
// Y = (a0 + M0) \ union(ai + Mi): (1) y - a0 in M0 + G', and (2) the sum of
// 1/[M0 cap G' : Mi cap G'] over exclusions with y - ai in Mi + G' stays
// below 1. Index ratios are exact rationals and asserted to be p-powers.
bool saturation_membership(const CosetSystem& sys, const Subgrp& gprime,
                           const FiniteAmbient& amb, const Tuple& y);

// Independent oracle: materializes Y and tests whether some member is
// congruent to y mod G'. Throws AmbientTooLarge beyond 10^6 elements.
bool brute_membership(const CosetSystem& sys, const Subgrp& gprime, const FiniteAmbient& amb,
                      const Tuple& y);

// Minimal N such that for every multiset of k powers of n the full reciprocal
// sum reaches 1 exactly when the part below n^N already does.
unsigned threshold_n(unsigned n, unsigned k);

struct EmptyIntersection {};

// Intersects the positive cosets into a single base (or reports empty) and
// absorbs/deduplicates the negative cosets into pairwise-disjoint exclusions
// contained in the base.
std::variant<CosetSystem, EmptyIntersection> normalize_combination(
    const std::vector<std::pair<Tuple, Subgrp>>& positives,
    const std::vector<std::pair<Tuple, Subgrp>>& negatives, const FiniteAmbient& amb);

// JSON round-trip for the coset-system file format.
std::string to_json(const CosetSystem& sys, const Subgrp& gprime, const FiniteAmbient& amb);
struct ParsedSystem {
  FiniteAmbient amb;
  CosetSystem sys;
  Subgrp gprime;
};
ParsedSystem from_json(const std::string& text);

}  // namespace oag::cosetlogic
