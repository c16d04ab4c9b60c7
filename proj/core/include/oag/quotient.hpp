#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oag/group.hpp"
#include "oag/subgroup.hpp"

namespace oag {

// Exact finite index or a certified lower bound. There is deliberately no
// Infinite tag: a program can exhibit classes, not count them all, so the
// verification suites read AtLeast(cap) at escalating caps as the desk-scale
// rendering of an infinite index.
struct IndexValue {
  enum class Tag { Finite, AtLeast } tag;
  Int value;  // exact count, or the number of pairwise-distinct classes found

  static IndexValue finite(Int k) { return {Tag::Finite, std::move(k)}; }
  static IndexValue at_least(Int w) { return {Tag::AtLeast, std::move(w)}; }
  bool is_finite() const { return tag == Tag::Finite; }
  bool operator==(const IndexValue& o) const { return tag == o.tag && value == o.value; }
  std::string to_string() const;
  std::string to_json() const;  // {"tag":"finite","value":k} | {"tag":"at_least","bound":w}
};

struct Coset {
  SubgroupExpr subgroup;
  Element rep;
};

bool coset_eq(const BoundSubgroup& s, const Element& x, const Element& y);

// Canonical reduction mod B: coordinate residues against B's divisors plus
// the values of B's cell congruences. Two elements reduce equally iff they
// differ by a member of B.
class Reducer {
 public:
  Reducer(GroupHandle g, Profile b);

  struct Key {
    std::vector<std::pair<std::uint32_t, Rat>> residues;  // sparse, nonzero
    std::vector<Int> cond_values;
    bool operator==(const Key& o) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };

  Key reduce(const Element& x) const;

 private:
  GroupHandle g_;
  Profile b_;
};

struct Transversal {
  IndexValue index;
  std::vector<Element> reps;  // pairwise inequivalent mod B, closed if Finite
};

// Breadth-first closure of A/B over the pooled generators of A reduced mod B.
// Throws NotNested when a pooled generator of B escapes A.
Transversal transversal(const BoundSubgroup& a, const BoundSubgroup& b, unsigned cap);
IndexValue index(const BoundSubgroup& a, const BoundSubgroup& b, unsigned cap = 32);

// F_p-dimension of the elementary abelian quotient A/B via greedy
// independent-family construction over the pool.
IndexValue fp_dimension(const BoundSubgroup& a, const BoundSubgroup& b, const Int& p,
                        unsigned cap = 32);

// k elements of A, pairwise inequivalent mod B, emission-checked.
std::vector<Element> witness_stream(const BoundSubgroup& a, const BoundSubgroup& b, unsigned k);

}  // namespace oag
