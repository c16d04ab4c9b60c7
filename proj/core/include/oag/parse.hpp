#pragma once

#include <string>

#include "oag/group.hpp"
#include "oag/subgroup.hpp"

namespace oag {

// Element grammar (ASCII):
//   expr = [sign] term {("+"|"-") term}
//   term = [rational "*"] basis
//   basis = "e" nat | "t^" nat | "t" | nat-literal (constant term)
//   rational = int ["/" nat]   with positive denominator
Element parse_element(const std::string& text, const GroupHandle& g);

// Subgroup grammar:
//   S = "tail(m)" | "zero" | "full" | "sharp(C, p, s)" | "shift(S, p, k)"
//     | "meet(S,S)" | "join(S,S)" | "scale(p, r, S)"
// where C is one of tail(m) | zero | full.
SubgroupExpr parse_subgroup_text(const std::string& text);
BoundSubgroup parse_subgroup_expr(const std::string& text, const GroupHandle& g);

// Group-spec grammar:
//   "freelex(k)" | "locallex(p=P)" | "polymod(p=P,n=N)"
//   | "polypart((p1,n1),(p2,n2),...)"   (cells assigned positionally)
GroupSpec parse_group_spec(const std::string& text);

}  // namespace oag
