#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "oag/group.hpp"
#include "oag/stepvec.hpp"

namespace oag {

// Convex subgroups form a chain of tails: Tail(0) = G, Tail(m) = {x : x_j = 0
// for j < m}, Tail(infinity) = {0}. level == nullopt encodes the zero group.
struct ConvexSubgroup {
  std::optional<std::uint32_t> level;

  static ConvexSubgroup full() { return {0u}; }
  static ConvexSubgroup tail(std::uint32_t m) { return {m}; }
  static ConvexSubgroup zero() { return {std::nullopt}; }

  bool is_zero() const { return !level.has_value(); }
  bool operator==(const ConvexSubgroup& o) const { return level == o.level; }
  // chain order by inclusion: larger subgroup = smaller level
  bool contains(const ConvexSubgroup& o) const {
    if (is_zero()) return o.is_zero();
    if (o.is_zero()) return true;
    return *level <= *o.level;
  }
  std::string to_string() const;
};

// Symbolic subgroup algebra over a group: convex tails, the p-power
// divisibility-limit operator, shifts by p^k G, meets, joins (sums) and
// integer scalings. Expressions are immutable trees.
class SubgroupExpr {
 public:
  struct Conv;
  struct Sharp;
  struct Shift;
  struct Meet;
  struct Join;
  struct Scale;
  struct NodeBox;

  SubgroupExpr() = default;
  explicit SubgroupExpr(NodeBox n);

  const NodeBox& node() const { return *node_; }
  bool valid() const { return node_ != nullptr; }

  std::string to_string() const;

 private:
  std::shared_ptr<const NodeBox> node_;
};

struct SubgroupExpr::Conv { ConvexSubgroup d; };
struct SubgroupExpr::Sharp { ConvexSubgroup d; Int p; unsigned s; };
struct SubgroupExpr::Shift { SubgroupExpr inner; Int p; unsigned k; };
struct SubgroupExpr::Meet { SubgroupExpr a, b; };
struct SubgroupExpr::Join { SubgroupExpr a, b; };
struct SubgroupExpr::Scale { Int p; unsigned r; SubgroupExpr inner; };
struct SubgroupExpr::NodeBox {
  std::variant<Conv, Sharp, Shift, Meet, Join, Scale> v;
};

inline SubgroupExpr::SubgroupExpr(NodeBox n)
    : node_(std::make_shared<const NodeBox>(std::move(n))) {}

SubgroupExpr conv(ConvexSubgroup d);
SubgroupExpr sharp_expr(ConvexSubgroup d, Int p, unsigned s);
SubgroupExpr shift(SubgroupExpr s, Int p, unsigned k);
SubgroupExpr meet(SubgroupExpr a, SubgroupExpr b);
SubgroupExpr join(SubgroupExpr a, SubgroupExpr b);
SubgroupExpr scale(Int p, unsigned r, SubgroupExpr s);
SubgroupExpr full_group();
SubgroupExpr zero_group();
SubgroupExpr pk_g(Int p, unsigned k);  // p^k G

// Closed-form membership data for a subgroup: a coordinatewise divisor (0
// meaning the coordinate is forced to zero) plus, per ambient-constrained
// cell, finitely many congruences N | sum(lambda_j x_j) over the cell. The
// conditions are standalone: together with the divisors they characterize the
// subgroup inside the space of finitely supported vectors, with no implicit
// appeal to ambient membership.
struct CellCond {
  unsigned cell;
  Int modulus;
  StepVec<Int> lam;
};

struct Profile {
  StepVec<Int> div;
  std::vector<CellCond> conds;
};

// A subgroup expression bound to its group, with the derived profile.
struct BoundSubgroup {
  GroupHandle group;
  SubgroupExpr expr;
  Profile prof;
};

BoundSubgroup bind_subgroup(const GroupHandle& g, const SubgroupExpr& e);  // throws UnknownConvex

Profile ambient_profile(const GroupHandle& g);
Profile profile_of(const GroupHandle& g, const SubgroupExpr& e);
Profile profile_meet(const GroupHandle& g, const Profile& a, const Profile& b);
Profile profile_sum(const GroupHandle& g, const Profile& a, const Profile& b);
Profile profile_scale(const GroupHandle& g, const Int& c, const Profile& a);

bool profile_member(const GroupHandle& g, const Profile& p, const Element& x);
bool profiles_equal(const GroupHandle& g, const Profile& a, const Profile& b);

bool member(const BoundSubgroup& s, const Element& x);

// Independent brute-force membership decision: truncates the problem to a
// support window derived from x plus slack, builds explicit generator
// lattices for each constructor, and decides by exact lattice membership.
// Never consults the profile closed forms.
bool member_oracle(const GroupHandle& g, const SubgroupExpr& e, const Element& x,
                   unsigned support_slack = 3, unsigned coeff_slack = 8);

// Largest convex subgroups attached to an element through n-divisibility.
struct SpineTriple {
  ConvexSubgroup s_point;       // largest D with g not in D + nG
  ConvexSubgroup t_point;       // union of spine members not containing g
  ConvexSubgroup t_plus_point;  // intersection of spine members containing g
  bool t_plus_empty_intersection = false;  // convention: empty intersection reported as G
};

SpineTriple spine_maps(const GroupHandle& g, const Int& n, const Element& x);

// The divisibility-limit operator attached to a convex subgroup, with the
// intersection running over strict convex supergroups.
BoundSubgroup sharp(const GroupHandle& g, ConvexSubgroup d, const Int& p, unsigned s);

struct ConvexifyResult {
  std::optional<ConvexSubgroup> witness;  // D with D + p^sG equal to the operator value
  bool cond_infinitely_many_between;      // reported condition (1)
  bool cond_chain_intersection;           // reported condition (2)
  bool cond_realized_as_spine_point;      // reported condition (3)
  std::optional<Element> spine_witness;
};

ConvexifyResult convexify_sharp(const GroupHandle& g, ConvexSubgroup alpha, const Int& p,
                                unsigned s);

enum class EqVerdict { EqualByNormalForm, NotEqual, UndecidedAfterSampling };

struct EqResult {
  EqVerdict verdict;
  std::optional<Element> witness;  // member of exactly one side
};

EqResult subgroup_eq(const BoundSubgroup& a, const BoundSubgroup& b, unsigned samples,
                     std::uint64_t seed);

// Probe elements realizing the subgroup's generators near the window; also
// the generator pool for quotient enumeration. `deep` controls how many
// representatives are drawn from each infinite coordinate class.
std::vector<Element> generators(const BoundSubgroup& s, unsigned deep);

// Describes the expression after normalization, e.g. a meet of tails prints
// as the deeper tail.
std::string describe(const BoundSubgroup& s);

}  // namespace oag
