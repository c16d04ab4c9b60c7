#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "oag/quotient.hpp"
#include "oag/subgroup.hpp"

namespace oag {

// f(x) = (1/divisor) (sum coeffs_i x_i + offset + shift), before projection.
struct LinearFn {
  std::vector<Int> coeffs;
  Int divisor = 1;  // nonzero
  Element offset;
  Int shift = 0;  // to be bound against the target's convex part
};

// Admissible projection targets: D + p^r G or D^[p^s] + p^r G (r = 0 gives a
// plain convex target).
struct TargetShape {
  ConvexSubgroup d;
  bool sharp = false;
  Int p = 2;
  unsigned s = 1;  // sharp exponent, when sharp
  unsigned r = 0;  // shift exponent

  SubgroupExpr expr() const;
  std::string to_string() const;
};

// The projected linear function: its value at x is the full solution set of
// divisor * y = sum coeffs_i x_i + offset + bound_shift in G modulo the
// target, which is a set of target-cosets, not a single projection.
struct ProjectedLinearFn {
  LinearFn base;
  TargetShape target;
  Element bound_shift;  // shift * (smallest positive class of G/D), lifted
};

// Smallest positive element of G/D lifted to G when that quotient is
// discrete, zero otherwise.
Element one_of_quotient(const GroupHandle& g, const ConvexSubgroup& d);

ProjectedLinearFn project(const GroupHandle& g, const LinearFn& f, const TargetShape& h);

std::vector<Coset> eval_projected(const GroupHandle& g, const ProjectedLinearFn& pf,
                                  const std::vector<Element>& args, unsigned cap = 64);

// Coset-level conjunction: the unique coset of H1 cap H2 refining both, when
// the pair is consistent.
std::optional<Coset> intersect_cosets(const GroupHandle& g, const BoundSubgroup& h1,
                                      const Element& y1, const BoundSubgroup& h2,
                                      const Element& y2);

// Pointwise function intersection into the meet of the targets.
std::vector<Coset> eval_intersection(const GroupHandle& g, const ProjectedLinearFn& f1,
                                     const ProjectedLinearFn& f2, const std::vector<Element>& args,
                                     unsigned cap = 64);

// Constructive split of x across a sum of profile subgroups: u + v = x with
// u in P and v in Q.
std::optional<std::pair<Element, Element>> split_sum(const GroupHandle& g, const Profile& p,
                                                     const Profile& q, const Element& x);

// Piece domains: boolean combinations of shifted-membership and order literals.
struct Predicate;
using PredicatePtr = std::shared_ptr<const Predicate>;
struct Predicate {
  struct True {};
  struct In { SubgroupExpr s; Element offset; };      // x - offset in s
  struct Less { Element bound; };                      // x < bound
  struct Not { PredicatePtr inner; };
  struct And { PredicatePtr a, b; };
  struct Or { PredicatePtr a, b; };
  std::variant<True, In, Less, Not, And, Or> node;
};

PredicatePtr pred_true();
PredicatePtr pred_in(SubgroupExpr s, Element offset);
PredicatePtr pred_less(Element bound);
PredicatePtr pred_not(PredicatePtr p);
PredicatePtr pred_and(PredicatePtr a, PredicatePtr b);
PredicatePtr pred_or(PredicatePtr a, PredicatePtr b);
bool eval_predicate(const GroupHandle& g, const PredicatePtr& p, const Element& x);

// Combination tree in the decomposition shape: a union over pieces of
// (meet of projected leaves) minus (union of projected leaves).
struct FnTree;
using FnTreePtr = std::shared_ptr<const FnTree>;
struct FnTree {
  struct Leaf { ProjectedLinearFn fn; };
  struct Meet { std::vector<FnTreePtr> args; };
  struct Minus { FnTreePtr pos; std::vector<FnTreePtr> negs; };
  std::variant<Leaf, Meet, Minus> node;
};

FnTreePtr tree_leaf(ProjectedLinearFn fn);
FnTreePtr tree_meet(std::vector<FnTreePtr> args);
FnTreePtr tree_minus(FnTreePtr pos, std::vector<FnTreePtr> negs);

struct Piece {
  PredicatePtr domain;
  FnTreePtr body;
};

struct PiecewiseFn {
  GroupHandle group;
  std::vector<Piece> pieces;
  TargetShape target;
  unsigned multiplicity_cap = 1;
  unsigned arity = 1;
};

std::vector<Coset> eval_piecewise(const PiecewiseFn& f, const std::vector<Element>& args,
                                  unsigned cap = 64);

// Finite-index side condition of the decomposition shape: the meet of every
// piece's positive targets has finite index over the declared target.
bool validate_piecewise(const PiecewiseFn& f, unsigned cap = 64);

// Reusable evaluators: target bindings and kernel transversals are computed
// once, leaving a single congruence solve per evaluation point.
class PreparedProjection {
 public:
  PreparedProjection(GroupHandle g, ProjectedLinearFn pf, unsigned cap = 64);
  std::vector<Coset> eval(const std::vector<Element>& args) const;  // CapExceeded at prepare
  const BoundSubgroup& target() const { return hb_; }
  const ProjectedLinearFn& fn() const { return pf_; }

 private:
  GroupHandle g_;
  ProjectedLinearFn pf_;
  BoundSubgroup hb_;
  std::vector<Element> kernel_reps_;
  Int c_;
  bool negate_ = false;
};

class PreparedPiecewise {
 public:
  PreparedPiecewise(const PiecewiseFn& f, unsigned cap = 64);
  std::vector<Coset> eval(const std::vector<Element>& args) const;
  const BoundSubgroup& target() const { return tb_; }

 private:
  struct PNode;
  using PNodePtr = std::shared_ptr<const PNode>;
  struct PPiece {
    PredicatePtr domain;
    PNodePtr body;
    std::vector<Element> expansion;  // transversal of the body target over tb_
  };
  GroupHandle g_;
  BoundSubgroup tb_;
  std::vector<PPiece> pieces_;
  unsigned multiplicity_cap_;
  unsigned cap_;

  PNodePtr prepare(const FnTreePtr& t, unsigned cap) const;
  struct Value {
    std::vector<Element> reps;
    const BoundSubgroup* tgt;
  };
  Value eval_node(const PNodePtr& n, const std::vector<Element>& args) const;
};


std::string piecewise_to_json(const PiecewiseFn& f);
PiecewiseFn piecewise_from_json(const GroupHandle& g, const std::string& text);

// The partial function f = f1 cap f2 with f1(x) = x + S#(0,p,2) + p^2 G and
// f2(x) = 0 + S#(0,p,3) + pG on the all-(p,2) partition family.
PiecewiseFn build_counterexample_72(const GroupHandle& g);  // throws WrongFamily

struct ConfinementReport {
  bool pass = true;
  std::size_t agreement_size = 0;
  std::optional<std::pair<Element, Element>> violating_pair;
  bool confined_to_fine = false;    // one coset of S#(0,p,3) + pG
  bool confined_to_coarse = false;  // one coset of S#(0,p,2) + p^2 G
};

ConfinementReport confinement_check_72(const PiecewiseFn& f, const Int& a, const Int& b,
                                       const Element& g0, const std::vector<Element>& sample);
// Shared-sample harness: the partial function's values over the sample are
// computed once and reused across candidate checks.
class Confinement72Harness {
 public:
  Confinement72Harness(const PiecewiseFn& f, std::vector<Element> sample);
  ConfinementReport check(const Int& a, const Int& b, const Element& g0) const;

 private:
  GroupHandle g_;
  TargetShape target_;
  BoundSubgroup tb_, fine_, coarse_;
  std::vector<Element> sample_;
  std::vector<std::vector<Element>> values_;  // f(x) reps per sample point
};


// Does x -> x + g + Tail(i) + 2G implement the digit-flip family member at
// level i over the localized lexicographic group?
bool translate_check_73(const Element& g0, unsigned i);

struct ConflictReport {
  bool unsatisfiable = true;
  unsigned clashing_coordinate = 0;
  bool grid_confirmed = false;  // exhaustive {0,1}-grid over support < j
};

ConflictReport conflict_73(const GroupHandle& g, unsigned i, unsigned j);

}  // namespace oag
