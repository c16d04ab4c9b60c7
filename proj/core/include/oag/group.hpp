#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oag/errors.hpp"
#include "oag/numeric.hpp"
#include "oag/rng.hpp"

namespace oag {

enum class Family { FreeLex, LocalLex, PolyMod, PolyPart };

struct PartConstraint {
  Int p;        // prime
  unsigned n;   // exponent, >= 1
  unsigned cell;  // partition cell index
};

struct GroupSpec {
  Family family = Family::FreeLex;
  unsigned rank = 1;                      // FreeLex
  Int p = 2;                              // LocalLex, PolyMod
  unsigned n = 1;                         // PolyMod
  std::vector<PartConstraint> constraints;  // PolyPart

  static GroupSpec free_lex(unsigned rank);
  static GroupSpec local_lex(Int p);
  static GroupSpec poly_mod(Int p, unsigned n);
  static GroupSpec poly_part(std::vector<PartConstraint> cs);

  std::string to_string() const;
};

class Group;
using GroupHandle = std::shared_ptr<const Group>;

// Finitely supported coordinate vector with exact rational coefficients,
// owned by a concrete group. Coordinates are stored sparsely in increasing
// index order with no zero entries; index 0 is the most significant position
// of the lexicographic order.
class Element {
 public:
  using Coords = std::vector<std::pair<std::uint32_t, Rat>>;

  Element() = default;
  Element(GroupHandle g, Coords coords);

  const Coords& coords() const { return coords_; }
  const GroupHandle& group() const { return group_; }

  bool is_zero() const { return coords_.empty(); }
  Rat coeff(std::uint32_t j) const;
  std::uint32_t max_support() const { return coords_.empty() ? 0 : coords_.back().first; }

  bool operator==(const Element& o) const;

  std::string to_string() const;

 private:
  friend class Group;
  GroupHandle group_;
  Coords coords_;  // canonical: sorted, nonzero, reduced
};

enum class Cmp { LT, EQ, GT };

struct CellDesc {
  unsigned id;
  Int modulus;  // ambient constraint p^n on the cell sum (1 if none)
};

// A constructed ordered abelian group together with derived metadata.
// Immutable after construction; handles and elements are safe to share
// across threads.
class Group : public std::enable_shared_from_this<Group> {
 public:
  const GroupSpec& spec() const { return spec_; }
  Family family() const { return spec_.family; }

  // Finite coordinate range for FreeLex, nullopt for the omega-indexed families.
  std::optional<unsigned> finite_rank() const;

  // Ambient-constrained cells. PolyMod has the single cell covering every
  // coordinate; PolyPart cells follow the fixed 2-adic valuation partition
  // U_i = {m >= 1 : v_2(m) = i} of the positive coordinates.
  const std::vector<CellDesc>& cells() const { return cells_; }
  bool coord_in_cell(std::uint32_t j, unsigned cell) const;
  // k-th coordinate of the cell at or after `from` (k = 0 gives the first).
  std::uint32_t cell_coord_from(unsigned cell, std::uint32_t from, unsigned k = 0) const;

  bool rational_coeffs() const { return spec_.family == Family::LocalLex; }
  const Int& local_prime() const { return spec_.p; }

  // Validates coordinates against the element invariants; returns the name of
  // the violated constraint, or nullopt if valid.
  std::optional<std::string> check_coords(const Element::Coords& c) const;

  Element element(Element::Coords c) const;  // throws ConstraintViolation
  Element zero() const;
  // Basis vector scaled by a rational, repaired to satisfy the ambient
  // constraints using one extra in-cell coordinate when necessary.
  Element repaired_unit(std::uint32_t j, const Rat& coeff) const;

  Int cell_sum(const Element& x, unsigned cell) const;

  std::string describe() const;

 private:
  friend GroupHandle make_group(const GroupSpec&);
  friend GroupHandle make_group_unchecked(GroupSpec, std::vector<CellDesc>);
  Group(GroupSpec spec, std::vector<CellDesc> cells)
      : spec_(std::move(spec)), cells_(std::move(cells)) {}

  GroupSpec spec_;
  std::vector<CellDesc> cells_;
};

GroupHandle make_group(const GroupSpec& spec);  // throws InvalidSpec

// Test hook: builds a handle whose effective cell constraints differ from the
// declared spec. Used by the harness self-test to show that a corrupted group
// makes verification suites fail.
GroupHandle make_group_unchecked(GroupSpec spec, std::vector<CellDesc> cells);

Element add(const Element& x, const Element& y);
Element sub(const Element& x, const Element& y);
Element neg(const Element& x);
Element scalar_mul(const Int& c, const Element& x);
Cmp compare(const Element& x, const Element& y);

// y with c*y = x and y a valid group element; NotDivisible otherwise.
Element divide_exact(const Element& x, const Int& c);
std::optional<Element> try_divide(const Element& x, const Int& c);

// Deterministic seeded sampling; constrained cell sums are repaired by
// adjusting one in-cell coefficient, never by rejection.
Element random_element(const GroupHandle& g, unsigned support_bound, unsigned coeff_bound,
                       std::uint64_t seed);

std::string format_element(const Element& x);

}  // namespace oag
