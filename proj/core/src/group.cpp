#include "oag/group.hpp"

#include <algorithm>
#include <sstream>

namespace oag {

namespace {

bool is_prime(const Int& p) {
  if (p < 2) return false;
  for (Int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

unsigned v2_index(std::uint32_t m) {
  unsigned v = 0;
  while ((m & 1u) == 0) { m >>= 1; ++v; }
  return v;
}

}  // namespace

GroupSpec GroupSpec::free_lex(unsigned rank) {
  GroupSpec s;
  s.family = Family::FreeLex;
  s.rank = rank;
  return s;
}
GroupSpec GroupSpec::local_lex(Int p) {
  GroupSpec s;
  s.family = Family::LocalLex;
  s.p = std::move(p);
  return s;
}
GroupSpec GroupSpec::poly_mod(Int p, unsigned n) {
  GroupSpec s;
  s.family = Family::PolyMod;
  s.p = std::move(p);
  s.n = n;
  return s;
}
GroupSpec GroupSpec::poly_part(std::vector<PartConstraint> cs) {
  GroupSpec s;
  s.family = Family::PolyPart;
  s.constraints = std::move(cs);
  return s;
}

std::string GroupSpec::to_string() const {
  std::ostringstream os;
  switch (family) {
    case Family::FreeLex: os << "freelex(" << rank << ")"; break;
    case Family::LocalLex: os << "locallex(p=" << p << ")"; break;
    case Family::PolyMod: os << "polymod(p=" << p << ",n=" << n << ")"; break;
    case Family::PolyPart: {
      os << "polypart(";
      for (std::size_t i = 0; i < constraints.size(); ++i) {
        if (i) os << ",";
        os << "(" << constraints[i].p << "," << constraints[i].n << ")";
      }
      os << ")";
      break;
    }
  }
  return os.str();
}

GroupHandle make_group(const GroupSpec& spec) {
  std::vector<CellDesc> cells;
  switch (spec.family) {
    case Family::FreeLex:
      if (spec.rank < 1) throw InvalidSpec("freelex rank must be >= 1");
      break;
    case Family::LocalLex:
      if (!is_prime(spec.p)) throw InvalidSpec("locallex p must be prime");
      break;
    case Family::PolyMod:
      if (!is_prime(spec.p)) throw InvalidSpec("polymod p must be prime");
      if (spec.n < 1) throw InvalidSpec("polymod n must be >= 1");
      cells.push_back({0u, pow_i(spec.p, spec.n)});
      break;
    case Family::PolyPart: {
      for (const auto& c : spec.constraints) {
        if (!is_prime(c.p)) throw InvalidSpec("polypart constraint prime is not prime");
        if (c.n < 1) throw InvalidSpec("polypart exponent must be >= 1");
        for (const auto& d : cells)
          if (d.id == c.cell) throw InvalidSpec("polypart duplicate cell index");
        cells.push_back({c.cell, pow_i(c.p, c.n)});
      }
      std::sort(cells.begin(), cells.end(), [](auto& a, auto& b) { return a.id < b.id; });
      break;
    }
  }
  return GroupHandle(new Group(spec, std::move(cells)));
}

GroupHandle make_group_unchecked(GroupSpec spec, std::vector<CellDesc> cells) {
  return GroupHandle(new Group(std::move(spec), std::move(cells)));
}

std::optional<unsigned> Group::finite_rank() const {
  if (spec_.family == Family::FreeLex) return spec_.rank;
  return std::nullopt;
}

bool Group::coord_in_cell(std::uint32_t j, unsigned cell) const {
  if (spec_.family == Family::PolyMod) return true;  // single cell over all coordinates
  if (j == 0) return false;                           // constant term lies in no cell
  return v2_index(j) == cell;
}

std::uint32_t Group::cell_coord_from(unsigned cell, std::uint32_t from, unsigned k) const {
  if (spec_.family == Family::PolyMod) return from + k;
  // elements of U_cell are odd * 2^cell
  std::uint64_t step = 1ull << cell;
  std::uint64_t lo = from < 1 ? 1 : from;
  std::uint64_t q = (lo + step - 1) / step;  // smallest multiple of 2^cell >= lo
  if (q % 2 == 0) ++q;
  q += 2ull * k;
  return static_cast<std::uint32_t>(q * step);
}

Int Group::cell_sum(const Element& x, unsigned cell) const {
  Int acc = 0;
  for (const auto& [j, c] : x.coords())
    if (coord_in_cell(j, cell)) acc += to_int(c);
  return acc;
}

std::optional<std::string> Group::check_coords(const Element::Coords& coords) const {
  switch (spec_.family) {
    case Family::FreeLex:
      for (const auto& [j, c] : coords) {
        if (j >= spec_.rank) return "support outside [0, rank)";
        if (!is_integer(c)) return "coefficient not an integer";
      }
      return std::nullopt;
    case Family::LocalLex:
      for (const auto& [j, c] : coords) {
        (void)j;
        if (den(c) % spec_.p == 0) return "denominator not coprime to p";
      }
      return std::nullopt;
    case Family::PolyMod:
    case Family::PolyPart: {
      for (const auto& [j, c] : coords) {
        (void)j;
        if (!is_integer(c)) return "coefficient not an integer";
      }
      for (const auto& cd : cells_) {
        Int acc = 0;
        for (const auto& [j, c] : coords)
          if (coord_in_cell(j, cd.id)) acc += to_int(c);
        if (acc % cd.modulus != 0) {
          std::ostringstream os;
          os << "cell " << cd.id << " sum " << acc << " not divisible by " << cd.modulus;
          return os.str();
        }
      }
      return std::nullopt;
    }
  }
  return "unreachable";
}

Element Group::element(Element::Coords c) const {
  std::sort(c.begin(), c.end(), [](auto& a, auto& b) { return a.first < b.first; });
  Element::Coords merged;
  for (auto& [j, v] : c) {
    if (!merged.empty() && merged.back().first == j) merged.back().second += v;
    else merged.push_back({j, v});
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](auto& e) { return e.second == 0; }),
               merged.end());
  if (auto bad = check_coords(merged)) throw ConstraintViolation(*bad);
  return Element(shared_from_this(), std::move(merged));
}

Element Group::zero() const { return Element(shared_from_this(), {}); }

Element Group::repaired_unit(std::uint32_t j, const Rat& coeff) const {
  Element::Coords c{{j, coeff}};
  if (spec_.family == Family::PolyMod || spec_.family == Family::PolyPart) {
    for (const auto& cd : cells_) {
      if (!coord_in_cell(j, cd.id)) continue;
      Int rem = mod_norm(to_int(coeff), cd.modulus);
      if (rem != 0) {
        std::uint32_t rep = cell_coord_from(cd.id, j + 1);
        c.push_back({rep, Rat(cd.modulus - rem)});
      }
    }
  }
  return element(std::move(c));
}

Element::Element(GroupHandle g, Coords coords) : group_(std::move(g)), coords_(std::move(coords)) {}

Rat Element::coeff(std::uint32_t j) const {
  for (const auto& [i, c] : coords_)
    if (i == j) return c;
  return Rat(0);
}

bool Element::operator==(const Element& o) const { return coords_ == o.coords_; }

namespace {

void require_same_group(const Element& x, const Element& y) {
  if (x.group() != y.group()) throw GroupMismatch("elements belong to different groups");
}

Element from_coords_unchecked(const GroupHandle& g, Element::Coords c) {
  // internal fast path for operations closed under the group constraints
  return Element(g, std::move(c));
}

}  // namespace

Element add(const Element& x, const Element& y) {
  require_same_group(x, y);
  Element::Coords out;
  auto& a = x.coords();
  auto& b = y.coords();
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j >= b.size() || (i < a.size() && a[i].first < b[j].first)) out.push_back(a[i++]);
    else if (i >= a.size() || b[j].first < a[i].first) out.push_back(b[j++]);
    else {
      Rat s = a[i].second + b[j].second;
      if (s != 0) out.push_back({a[i].first, s});
      ++i; ++j;
    }
  }
  return from_coords_unchecked(x.group(), std::move(out));
}

Element neg(const Element& x) {
  Element::Coords out = x.coords();
  for (auto& [j, c] : out) c = -c;
  return from_coords_unchecked(x.group(), std::move(out));
}

Element sub(const Element& x, const Element& y) { return add(x, neg(y)); }

Element scalar_mul(const Int& c, const Element& x) {
  if (c == 0) return x.group()->zero();
  Element::Coords out = x.coords();
  for (auto& [j, v] : out) v *= Rat(c);
  return from_coords_unchecked(x.group(), std::move(out));
}

Cmp compare(const Element& x, const Element& y) {
  require_same_group(x, y);
  auto& a = x.coords();
  auto& b = y.coords();
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    std::uint32_t ia = i < a.size() ? a[i].first : UINT32_MAX;
    std::uint32_t ib = j < b.size() ? b[j].first : UINT32_MAX;
    if (ia < ib) return a[i].second > 0 ? Cmp::GT : Cmp::LT;
    if (ib < ia) return b[j].second > 0 ? Cmp::LT : Cmp::GT;
    if (a[i].second != b[j].second)
      return a[i].second > b[j].second ? Cmp::GT : Cmp::LT;
    ++i; ++j;
  }
  return Cmp::EQ;
}

std::optional<Element> try_divide(const Element& x, const Int& c) {
  if (c == 0) throw NotDivisible("division by zero");
  const auto& g = x.group();
  Element::Coords out;
  for (const auto& [j, v] : x.coords()) {
    Rat q = v / Rat(c);
    if (g->rational_coeffs()) {
      if (den(q) % g->local_prime() == 0) return std::nullopt;
    } else {
      if (!is_integer(q)) return std::nullopt;
    }
    out.push_back({j, q});
  }
  if (g->check_coords(out)) return std::nullopt;
  return from_coords_unchecked(g, std::move(out));
}

Element divide_exact(const Element& x, const Int& c) {
  auto r = try_divide(x, c);
  if (!r) throw NotDivisible("no group element y with c*y = x");
  return *r;
}

Element random_element(const GroupHandle& g, unsigned support_bound, unsigned coeff_bound,
                       std::uint64_t seed) {
  Rng rng(seed);
  unsigned rank = g->finite_rank().value_or(support_bound);
  unsigned window = std::min(support_bound, rank);
  Element::Coords c;
  for (std::uint32_t j = 0; j < window; ++j) {
    if (rng.flip()) continue;  // sparse support
    long long a = rng.in(-(long long)coeff_bound, coeff_bound);
    if (a == 0) continue;
    if (g->rational_coeffs()) {
      long long d = rng.in(1, coeff_bound);
      Int dd(d);
      while (dd % g->local_prime() == 0) dd /= g->local_prime();
      c.push_back({j, Rat(Int(a), dd)});
    } else {
      c.push_back({j, Rat(a)});
    }
  }
  // repair constrained cell sums in place, one in-cell coefficient each
  for (const auto& cd : g->cells()) {
    Int acc = 0;
    std::size_t slot = SIZE_MAX;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (g->coord_in_cell(c[i].first, cd.id)) {
        acc += to_int(c[i].second);
        slot = i;
      }
    Int rem = mod_norm(acc, cd.modulus);
    if (rem == 0) continue;
    if (slot != SIZE_MAX) {
      c[slot].second -= Rat(rem);
      if (c[slot].second == 0) c.erase(c.begin() + slot);
    } else {
      c.push_back({g->cell_coord_from(cd.id, 0), Rat(cd.modulus - rem)});
    }
  }
  return g->element(std::move(c));
}

std::string Element::to_string() const {
  if (coords_.empty()) return "0";
  bool t_basis = group_ && (group_->family() == Family::PolyMod ||
                            group_->family() == Family::PolyPart);
  std::ostringstream os;
  bool first = true;
  for (const auto& [j, c] : coords_) {
    Rat a = c;
    if (!first) {
      os << (a > 0 ? " + " : " - ");
      if (a < 0) a = -a;
    }
    first = false;
    if (t_basis && j == 0) { os << a; continue; }
    std::string basis = t_basis ? (j == 1 ? "t" : "t^" + std::to_string(j))
                                : "e" + std::to_string(j);
    if (a == 1) os << basis;
    else os << a << "*" << basis;
  }
  return os.str();
}

std::string format_element(const Element& x) { return x.to_string(); }

std::string Group::describe() const {
  std::ostringstream os;
  os << spec_.to_string();
  if (auto r = finite_rank()) os << " [index universe 0.." << (*r - 1) << "]";
  else os << " [index universe omega]";
  return os.str();
}

}  // namespace oag
