#include "oag/subgroup.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "oag/linalg.hpp"

namespace oag {

std::string ConvexSubgroup::to_string() const {
  if (is_zero()) return "zero";
  if (*level == 0) return "full";
  return "tail(" + std::to_string(*level) + ")";
}

SubgroupExpr conv(ConvexSubgroup d) { return SubgroupExpr(SubgroupExpr::NodeBox{SubgroupExpr::Conv{d}}); }
SubgroupExpr sharp_expr(ConvexSubgroup d, Int p, unsigned s) {
  return SubgroupExpr(SubgroupExpr::NodeBox{SubgroupExpr::Sharp{d, std::move(p), s}});
}
SubgroupExpr shift(SubgroupExpr s, Int p, unsigned k) {
  return SubgroupExpr(SubgroupExpr::NodeBox{SubgroupExpr::Shift{std::move(s), std::move(p), k}});
}
SubgroupExpr meet(SubgroupExpr a, SubgroupExpr b) {
  return SubgroupExpr(SubgroupExpr::NodeBox{SubgroupExpr::Meet{std::move(a), std::move(b)}});
}
SubgroupExpr join(SubgroupExpr a, SubgroupExpr b) {
  return SubgroupExpr(SubgroupExpr::NodeBox{SubgroupExpr::Join{std::move(a), std::move(b)}});
}
SubgroupExpr scale(Int p, unsigned r, SubgroupExpr s) {
  return SubgroupExpr(SubgroupExpr::NodeBox{SubgroupExpr::Scale{std::move(p), r, std::move(s)}});
}
SubgroupExpr full_group() { return conv(ConvexSubgroup::full()); }
SubgroupExpr zero_group() { return conv(ConvexSubgroup::zero()); }
SubgroupExpr pk_g(Int p, unsigned k) { return scale(std::move(p), k, full_group()); }

std::string SubgroupExpr::to_string() const {
  struct V {
    std::string operator()(const Conv& c) const { return c.d.to_string(); }
    std::string operator()(const Sharp& s) const {
      std::ostringstream os;
      os << "sharp(" << s.d.to_string() << "," << s.p << "," << s.s << ")";
      return os.str();
    }
    std::string operator()(const Shift& s) const {
      std::ostringstream os;
      os << "shift(" << s.inner.to_string() << "," << s.p << "," << s.k << ")";
      return os.str();
    }
    std::string operator()(const Meet& m) const {
      return "meet(" + m.a.to_string() + "," + m.b.to_string() + ")";
    }
    std::string operator()(const Join& j) const {
      return "join(" + j.a.to_string() + "," + j.b.to_string() + ")";
    }
    std::string operator()(const Scale& s) const {
      std::ostringstream os;
      os << "scale(" << s.p << "," << s.r << "," << s.inner.to_string() << ")";
      return os.str();
    }
  };
  return std::visit(V{}, node().v);
}

namespace {

StepVec<Int> clamp_div(const GroupHandle& g, const StepVec<Int>& d) {
  auto rank = g->finite_rank();
  if (!rank) return d;
  // coordinates at or beyond the rank are forced to zero, canonically
  StepVec<Int> mask = StepVec<Int>(Int(0)).with_prefix(*rank, Int(1));
  return StepVec<Int>::combine(d, mask, [](const Int& a, const Int& b) { return a * b; });
}

StepVec<Int> localize_div(const GroupHandle& g, const StepVec<Int>& d) {
  if (!g->rational_coeffs()) return d;
  const Int p = g->local_prime();
  return d.map([&](const Int& v) { return p_part(v, p); });
}

Profile canonicalize(const GroupHandle& g, Profile pr) {
  pr.div = localize_div(g, clamp_div(g, pr.div)).normalized();
  std::vector<CellCond> out;
  for (auto& c : pr.conds) {
    if (c.modulus == 1) continue;
    c.lam = c.lam.map([&](const Int& v) { return mod_norm(v, c.modulus); }).normalized();
    bool trivial = true;
    for (const auto& [s, v] : c.lam.pieces())
      if (v != 0) { trivial = false; break; }
    if (trivial) continue;
    bool dup = false;
    for (auto& o : out)
      if (o.cell == c.cell && o.modulus == c.modulus && o.lam == c.lam) { dup = true; break; }
    if (!dup) out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const CellCond& a, const CellCond& b) {
    if (a.cell != b.cell) return a.cell < b.cell;
    return a.modulus < b.modulus;
  });
  pr.conds = std::move(out);
  return pr;
}

std::vector<std::uint32_t> merged_breakpoints(const GroupHandle& g,
                                              std::initializer_list<const Profile*> ps) {
  std::vector<std::uint32_t> bs{0};
  for (const Profile* p : ps) {
    p->div.collect_breakpoints(bs);
    for (const auto& c : p->conds) c.lam.collect_breakpoints(bs);
  }
  if (auto r = g->finite_rank()) bs.push_back(*r);
  std::sort(bs.begin(), bs.end());
  bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
  return bs;
}

struct Segment {
  std::uint32_t start;
  std::uint32_t end;  // UINT32_MAX for the unbounded tail segment
};

std::vector<Segment> segments_of(const std::vector<std::uint32_t>& bs) {
  std::vector<Segment> segs;
  for (std::size_t i = 0; i < bs.size(); ++i)
    segs.push_back({bs[i], i + 1 < bs.size() ? bs[i + 1] : UINT32_MAX});
  return segs;
}

// first coordinate of `cell` within [seg.start, seg.end), or nullopt
std::optional<std::uint32_t> segment_cell_coord(const GroupHandle& g, const Segment& seg,
                                                unsigned cell) {
  std::uint32_t j = g->cell_coord_from(cell, seg.start);
  if (j >= seg.end) return std::nullopt;
  return j;
}

}  // namespace

Profile ambient_profile(const GroupHandle& g) {
  Profile pr;
  pr.div = StepVec<Int>(Int(1));
  for (const auto& cd : g->cells()) pr.conds.push_back({cd.id, cd.modulus, StepVec<Int>(Int(1))});
  return canonicalize(g, pr);
}

Profile profile_scale(const GroupHandle& g, const Int& c, const Profile& a) {
  Profile pr;
  pr.div = a.div.map([&](const Int& v) { return v * c; });
  for (const auto& cc : a.conds) pr.conds.push_back({cc.cell, cc.modulus * c, cc.lam});
  return canonicalize(g, pr);
}

Profile profile_meet(const GroupHandle& g, const Profile& a, const Profile& b) {
  Profile pr;
  pr.div = StepVec<Int>::combine(a.div, b.div,
                                 [](const Int& x, const Int& y) { return lcm_i(x, y); });
  pr.conds = a.conds;
  pr.conds.insert(pr.conds.end(), b.conds.begin(), b.conds.end());
  return canonicalize(g, pr);
}

// Exact sum of two profile subgroups. Coordinatewise the sum needs gcd(dP,dQ)
// to divide x_j; the canonical split there is u_j = nu*x_j with
// nu = (dP/g)*inv(dP/g mod dQ/g), leaving residual freedom lcm(dP,dQ)*Z per
// coordinate. Whether the cell congruences of both halves can be met over
// that freedom is a lattice condition on the cell sums of x; the Smith form
// of [freedom columns | diag(moduli)] turns it back into linear congruences.
Profile profile_sum(const GroupHandle& g, const Profile& a, const Profile& b) {
  Profile pr;
  pr.div = StepVec<Int>::combine(a.div, b.div,
                                 [](const Int& x, const Int& y) { return gcd_i(x, y); });

  for (const auto& cd : g->cells()) {
    std::vector<const CellCond*> ca, cb;
    for (const auto& c : a.conds)
      if (c.cell == cd.id) ca.push_back(&c);
    for (const auto& c : b.conds)
      if (c.cell == cd.id) cb.push_back(&c);
    if (ca.empty() && cb.empty()) continue;

    auto bs = merged_breakpoints(g, {&a, &b});
    auto segs = segments_of(bs);
    const std::size_t t = ca.size() + cb.size();

    struct Sig {
      Int nu;             // u* = nu * x on this signature's coordinates
      Int l;              // residual freedom granularity (0 = none)
      bool dead = false;  // both divisors zero: coordinate forced to 0
    };
    std::vector<int> seg_sig(segs.size(), -1);
    std::vector<Sig> sigs;
    std::vector<std::vector<Int>> sig_lam_a, sig_lam_b;
    for (std::size_t si = 0; si < segs.size(); ++si) {
      auto jc = segment_cell_coord(g, segs[si], cd.id);
      if (!jc) continue;
      std::uint32_t j = *jc;
      Int dp = a.div.at(j), dq = b.div.at(j);
      Sig sg;
      if (dp == 0 && dq == 0) {
        sg.dead = true;
      } else if (dp == 0) {
        sg.nu = 0; sg.l = 0;
      } else if (dq == 0) {
        sg.nu = 1; sg.l = 0;
      } else {
        Int gg = gcd_i(dp, dq);
        sg.nu = (dp / gg) * inv_mod(dp / gg, dq / gg);
        sg.l = lcm_i(dp, dq);
      }
      seg_sig[si] = static_cast<int>(sigs.size());
      sigs.push_back(sg);
      std::vector<Int> la, lb;
      for (auto* c : ca) la.push_back(c->lam.at(j));
      for (auto* c : cb) lb.push_back(c->lam.at(j));
      sig_lam_a.push_back(std::move(la));
      sig_lam_b.push_back(std::move(lb));
    }

    std::vector<Int> moduli;
    for (auto* c : ca) moduli.push_back(c->modulus);
    for (auto* c : cb) moduli.push_back(c->modulus);
    std::vector<std::vector<Int>> cols;
    for (std::size_t k = 0; k < sigs.size(); ++k) {
      if (sigs[k].dead || sigs[k].l == 0) continue;
      std::vector<Int> col(t, 0);
      for (std::size_t i = 0; i < ca.size(); ++i) col[i] = sig_lam_a[k][i] * sigs[k].l;
      for (std::size_t h = 0; h < cb.size(); ++h)
        col[ca.size() + h] = -sig_lam_b[k][h] * sigs[k].l;
      cols.push_back(std::move(col));
    }
    Mat m(t, cols.size() + t);
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t i = 0; i < t; ++i) m(i, j) = cols[j][i];
    for (std::size_t i = 0; i < t; ++i) m(i, cols.size() + i) = moduli[i];
    Smith sm = smith_form(m);

    Mat c(t, sigs.size());
    for (std::size_t k = 0; k < sigs.size(); ++k) {
      if (sigs[k].dead) continue;
      for (std::size_t i = 0; i < ca.size(); ++i) c(i, k) = sig_lam_a[k][i] * sigs[k].nu;
      for (std::size_t h = 0; h < cb.size(); ++h)
        c(ca.size() + h, k) = sig_lam_b[k][h] * (Int(1) - sigs[k].nu);
    }
    Mat uc = sm.u.mul(c);

    for (std::size_t row = 0; row < t; ++row) {
      Int d = sm.d(row, row);
      if (d < 0) d = -d;
      if (d == 1) continue;
      std::vector<std::pair<std::uint32_t, Int>> pieces;
      bool nontrivial = false;
      for (std::size_t si = 0; si < segs.size(); ++si) {
        Int v = 0;
        if (seg_sig[si] >= 0) {
          v = mod_norm(uc(row, static_cast<std::size_t>(seg_sig[si])), d);
          if (v != 0) nontrivial = true;
        }
        pieces.push_back({segs[si].start, v});
      }
      if (!nontrivial) continue;
      pr.conds.push_back({cd.id, d, StepVec<Int>::from_pieces(std::move(pieces))});
    }
  }
  return canonicalize(g, pr);
}

namespace {

Profile profile_conv(const GroupHandle& g, const ConvexSubgroup& d) {
  if (d.is_zero()) return canonicalize(g, Profile{StepVec<Int>(Int(0)), {}});
  Profile pr = ambient_profile(g);
  if (*d.level == 0) return pr;
  pr.div = pr.div.with_prefix(*d.level, Int(0));
  return canonicalize(g, pr);
}

Profile profile_expr(const GroupHandle& g, const SubgroupExpr& e);

Profile profile_sharp(const GroupHandle& g, ConvexSubgroup d, const Int& p, unsigned s) {
  if (s == 0) return ambient_profile(g);
  auto rank = g->finite_rank();
  if (d.is_zero() && !rank) {
    // Stabilized intersection of Tail(j) + p^sG over the whole chain:
    // membership is monotone in j and constant past any finite support,
    // leaving the everywhere-p^s-divisible elements of the group.
    Profile pr = ambient_profile(g);
    pr.div = pr.div.map([&](const Int& v) { return v * pow_i(p, s); });
    return canonicalize(g, pr);
  }
  std::uint32_t m = d.is_zero() ? *rank : *d.level;
  if (rank && m > *rank) m = *rank;
  if (m == 0) return ambient_profile(g);  // empty intersection over strict supergroups
  Profile pk = profile_scale(g, pow_i(p, s), ambient_profile(g));
  Profile acc;
  bool first = true;
  for (std::uint32_t j = 0; j < m; ++j) {
    Profile term = profile_sum(g, profile_conv(g, ConvexSubgroup::tail(j)), pk);
    acc = first ? term : profile_meet(g, acc, term);
    first = false;
  }
  return acc;
}

Profile profile_expr(const GroupHandle& g, const SubgroupExpr& e) {
  struct V {
    const GroupHandle& g;
    Profile operator()(const SubgroupExpr::Conv& c) const { return profile_conv(g, c.d); }
    Profile operator()(const SubgroupExpr::Sharp& sh) const {
      return profile_sharp(g, sh.d, sh.p, sh.s);
    }
    Profile operator()(const SubgroupExpr::Shift& sh) const {
      Profile inner = profile_expr(g, sh.inner);
      Profile pk = profile_scale(g, pow_i(sh.p, sh.k), ambient_profile(g));
      return profile_sum(g, inner, pk);
    }
    Profile operator()(const SubgroupExpr::Meet& m) const {
      return profile_meet(g, profile_expr(g, m.a), profile_expr(g, m.b));
    }
    Profile operator()(const SubgroupExpr::Join& j) const {
      return profile_sum(g, profile_expr(g, j.a), profile_expr(g, j.b));
    }
    Profile operator()(const SubgroupExpr::Scale& sc) const {
      return profile_scale(g, pow_i(sc.p, sc.r), profile_expr(g, sc.inner));
    }
  };
  return std::visit(V{g}, e.node().v);
}

void validate_expr(const GroupHandle& g, const SubgroupExpr& e) {
  struct V {
    const GroupHandle& g;
    void check_level(const ConvexSubgroup& c) const {
      auto rank = g->finite_rank();
      if (rank && c.level && *c.level > *rank)
        throw UnknownConvex("tail level " + std::to_string(*c.level) + " exceeds rank " +
                            std::to_string(*rank));
    }
    void operator()(const SubgroupExpr::Conv& c) const { check_level(c.d); }
    void operator()(const SubgroupExpr::Sharp& s) const { check_level(s.d); }
    void operator()(const SubgroupExpr::Shift& s) const { validate_expr(g, s.inner); }
    void operator()(const SubgroupExpr::Meet& m) const {
      validate_expr(g, m.a);
      validate_expr(g, m.b);
    }
    void operator()(const SubgroupExpr::Join& j) const {
      validate_expr(g, j.a);
      validate_expr(g, j.b);
    }
    void operator()(const SubgroupExpr::Scale& s) const { validate_expr(g, s.inner); }
  };
  std::visit(V{g}, e.node().v);
}

}  // namespace

Profile profile_of(const GroupHandle& g, const SubgroupExpr& e) { return profile_expr(g, e); }

namespace {

// Binding is pure, so repeated binds of the same expression against the same
// group are served from a process-wide memo. Handles are pinned by the cache.
struct BindCache {
  std::mutex mu;
  std::map<std::pair<const Group*, std::string>, BoundSubgroup> entries;
};

BindCache& bind_cache() {
  static BindCache c;
  return c;
}

}  // namespace

BoundSubgroup bind_subgroup(const GroupHandle& g, const SubgroupExpr& e) {
  auto key = std::make_pair(g.get(), e.to_string());
  auto& cache = bind_cache();
  {
    std::lock_guard<std::mutex> lock(cache.mu);
    auto it = cache.entries.find(key);
    if (it != cache.entries.end()) return it->second;
  }
  validate_expr(g, e);
  BoundSubgroup b{g, e, profile_of(g, e)};
  std::lock_guard<std::mutex> lock(cache.mu);
  cache.entries.emplace(std::move(key), b);
  return b;
}

bool profile_member(const GroupHandle& g, const Profile& p, const Element& x) {
  const bool local = g->rational_coeffs();
  for (const auto& [j, c] : x.coords()) {
    const Int& d = p.div.at(j);
    if (local) {
      if (!divides_local(d, c, g->local_prime())) return false;
    } else {
      if (!divides(d, to_int(c))) return false;
    }
  }
  for (const auto& cc : p.conds) {
    Int acc = 0;
    for (const auto& [j, c] : x.coords())
      if (g->coord_in_cell(j, cc.cell)) acc += cc.lam.at(j) * to_int(c);
    if (acc % cc.modulus != 0) return false;
  }
  return true;
}

bool member(const BoundSubgroup& s, const Element& x) {
  if (x.group() != s.group) throw GroupMismatch("element from a different group");
  return profile_member(s.group, s.prof, x);
}

bool profiles_equal(const GroupHandle& g, const Profile& a, const Profile& b) {
  if (!(a.div == b.div)) return false;
  auto bs = merged_breakpoints(g, {&a, &b});
  auto segs = segments_of(bs);
  for (const auto& cd : g->cells()) {
    std::vector<std::uint32_t> live_coord;
    for (std::size_t si = 0; si < segs.size(); ++si) {
      auto jc = segment_cell_coord(g, segs[si], cd.id);
      if (!jc || a.div.at(*jc) == 0) continue;
      live_coord.push_back(*jc);
    }
    // condition systems compared on the substituted free variables x_j = d_j y_j
    auto kernel_of = [&](const Profile& p) {
      std::vector<const CellCond*> cs;
      for (const auto& c : p.conds)
        if (c.cell == cd.id) cs.push_back(&c);
      Mat rows(cs.size(), live_coord.size());
      std::vector<Int> moduli;
      for (std::size_t i = 0; i < cs.size(); ++i) {
        moduli.push_back(cs[i]->modulus);
        for (std::size_t k = 0; k < live_coord.size(); ++k)
          rows(i, k) = cs[i]->lam.at(live_coord[k]) * a.div.at(live_coord[k]);
      }
      return congruence_kernel(rows, moduli);
    };
    if (!(kernel_of(a) == kernel_of(b))) return false;
  }
  return true;
}

// ---- spine ----------------------------------------------------------------

SpineTriple spine_maps(const GroupHandle& g, const Int& n, const Element& x) {
  SpineTriple out;
  const bool local = g->rational_coeffs();
  std::optional<std::uint32_t> first_nondiv;
  for (const auto& [j, c] : x.coords()) {
    bool div = local ? divides_local(n, c, g->local_prime()) : divides(n, to_int(c));
    if (!div) { first_nondiv = j; break; }
  }
  auto clamp = [&](std::uint32_t lvl) {
    if (auto r = g->finite_rank(); r && lvl >= *r) return ConvexSubgroup::zero();
    return ConvexSubgroup::tail(lvl);
  };
  // Largest convex D with x outside D + nG: the prefix closed form makes the
  // scan a search for the first coefficient n cannot divide; when every
  // coefficient divides, the value is the zero group whether or not x lies in
  // nG (the convention for x in nG and the realized infinite level agree).
  out.s_point = first_nondiv ? clamp(*first_nondiv + 1) : ConvexSubgroup::zero();

  if (x.is_zero()) {
    out.t_point = ConvexSubgroup::zero();       // empty union
    out.t_plus_point = ConvexSubgroup::zero();  // every spine member contains 0
    return out;
  }
  std::uint32_t j1 = x.coords().front().first;
  out.t_point = clamp(j1 + 1);
  if (j1 == 0) {
    out.t_plus_point = ConvexSubgroup::full();
    out.t_plus_empty_intersection = true;
  } else {
    out.t_plus_point = clamp(j1);
  }
  return out;
}

BoundSubgroup sharp(const GroupHandle& g, ConvexSubgroup d, const Int& p, unsigned s) {
  return bind_subgroup(g, sharp_expr(d, p, s));
}

// ---- convexification ------------------------------------------------------

namespace {

std::optional<Element> spine_point_witness(const GroupHandle& g, const ConvexSubgroup& alpha,
                                           const Int& p, unsigned s) {
  std::vector<Element> probes;
  const Int ps = pow_i(p, s);
  auto try_push = [&](Element::Coords c) {
    try { probes.push_back(g->element(std::move(c))); } catch (const ConstraintViolation&) {}
  };
  if (!alpha.is_zero() && *alpha.level >= 1) {
    std::uint32_t m = *alpha.level;
    try_push({{m - 1, Rat(1)}});
    try { probes.push_back(g->repaired_unit(m - 1, Rat(1))); } catch (const ConstraintViolation&) {}
  } else if (alpha.is_zero()) {
    switch (g->family()) {
      case Family::PolyMod: {
        Int e = pow_i(g->spec().p, g->spec().n);
        try_push({{0u, Rat(lcm_i(ps, e))}});
        try_push({{0u, Rat(ps * e)}});
        break;
      }
      case Family::PolyPart: {
        for (const auto& cd : g->cells()) {
          std::uint32_t j1 = g->cell_coord_from(cd.id, 0);
          std::uint32_t j2 = g->cell_coord_from(cd.id, j1 + 1);
          try_push({{j1, Rat(ps)}});
          if (cd.modulus > ps) try_push({{j1, Rat(ps)}, {j2, Rat(cd.modulus - ps)}});
          try_push({{j1, Rat(ps)}, {j2, Rat(ps * (cd.modulus - 1))}});
        }
        break;
      }
      default:
        break;
    }
  }
  // A witness must realize the level through the defining property, not the
  // "divisible element" convention: it has to escape alpha + p^sG itself.
  Profile escape = profile_sum(g, profile_conv(g, alpha),
                               profile_scale(g, ps, ambient_profile(g)));
  for (const auto& a : probes)
    if (spine_maps(g, ps, a).s_point == alpha && !profile_member(g, escape, a)) return a;
  return std::nullopt;
}

}  // namespace

ConvexifyResult convexify_sharp(const GroupHandle& g, ConvexSubgroup alpha, const Int& p,
                                unsigned s) {
  ConvexifyResult res{};
  auto rank = g->finite_rank();
  if (rank && alpha.level && *alpha.level > *rank) alpha = ConvexSubgroup::zero();
  if (rank && alpha.level && *alpha.level == *rank) alpha = ConvexSubgroup::zero();
  Profile target = profile_sharp(g, alpha, p, s);
  Profile pk = profile_scale(g, pow_i(p, s), ambient_profile(g));
  auto matches = [&](const ConvexSubgroup& d) {
    Profile cand = profile_sum(g, profile_conv(g, d), pk);
    return profiles_equal(g, cand, target);
  };

  // chain intersection candidate
  ConvexSubgroup d1 = ConvexSubgroup::zero();
  bool alpha_is_chain_intersection;
  if (alpha.is_zero()) {
    d1 = rank ? ConvexSubgroup::tail(*rank - 1) : ConvexSubgroup::zero();
    alpha_is_chain_intersection = !rank;
  } else if (*alpha.level == 0) {
    d1 = ConvexSubgroup::full();  // empty intersection
    alpha_is_chain_intersection = true;
  } else {
    d1 = ConvexSubgroup::tail(*alpha.level - 1);
    alpha_is_chain_intersection = false;
  }
  res.cond_chain_intersection = alpha_is_chain_intersection;

  if (matches(d1)) res.witness = d1;
  if (!res.witness) {
    // qualifying strict supergroups on the chain, largest first
    std::uint32_t limit = alpha.is_zero() ? (rank ? *rank : 12u) : *alpha.level;
    for (std::uint32_t j = 0; j < limit && !res.witness; ++j)
      if (matches(ConvexSubgroup::tail(j))) res.witness = ConvexSubgroup::tail(j);
  }

  // reported condition (1): between any strictly larger chain member and
  // alpha there are infinitely many distinct classes beta + p^sG. Only the
  // infinite-level alpha of an omega-indexed family can satisfy this, and
  // there it reduces to consecutive tails staying distinct (window-checked;
  // the structure is eventually constant, so a window certifies cofinality).
  if (alpha.is_zero() && !rank) {
    bool distinct = true;
    Profile prev = profile_sum(g, profile_conv(g, ConvexSubgroup::tail(0)), pk);
    for (std::uint32_t j = 1; j <= 8; ++j) {
      Profile cur = profile_sum(g, profile_conv(g, ConvexSubgroup::tail(j)), pk);
      if (profiles_equal(g, prev, cur)) { distinct = false; break; }
      prev = cur;
    }
    res.cond_infinitely_many_between = distinct;
  } else if (!alpha.is_zero() && *alpha.level == 0) {
    res.cond_infinitely_many_between = true;  // vacuous: nothing above the full group
  } else {
    res.cond_infinitely_many_between = false;
  }

  res.spine_witness = spine_point_witness(g, alpha, p, s);
  res.cond_realized_as_spine_point = res.spine_witness.has_value();
  return res;
}

// ---- equality -------------------------------------------------------------

std::vector<Element> generators(const BoundSubgroup& s, unsigned deep) {
  const GroupHandle& g = s.group;
  const Profile& pr = s.prof;
  std::vector<Element> out;
  auto bs = merged_breakpoints(g, {&pr});
  auto segs = segments_of(bs);

  // regions: (segment x cell-or-free) with nonzero divisor; representatives
  struct Region {
    std::vector<std::uint32_t> reps;
    Int d;
  };
  std::vector<Region> regions;
  auto rank = g->finite_rank();
  for (std::size_t si = 0; si < segs.size(); ++si) {
    const auto& seg = segs[si];
    std::uint32_t end = seg.end;
    if (rank && end > *rank) end = *rank;
    if (seg.start >= end) continue;
    Int d = pr.div.at(seg.start);
    if (d == 0) continue;
    bool infinite_seg = seg.end == UINT32_MAX && !rank;
    std::vector<std::vector<std::uint32_t>> buckets;  // per cell + free bucket
    std::vector<std::uint32_t> free_bucket;
    for (const auto& cd : g->cells()) {
      std::vector<std::uint32_t> reps;
      unsigned want = infinite_seg ? (2 + deep) : UINT32_MAX;
      for (unsigned k = 0; reps.size() < want; ++k) {
        std::uint32_t j = g->cell_coord_from(cd.id, seg.start, k);
        if (j >= end) break;
        reps.push_back(j);
      }
      if (!reps.empty()) buckets.push_back(std::move(reps));
    }
    {  // coordinates in no constrained cell
      unsigned want = infinite_seg ? (2 + deep) : UINT32_MAX;
      for (std::uint32_t j = seg.start; j < end && free_bucket.size() < want; ++j) {
        bool in_cell = false;
        for (const auto& cd : g->cells())
          if (g->coord_in_cell(j, cd.id)) { in_cell = true; break; }
        if (!in_cell) free_bucket.push_back(j);
        if (!infinite_seg && j == end - 1) break;
        if (infinite_seg && j > seg.start + 4 * (2 + deep) + 64) break;  // scan guard
      }
      if (!free_bucket.empty()) buckets.push_back(std::move(free_bucket));
    }
    for (auto& b : buckets) regions.push_back({std::move(b), d});
  }

  // differences within each region
  for (const auto& r : regions)
    for (std::size_t i = 0; i + 1 < r.reps.size(); ++i) {
      Element e = g->element({{r.reps[i], Rat(r.d)}, {r.reps[i + 1], Rat(-r.d)}});
      out.push_back(std::move(e));
    }

  // kernel combinations over one representative per region
  Mat rows(pr.conds.size(), regions.size());
  std::vector<Int> moduli;
  for (std::size_t i = 0; i < pr.conds.size(); ++i) {
    const auto& cc = pr.conds[i];
    moduli.push_back(cc.modulus);
    for (std::size_t k = 0; k < regions.size(); ++k) {
      std::uint32_t j = regions[k].reps.front();
      rows(i, k) = g->coord_in_cell(j, cc.cell) ? cc.lam.at(j) * regions[k].d : Int(0);
    }
  }
  Mat ker = congruence_kernel(rows, moduli);
  for (std::size_t c = 0; c < ker.cols(); ++c) {
    Element::Coords coords;
    for (std::size_t k = 0; k < regions.size(); ++k)
      if (ker(k, c) != 0) coords.push_back({regions[k].reps.front(), Rat(ker(k, c) * regions[k].d)});
    if (coords.empty()) continue;
    out.push_back(g->element(std::move(coords)));
  }
  return out;
}

EqResult subgroup_eq(const BoundSubgroup& a, const BoundSubgroup& b, unsigned samples,
                     std::uint64_t seed) {
  if (a.group != b.group) throw GroupMismatch("subgroups bound to different groups");
  if (profiles_equal(a.group, a.prof, b.prof)) return {EqVerdict::EqualByNormalForm, std::nullopt};
  // witness search: pooled generators of each side tried against the other,
  // then random small combinations of them
  auto probe = [&](const BoundSubgroup& from, const BoundSubgroup& against)
      -> std::optional<Element> {
    auto gens = generators(from, 3);
    for (const auto& g : gens)
      if (!member(against, g)) return g;
    Rng rng(seed ^ hash_str(from.expr.to_string().c_str()));
    for (unsigned i = 0; i < samples; ++i) {
      Element x = from.group->zero();
      for (const auto& g : gens)
        if (rng.below(3) == 0) x = add(x, scalar_mul(Int(rng.in(-2, 2)), g));
      if (member(from, x) && !member(against, x)) return x;
    }
    return std::nullopt;
  };
  if (auto w = probe(a, b)) return {EqVerdict::NotEqual, w};
  if (auto w = probe(b, a)) return {EqVerdict::NotEqual, w};
  return {EqVerdict::UndecidedAfterSampling, std::nullopt};
}

std::string describe(const BoundSubgroup& s) {
  const GroupHandle& g = s.group;
  if (profiles_equal(g, s.prof, profile_of(g, zero_group()))) return "zero";
  if (profiles_equal(g, s.prof, ambient_profile(g))) return "full";
  std::uint32_t window = s.prof.div.max_breakpoint() + 2;
  for (std::uint32_t m = 1; m <= window; ++m)
    if (profiles_equal(g, s.prof, profile_of(g, conv(ConvexSubgroup::tail(m)))))
      return "tail(" + std::to_string(m) + ")";
  return s.expr.to_string();
}

}  // namespace oag
