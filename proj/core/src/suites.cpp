#include "oag/suites.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include <nlohmann/json.hpp>

#include "oag/cosetlogic.hpp"
#include "oag/parse.hpp"
#include "oag/rng.hpp"

namespace oag {

using json = nlohmann::ordered_json;

bool VerificationReport::passed() const {
  for (const auto& c : cases)
    if (!c.pass) return false;
  return true;
}

bool VerificationReport::inconclusive() const {
  for (const auto& c : cases)
    if (c.inconclusive) return true;
  return false;
}

std::string VerificationReport::to_json(bool include_timing) const {
  json j;
  j["lemma"] = lemma;
  j["group"] = group;
  j["seed"] = seed;
  j["cap"] = cap;
  j["samples"] = samples;
  j["cases_run"] = cases.size();
  j["passed"] = passed();
  j["inconclusive"] = inconclusive();
  j["cases"] = json::array();
  for (const auto& c : cases) {
    json cj;
    cj["name"] = c.name;
    cj["pass"] = c.pass;
    if (c.inconclusive) cj["inconclusive"] = true;
    if (!c.witness.empty()) cj["witness"] = c.witness;
    j["cases"].push_back(cj);
  }
  if (include_timing) j["wall_ms"] = wall_ms;
  return j.dump(2);
}

const std::vector<std::string>& registry_ids() {
  static const std::vector<std::string> ids = {
      "keylemma", "equal-p-div", "same-above", "nonconvex-cond", "inf-right", "left-nc",
      "aps-quot", "idx-pow",     "desc-inf",   "tower",          "qe32",      "qe33",
      "dim71",    "dim72",       "cex72",      "cex73"};
  return ids;
}

bool registry_has(const std::string& id) {
  const auto& ids = registry_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

GroupSpec spec_72(unsigned cells) {
  std::vector<PartConstraint> cs;
  for (unsigned i = 0; i < cells; ++i) cs.push_back({2, 2, i});
  return GroupSpec::poly_part(std::move(cs));
}

GroupSpec default_spec_for(const std::string& id) {
  if (id == "idx-pow" || id == "desc-inf") return GroupSpec::free_lex(3);
  if (id == "dim71") return GroupSpec::poly_mod(2, 2);
  if (id == "dim72") return GroupSpec::poly_part({{2, 2, 0}, {2, 2, 1}, {3, 1, 2}});
  if (id == "cex72" || id == "inf-right" || id == "left-nc") return spec_72();
  if (id == "cex73" || id == "equal-p-div" || id == "same-above") return GroupSpec::local_lex(2);
  if (id == "tower" || id == "aps-quot" || id == "keylemma" || id == "nonconvex-cond")
    return GroupSpec::poly_mod(2, 2);
  return GroupSpec::poly_mod(2, 2);  // qe32/qe33 carry their own finite ambients
}

namespace {

std::vector<Int> family_primes(const GroupSpec& spec) {
  switch (spec.family) {
    case Family::FreeLex: return {Int(2), Int(3)};
    case Family::LocalLex:
    case Family::PolyMod: return {spec.p};
    case Family::PolyPart: {
      std::vector<Int> ps;
      for (const auto& c : spec.constraints)
        if (std::find(ps.begin(), ps.end(), c.p) == ps.end()) ps.push_back(c.p);
      return ps;
    }
  }
  return {Int(2)};
}

std::string idx_str(const IndexValue& v) { return v.to_string(); }

using Results = std::vector<CaseResult>;

void suite_keylemma(const LemmaCase& c, Results& out) {
  auto g = make_group(c.spec);
  for (const Int& p : family_primes(c.spec)) {
    CaseResult cr{"descent p=" + p.str(), true, false, ""};
    Rng rng(c.seed ^ hash_str("keylemma"));
    for (unsigned i = 0; i < c.samples && cr.pass; ++i) {
      Element x = random_element(g, 5, 9, rng.next());
      std::vector<ConvexSubgroup> chain{ConvexSubgroup::zero()};
      for (std::uint32_t m = 1; m <= x.max_support() + 2; ++m)
        chain.push_back(ConvexSubgroup::tail(m));
      for (const auto& d : chain) {
        for (unsigned s = 1; s <= c.smax && cr.pass; ++s)
          for (unsigned r = 1; r <= s; ++r) {
            bool lhs = member(sharp(g, d, p, s), x) && member(bind_subgroup(g, pk_g(p, r)), x);
            auto y = try_divide(x, pow_i(p, r));
            bool rhs = y.has_value() && member(sharp(g, d, p, s - r), *y);
            if (lhs != rhs) {
              cr.pass = false;
              cr.witness = "x=" + x.to_string() + " D=" + d.to_string() + " r=" +
                           std::to_string(r) + " s=" + std::to_string(s);
              break;
            }
          }
        if (!cr.pass) break;
      }
    }
    out.push_back(cr);
  }
}

void suite_equal_p_div(const LemmaCase& c, Results& out) {
  auto g = make_group(c.spec);
  for (Int p : {Int(2), Int(3)}) {
    CaseResult cr{"lift p=" + p.str(), true, false, ""};
    unsigned premise_hits = 0;
    for (std::uint32_t a = 0; a <= 3; ++a)
      for (std::uint32_t b = 0; b <= 3; ++b) {
        BoundSubgroup la, lb;
        try {
          la = bind_subgroup(g, shift(conv(ConvexSubgroup::tail(a)), p, 1));
          lb = bind_subgroup(g, shift(conv(ConvexSubgroup::tail(b)), p, 1));
        } catch (const UnknownConvex&) { continue; }
        if (!profiles_equal(g, la.prof, lb.prof)) continue;
        ++premise_hits;
        for (unsigned r = 2; r <= c.rmax; ++r) {
          auto ha = bind_subgroup(g, shift(conv(ConvexSubgroup::tail(a)), p, r));
          auto hb = bind_subgroup(g, shift(conv(ConvexSubgroup::tail(b)), p, r));
          if (!profiles_equal(g, ha.prof, hb.prof)) {
            cr.pass = false;
            cr.witness = "a=" + std::to_string(a) + " b=" + std::to_string(b) +
                         " r=" + std::to_string(r);
          }
        }
      }
    cr.name += " (premise held " + std::to_string(premise_hits) + "x)";
    out.push_back(cr);
  }
}

void suite_same_above(const LemmaCase& c, Results& out) {
  auto g = make_group(c.spec);
  auto distinct_classes = [&](std::uint32_t lo, std::uint32_t hi, const Int& p, unsigned s) {
    // distinct subgroup values Tail(j) + p^sG for lo < Tail(j) < hi on the chain
    std::vector<Profile> seen;
    for (std::uint32_t j = lo + 1; j < hi; ++j) {
      Profile pr;
      try {
        pr = profile_of(g, shift(conv(ConvexSubgroup::tail(j)), p, s));
      } catch (const UnknownConvex&) { continue; }
      bool dup = false;
      for (const auto& o : seen)
        if (profiles_equal(g, o, pr)) { dup = true; break; }
      if (!dup) seen.push_back(pr);
    }
    return seen.size();
  };
  for (const Int& p : family_primes(c.spec)) {
    CaseResult cr{"class counts p=" + p.str(), true, false, ""};
    for (std::uint32_t lo = 0; lo <= 2 && cr.pass; ++lo)
      for (std::uint32_t hi = lo + 2; hi <= 6; ++hi)
        for (unsigned s = 2; s <= c.smax; ++s) {
          auto n1 = distinct_classes(lo, hi, p, 1);
          auto ns = distinct_classes(lo, hi, p, s);
          if (n1 != ns) {
            cr.pass = false;
            cr.witness = "between tail(" + std::to_string(hi) + ") and tail(" +
                         std::to_string(lo) + "), s=" + std::to_string(s);
            break;
          }
        }
    out.push_back(cr);
  }
}

void suite_nonconvex_cond(const LemmaCase& c, Results& out) {
  auto g = make_group(c.spec);
  for (const Int& p : family_primes(c.spec)) {
    CaseResult cr{"conditions p=" + p.str(), true, false, ""};
    for (unsigned s = 1; s <= c.smax && cr.pass; ++s) {
      std::vector<ConvexSubgroup> alphas{ConvexSubgroup::zero(), ConvexSubgroup::full(),
                                         ConvexSubgroup::tail(1), ConvexSubgroup::tail(2)};
      for (const auto& a : alphas) {
        auto r = convexify_sharp(g, a, p, s);
        bool all3 = r.cond_infinitely_many_between && r.cond_chain_intersection &&
                    r.cond_realized_as_spine_point;
        if (r.witness.has_value() != !all3) {
          cr.pass = false;
          cr.witness = "alpha=" + a.to_string() + " s=" + std::to_string(s);
          break;
        }
      }
    }
    out.push_back(cr);
  }
}

// requires a sharp value that is not a shifted convex subgroup
ConvexSubgroup nonconvex_alpha_or_throw(const GroupHandle& g, const Int& p, unsigned s) {
  auto r = convexify_sharp(g, ConvexSubgroup::zero(), p, s);
  if (r.witness.has_value())
    throw IncompatibleFamily("every sharp value is a shifted convex subgroup here");
  return ConvexSubgroup::zero();
}

void suite_inf_right(const LemmaCase& c, Results& out) {
  auto g = make_group(c.spec);
  const Int p = family_primes(c.spec).front();
  for (unsigned s = 1; s <= c.smax; ++s) {
    auto alpha = nonconvex_alpha_or_throw(g, p, s);
    for (unsigned r = 1; r <= s; ++r) {
      CaseResult cr{"s=" + std::to_string(s) + " r=" + std::to_string(r), true, false, ""};
      for (unsigned cap : {c.cap, 2 * c.cap}) {
        auto iv = index(bind_subgroup(g, shift(sharp_expr(alpha, p, s), p, r - 1)),
                        bind_subgroup(g, shift(sharp_expr(alpha, p, s), p, r)), cap);
        if (iv.is_finite()) {
          cr.pass = false;
          cr.witness = "index closed at " + idx_str(iv) + " with cap " + std::to_string(cap);
        }
      }
      out.push_back(cr);
    }
  }
}

void suite_left_nc(const LemmaCase& c, Results& out) {
  auto g = make_group(c.spec);
  const Int p = family_primes(c.spec).front();
  for (unsigned s = 1; s <= c.smax; ++s) {
    auto alpha = nonconvex_alpha_or_throw(g, p, s);
    std::vector<std::pair<std::string, SubgroupExpr>> ks = {
        {"tail(1)", conv(ConvexSubgroup::tail(1))},
        {"tail(2)", conv(ConvexSubgroup::tail(2))},
        {"sharp(tail(2))", sharp_expr(ConvexSubgroup::tail(2), p, s)}};
    for (unsigned r = 1; r <= s; ++r)
      for (const auto& [name, k] : ks) {
        CaseResult cr{"K=" + name + " s=" + std::to_string(s) + " r=" + std::to_string(r),
                      true, false, ""};
        auto b = bind_subgroup(g, shift(sharp_expr(alpha, p, s), p, r));
        for (unsigned cap : {c.cap, 2 * c.cap}) {
          auto iv = index(bind_subgroup(g, shift(k, p, r)), b, cap);
          if (iv.is_finite()) {
            cr.pass = false;
            cr.witness = "[K+p^rG : S#+p^rG] = " + idx_str(iv);
          }
          // the second quotient: S# + (K cap p^(r-1)G) + p^rG over S# + p^rG
          auto mid = bind_subgroup(
              g, join(sharp_expr(alpha, p, s), join(meet(k, pk_g(p, r - 1)), pk_g(p, r))));
          auto iv2 = index(mid, b, cap);
          if (iv2.is_finite()) {
            cr.pass = false;
            cr.witness += " [S#+K^cut+p^rG : S#+p^rG] = " + idx_str(iv2);
          }
        }
        out.push_back(cr);
      }
  }
}

void suite_aps_quot(const LemmaCase& c, Results& out) {
  auto g = make_group(c.spec);
  for (const Int& p : family_primes(c.spec))
    for (auto alpha : {ConvexSubgroup::zero(), ConvexSubgroup::tail(1)})
      for (unsigned s = 2; s <= c.smax; ++s)
        for (unsigned r = 1; r < s && r <= c.rmax; ++r) {
          CaseResult cr{"alpha=" + alpha.to_string() + " p=" + p.str() + " s=" +
                            std::to_string(s) + " r=" + std::to_string(r),
                        true, false, ""};
          auto lhs = index(bind_subgroup(g, shift(sharp_expr(alpha, p, s - 1), p, r)),
                           bind_subgroup(g, shift(sharp_expr(alpha, p, s), p, r)), c.cap);
          IndexValue rhs = IndexValue::finite(1);
          for (unsigned i = 1; i <= r; ++i) {
            auto f = index(bind_subgroup(g, shift(sharp_expr(alpha, p, s - i), p, 1)),
                           bind_subgroup(g, shift(sharp_expr(alpha, p, s - i + 1), p, 1)), c.cap);
            if (!f.is_finite() || !rhs.is_finite()) rhs = IndexValue::at_least(c.cap);
            else rhs = IndexValue::finite(rhs.value * f.value);
          }
          bool ok = lhs.is_finite() == rhs.is_finite() &&
                    (!lhs.is_finite() || lhs.value == rhs.value);
          if (!ok) {
            cr.pass = false;
            cr.witness = "lhs=" + idx_str(lhs) + " rhs=" + idx_str(rhs);
          }
          out.push_back(cr);
        }
}

void suite_idx_pow(const LemmaCase& c, Results& out) {
  if (c.spec.family != Family::FreeLex)
    throw IncompatibleFamily("exact index powers need the finite-rank family");
  unsigned k = c.spec.rank;
  auto g = make_group(c.spec);
  for (Int p : {Int(2), Int(3)})
    for (unsigned r = 1; r <= c.rmax; ++r) {
      CaseResult cr{"p=" + p.str() + " r=" + std::to_string(r), true, false, ""};
      Int expect = pow_i(p, r * k);
      auto iv = index(bind_subgroup(g, full_group()), bind_subgroup(g, pk_g(p, r)),
                      c.cap);
      if (!(iv == IndexValue::finite(expect))) {
        cr.pass = false;
        cr.witness = "got " + idx_str(iv) + ", expected finite(" + expect.str() + ")";
      }
      out.push_back(cr);
    }
}

void suite_desc_inf(const LemmaCase& c, Results& out) {
  auto g = make_group(c.spec);
  if (c.spec.family == Family::FreeLex) {
    unsigned k = c.spec.rank;
    for (Int p : {Int(2), Int(3)})
      for (unsigned r = 1; r <= c.rmax; ++r)
        for (unsigned m = 0; m <= k; ++m) {
          CaseResult cr{"p=" + p.str() + " r=" + std::to_string(r) + " m=" + std::to_string(m),
                        true, false, ""};
          auto iv = index(bind_subgroup(g, shift(conv(ConvexSubgroup::tail(m)), p, r)),
                          bind_subgroup(g, pk_g(p, r)), c.cap);
          Int expect = pow_i(p, r * (k - m));
          if (!(iv == IndexValue::finite(expect))) {
            cr.pass = false;
            cr.witness = "got " + idx_str(iv) + ", expected finite(" + expect.str() + ")";
          }
          out.push_back(cr);
        }
    return;
  }
  const Int p = family_primes(c.spec).front();
  std::vector<std::pair<std::string, SubgroupExpr>> ks = {
      {"tail(2)", conv(ConvexSubgroup::tail(2))},
      {"sharp(zero)", sharp_expr(ConvexSubgroup::zero(), p, c.smax)}};
  for (unsigned r = 2; r <= c.rmax; ++r)
    for (const auto& [name, k] : ks) {
      CaseResult cr{"K=" + name + " r=" + std::to_string(r), true, false, ""};
      auto lhs = index(bind_subgroup(g, shift(k, p, r)), bind_subgroup(g, pk_g(p, r)), c.cap);
      auto cut = join(meet(k, pk_g(p, r - 1)), pk_g(p, r));
      auto rhs = index(bind_subgroup(g, cut), bind_subgroup(g, pk_g(p, r)), c.cap);
      if (lhs.is_finite() != rhs.is_finite()) {
        cr.pass = false;
        cr.witness = "lhs=" + idx_str(lhs) + " rhs=" + idx_str(rhs);
      }
      out.push_back(cr);
    }
}

void suite_tower(const LemmaCase& c, Results& out) {
  auto g = make_group(c.spec);
  for (const Int& p : family_primes(c.spec))
    for (auto alpha : {ConvexSubgroup::zero(), ConvexSubgroup::tail(1)})
      for (unsigned s = 1; s <= c.smax; ++s)
        for (unsigned r = 1; r <= s && r <= c.rmax; ++r) {
          CaseResult cr{"alpha=" + alpha.to_string() + " p=" + p.str() + " s=" +
                            std::to_string(s) + " r=" + std::to_string(r),
                        true, false, ""};
          auto lhs = index(bind_subgroup(g, shift(sharp_expr(alpha, p, s), p, r)),
                           bind_subgroup(g, pk_g(p, r)), c.cap);
          IndexValue rhs = IndexValue::finite(1);
          for (unsigned i = 0; i < r; ++i) {
            auto f = index(bind_subgroup(g, shift(sharp_expr(alpha, p, s - i), p, 1)),
                           bind_subgroup(g, pk_g(p, 1)), c.cap);
            if (!f.is_finite() || !rhs.is_finite()) rhs = IndexValue::at_least(c.cap);
            else rhs = IndexValue::finite(rhs.value * f.value);
          }
          bool ok = lhs.is_finite() == rhs.is_finite() &&
                    (!lhs.is_finite() || lhs.value == rhs.value);
          if (!ok) {
            cr.pass = false;
            cr.witness = "lhs=" + idx_str(lhs) + " rhs=" + idx_str(rhs);
          }
          out.push_back(cr);
        }
}

void suite_qe32(const LemmaCase& c, Results& out) {
  using namespace cosetlogic;
  std::vector<std::vector<std::int64_t>> ambients = {{4, 4}, {8}, {9, 3}, {8, 8}};
  Rng rng(c.seed ^ hash_str("qe32"));
  for (const auto& mods : ambients) {
    auto amb = make_ambient(mods);
    std::ostringstream label;
    label << "ambient";
    for (auto m : mods) label << " Z/" << m;
    CaseResult cr{label.str(), true, false, ""};
    for (unsigned s = 0; s < 50 && cr.pass; ++s) {
      // deterministic valid systems: exclusion subgroups and reps inside the base
      CosetSystem sys;
      auto rand_tuple = [&]() {
        Tuple t(amb.moduli.size());
        for (std::size_t i = 0; i < t.size(); ++i)
          t[i] = static_cast<std::int64_t>(rng.below(amb.moduli[i]));
        return t;
      };
      unsigned ngens = 1 + rng.below(2);
      for (unsigned i = 0; i < ngens; ++i) sys.base_sub.gens.push_back(rand_tuple());
      sys.base_rep = rand_tuple();
      auto base_set = enumerate_subgroup(amb, sys.base_sub);
      unsigned tries = 0;
      while (sys.exclusions.size() < 3 && tries++ < 10) {
        Subgrp sub;
        unsigned kk = 1 + rng.below(2);
        for (unsigned i = 0; i < kk; ++i) {
          Tuple t = amb.decode(base_set[rng.below(base_set.size())]);
          for (auto& v : t) v = v * static_cast<std::int64_t>(1 + rng.below(3));
          sub.gens.push_back(amb.reduce(t));
        }
        Tuple rep = amb.add(sys.base_rep, amb.decode(base_set[rng.below(base_set.size())]));
        CosetSystem cand = sys;
        cand.exclusions.push_back({rep, sub});
        if (validate_system(cand, amb).empty()) sys = cand;
      }
      for (int gi = 0; gi < 3 && cr.pass; ++gi) {
        Subgrp gp;
        unsigned kk = 1 + rng.below(2);
        for (unsigned i = 0; i < kk; ++i) gp.gens.push_back(rand_tuple());
        for (std::int64_t code = 0; code < amb.order(); ++code) {
          Tuple y = amb.decode(code);
          if (saturation_membership(sys, gp, amb, y) != brute_membership(sys, gp, amb, y)) {
            cr.pass = false;
            cr.witness = to_json(sys, gp, amb);
            break;
          }
        }
      }
    }
    out.push_back(cr);
  }
}

void suite_qe33(const LemmaCase& c, Results& out) {
  (void)c;  // grids are fixed
  using namespace cosetlogic;
  CaseResult pinned{"pinned thresholds", true, false, ""};
  if (threshold_n(2, 1) != 1 || threshold_n(2, 2) != 2 || threshold_n(3, 1) != 1) {
    pinned.pass = false;
    pinned.witness = "N(2,1)=" + std::to_string(threshold_n(2, 1)) +
                     " N(2,2)=" + std::to_string(threshold_n(2, 2));
  }
  out.push_back(pinned);
  for (unsigned n = 2; n <= 3; ++n) {
    CaseResult cr{"grid n=" + std::to_string(n), true, false, ""};
    unsigned prev = 0;
    for (unsigned k = 1; k <= 4 && cr.pass; ++k) {
      unsigned t = threshold_n(n, k);
      if (t < prev) {
        cr.pass = false;
        cr.witness = "threshold not monotone at k=" + std::to_string(k);
        break;
      }
      prev = t;
      // re-verify the equivalence over a deep exponent grid
      std::vector<unsigned> e(k, 0);
      const unsigned bound = 8;
      while (true) {
        Rat full = 0, restricted = 0;
        for (unsigned i = 0; i < k; ++i) {
          Rat term(1, pow_i(Int(n), e[i]));
          full += term;
          if (e[i] < t) restricted += term;
        }
        if ((full >= 1) != (restricted >= 1)) {
          cr.pass = false;
          std::ostringstream w;
          w << "n=" << n << " k=" << k << " exponents";
          for (auto x : e) w << " " << x;
          cr.witness = w.str();
          break;
        }
        std::size_t pos = 0;
        while (pos < k && e[pos] == bound) e[pos++] = 0;
        if (pos == k) break;
        ++e[pos];
      }
    }
    out.push_back(cr);
  }
}

void suite_dim71(const LemmaCase& c, Results& out) {
  if (c.spec.family != Family::PolyMod)
    throw IncompatibleFamily("the dimension pattern lives on the modular polynomial family");
  auto rows = dim_profile(c.spec, c.spec.p, std::max(c.smax, c.spec.n + 2u), c.cap);
  for (const auto& row : rows) {
    CaseResult cr{"s=" + std::to_string(row.s), true, false, ""};
    IndexValue expect = IndexValue::finite(row.s == c.spec.n ? 1 : 0);
    if (!(row.dim == expect)) {
      cr.pass = false;
      cr.inconclusive = !row.dim.is_finite();
      cr.witness = "dim " + idx_str(row.dim) + ", expected " + idx_str(expect);
    }
    out.push_back(cr);
  }
}

void suite_dim72(const LemmaCase& c, Results& out) {
  if (c.spec.family != Family::PolyPart)
    throw IncompatibleFamily("the dimension count lives on the partitioned family");
  for (const Int& p : family_primes(c.spec))
    for (unsigned s = 1; s <= c.smax; ++s) {
      CaseResult cr{"p=" + p.str() + " s=" + std::to_string(s), true, false, ""};
      unsigned expect = 0;
      for (const auto& cc : c.spec.constraints)
        if (cc.p == p && cc.n == s) ++expect;
      auto rows = dim_profile(c.spec, p, s, c.cap);
      const IndexValue& got = rows.back().dim;
      if (!(got == IndexValue::finite(expect))) {
        cr.pass = false;
        cr.inconclusive = !got.is_finite();
        cr.witness = "dim " + idx_str(got) + ", expected finite(" + std::to_string(expect) + ")";
      }
      out.push_back(cr);
    }
}

void suite_cex72(const LemmaCase& c, Results& out) {
  auto g = make_group(c.spec);
  PiecewiseFn f = build_counterexample_72(g);  // WrongFamily on bad specs
  const Int p = f.target.p;
  auto dom = bind_subgroup(g, shift(sharp_expr(ConvexSubgroup::zero(), p, 2), p, 1));

  CaseResult side{"finite-index side condition", validate_piecewise(f), false, ""};
  out.push_back(side);

  CaseResult domain{"domain identity", true, false, ""};
  Rng rng(c.seed ^ hash_str("cex72"));
  unsigned n_samples = std::max(c.samples, 1000u);
  PreparedPiecewise pf(f);
  for (unsigned i = 0; i < n_samples; ++i) {
    Element x = random_element(g, 6, 8, rng.next());
    bool defined = !pf.eval({x}).empty();
    if (defined != member(dom, x)) {
      domain.pass = false;
      domain.witness = x.to_string();
      break;
    }
  }
  out.push_back(domain);

  CaseResult value{"value independence", true, false, ""};
  auto val_sub = profile_of(
      g, meet(shift(sharp_expr(ConvexSubgroup::zero(), p, 3), p, 1),
              shift(sharp_expr(ConvexSubgroup::zero(), p, 2), p, 2)));
  auto tgt_sub = profile_of(g, shift(sharp_expr(ConvexSubgroup::zero(), p, 3), p, 2));
  if (!profiles_equal(g, val_sub, tgt_sub)) {
    value.pass = false;
    value.witness = "meet of value subgroups differs from the target";
  }
  out.push_back(value);

  CaseResult confinement{"confinement of 200 linear candidates", true, false, ""};
  std::vector<Element> sample;
  for (unsigned i = 0; i < 100; ++i) sample.push_back(random_element(g, 6, 8, rng.next()));
  Confinement72Harness harness(f, sample);
  for (unsigned t = 0; t < 200 && confinement.pass; ++t) {
    Int a = Int(rng.in(-8, 8));
    Int b = Int(rng.in(1, 8));
    Element g0 = random_element(g, 5, 8, rng.next());
    auto rep = harness.check(a, b, g0);
    if (!rep.pass) {
      confinement.pass = false;
      std::ostringstream w;
      w << "candidate a=" << a << " b=" << b << " g=" << g0.to_string();
      if (rep.violating_pair)
        w << " at x=" << rep.violating_pair->first.to_string()
          << ", x'=" << rep.violating_pair->second.to_string();
      confinement.witness = w.str();
    }
  }
  out.push_back(confinement);
}

void suite_cex73(const LemmaCase& c, Results& out) {
  if (c.spec.family != Family::LocalLex || c.spec.p != 2)
    throw IncompatibleFamily("the flip family lives on the 2-localized group");
  auto g = make_group(c.spec);
  CaseResult grid{"pairwise translate conflicts, levels up to 8", true, false, ""};
  for (unsigned i = 1; i < 8 && grid.pass; ++i)
    for (unsigned j = i + 1; j <= 8; ++j) {
      auto r = conflict_73(g, i, j);
      if (!r.unsatisfiable || !r.grid_confirmed || r.clashing_coordinate != i - 1) {
        grid.pass = false;
        grid.witness = "i=" + std::to_string(i) + " j=" + std::to_string(j);
        break;
      }
    }
  out.push_back(grid);

  CaseResult agree{"translate test vs direct evaluation", true, false, ""};
  Rng rng(c.seed ^ hash_str("cex73"));
  for (unsigned t = 0; t < std::max(c.samples, 200u) && agree.pass; ++t) {
    unsigned i = 1 + static_cast<unsigned>(rng.below(5));
    Element x = random_element(g, 6, 6, rng.next());
    Element g0 = random_element(g, 6, 6, rng.next());
    auto outer = bind_subgroup(g, shift(conv(ConvexSubgroup::tail(i - 1)), 2, 1));
    auto inner = bind_subgroup(g, shift(conv(ConvexSubgroup::tail(i)), 2, 1));
    Element y = add(x, g0);
    bool direct = member(outer, sub(y, x)) && !member(inner, sub(y, x));
    if (translate_check_73(g0, i) != direct) {
      agree.pass = false;
      agree.witness = "g=" + g0.to_string() + " i=" + std::to_string(i);
    }
  }
  out.push_back(agree);
}

}  // namespace

std::vector<DimProfileRow> dim_profile(const GroupSpec& spec, const Int& p, unsigned smax,
                                       unsigned cap) {
  if (spec.family != Family::PolyMod && spec.family != Family::PolyPart)
    throw IncompatibleFamily("dimension profiles need a polynomial family");
  auto g = make_group(spec);
  std::vector<DimProfileRow> rows;
  for (unsigned s = 1; s <= smax; ++s) {
    auto a = bind_subgroup(g, shift(sharp_expr(ConvexSubgroup::zero(), p, s), p, 1));
    auto b = bind_subgroup(g, shift(sharp_expr(ConvexSubgroup::zero(), p, s + 1), p, 1));
    rows.push_back({s, fp_dimension(a, b, p, cap)});
  }
  return rows;
}

std::string dim_profile_csv(const std::vector<DimProfileRow>& rows) {
  std::ostringstream os;
  os << "s,dim_tag,dim_value\n";
  for (const auto& r : rows)
    os << r.s << "," << (r.dim.is_finite() ? "finite" : "at_least") << "," << r.dim.value
       << "\n";
  return os.str();
}

VerificationReport run_lemma_suite(const LemmaCase& c) {
  if (!registry_has(c.id)) throw UnknownLemma("no registry entry named " + c.id);
  VerificationReport rep;
  rep.lemma = c.id;
  rep.group = c.spec.to_string();
  rep.seed = c.seed;
  rep.cap = c.cap;
  rep.samples = c.samples;
  auto t0 = std::chrono::steady_clock::now();
  if (c.id == "keylemma") suite_keylemma(c, rep.cases);
  else if (c.id == "equal-p-div") suite_equal_p_div(c, rep.cases);
  else if (c.id == "same-above") suite_same_above(c, rep.cases);
  else if (c.id == "nonconvex-cond") suite_nonconvex_cond(c, rep.cases);
  else if (c.id == "inf-right") suite_inf_right(c, rep.cases);
  else if (c.id == "left-nc") suite_left_nc(c, rep.cases);
  else if (c.id == "aps-quot") suite_aps_quot(c, rep.cases);
  else if (c.id == "idx-pow") suite_idx_pow(c, rep.cases);
  else if (c.id == "desc-inf") suite_desc_inf(c, rep.cases);
  else if (c.id == "tower") suite_tower(c, rep.cases);
  else if (c.id == "qe32") suite_qe32(c, rep.cases);
  else if (c.id == "qe33") suite_qe33(c, rep.cases);
  else if (c.id == "dim71") suite_dim71(c, rep.cases);
  else if (c.id == "dim72") suite_dim72(c, rep.cases);
  else if (c.id == "cex72") suite_cex72(c, rep.cases);
  else if (c.id == "cex73") suite_cex73(c, rep.cases);
  auto t1 = std::chrono::steady_clock::now();
  rep.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  std::sort(rep.cases.begin(), rep.cases.end(),
            [](const CaseResult& a, const CaseResult& b) { return a.name < b.name; });
  return rep;
}

}  // namespace oag
