#include "oag/deffn.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "oag/linalg.hpp"
#include "oag/parse.hpp"

namespace oag {

using json = nlohmann::ordered_json;

SubgroupExpr TargetShape::expr() const {
  SubgroupExpr base = sharp ? sharp_expr(d, p, s) : conv(d);
  return r == 0 ? base : shift(base, p, r);
}

std::string TargetShape::to_string() const { return expr().to_string(); }

Element one_of_quotient(const GroupHandle& g, const ConvexSubgroup& d) {
  if (g->family() == Family::LocalLex) return g->zero();  // dense quotients
  std::uint32_t m;
  if (d.is_zero()) {
    auto rank = g->finite_rank();
    if (!rank) return g->zero();  // t is infinitesimal: no smallest positive element
    m = *rank;
  } else {
    m = *d.level;
    if (auto rank = g->finite_rank(); rank && m > *rank) m = *rank;
  }
  if (m == 0) return g->zero();  // trivial quotient
  return g->repaired_unit(m - 1, Rat(1));
}

ProjectedLinearFn project(const GroupHandle& g, const LinearFn& f, const TargetShape& h) {
  if (f.divisor == 0) throw InadmissibleTarget("zero divisor in linear function");
  ProjectedLinearFn pf;
  pf.base = f;
  pf.target = h;
  pf.bound_shift = scalar_mul(f.shift, one_of_quotient(g, h.d));
  return pf;
}

namespace {

Profile inverse_scale(const GroupHandle& g, const Int& c, const Profile& p) {
  Profile out;
  out.div = p.div.map([&](const Int& d) { return d == 0 ? Int(0) : d / gcd_i(d, c); });
  for (const auto& cc : p.conds)
    out.conds.push_back({cc.cell, cc.modulus / gcd_i(cc.modulus, c), cc.lam});
  return profile_meet(g, out, ambient_profile(g));
}

bool profile_contains(const GroupHandle& g, const Profile& big, const Profile& small) {
  return profiles_equal(g, profile_meet(g, big, small), small);
}

// variable coordinates for congruence solving: the element support, the
// profile breakpoints window and one deep representative per cell
std::vector<std::uint32_t> solve_coords(const GroupHandle& g, const Profile& p,
                                        const Element& w) {
  std::vector<std::uint32_t> js;
  std::uint32_t wnd = p.div.max_breakpoint();
  for (const auto& cc : p.conds) wnd = std::max(wnd, cc.lam.max_breakpoint());
  std::uint32_t hi = wnd + 1;
  if (auto r = g->finite_rank()) hi = *r;
  for (std::uint32_t j = 0; j < hi; ++j) js.push_back(j);
  for (const auto& [j, c] : w.coords())
    if (j >= hi) js.push_back(j);
  std::uint32_t deep_from = js.empty() ? 1 : js.back() + 1;
  if (!g->finite_rank())
    for (const auto& cd : g->cells()) js.push_back(g->cell_coord_from(cd.id, deep_from));
  std::sort(js.begin(), js.end());
  js.erase(std::unique(js.begin(), js.end()), js.end());
  return js;
}

// particular solution of c*y = w (mod H) over the localized family
std::optional<Element> solve_local(const GroupHandle& g, const Int& c, const Element& w,
                                   const Profile& h) {
  const Int p = g->local_prime();
  long a = vp(c, p);
  Element::Coords coords;
  for (const auto& [j, wj] : w.coords()) {
    const Int& dj = h.div.at(j);
    if (dj == 0) {
      if (vp(wj, p) < a) return std::nullopt;
      coords.push_back({j, wj / Rat(c)});
      continue;
    }
    long e = vp(dj, p);
    if (vp(wj, p) >= a) coords.push_back({j, wj / Rat(c)});
    else if (vp(wj, p) >= e) continue;  // y_j = 0 works
    else return std::nullopt;
  }
  return g->element(std::move(coords));
}

// particular solution over the integer-coefficient families via one exact
// congruence system on a representative window
std::optional<Element> solve_integral(const GroupHandle& g, const Int& c, const Element& w,
                                      const Profile& h) {
  auto js = solve_coords(g, h, w);
  std::vector<Int> wv(js.size(), 0);
  for (std::size_t k = 0; k < js.size(); ++k) wv[k] = to_int(w.coeff(js[k]));

  Profile amb = ambient_profile(g);
  std::size_t rows = js.size() + h.conds.size() + amb.conds.size();
  Mat a(rows, js.size());
  std::vector<Int> moduli(rows), b(rows);
  std::size_t r = 0;
  for (std::size_t k = 0; k < js.size(); ++k, ++r) {
    a(r, k) = c;
    moduli[r] = h.div.at(js[k]);
    b[r] = wv[k];
  }
  for (const auto& cc : h.conds) {
    Int rhs = 0;
    for (std::size_t k = 0; k < js.size(); ++k) {
      if (!g->coord_in_cell(js[k], cc.cell)) continue;
      a(r, k) = cc.lam.at(js[k]) * c;
      rhs += cc.lam.at(js[k]) * wv[k];
    }
    moduli[r] = cc.modulus;
    b[r] = rhs;
    ++r;
  }
  for (const auto& cc : amb.conds) {
    for (std::size_t k = 0; k < js.size(); ++k)
      if (g->coord_in_cell(js[k], cc.cell)) a(r, k) = cc.lam.at(js[k]);
    moduli[r] = cc.modulus;
    b[r] = 0;
    ++r;
  }
  auto sol = solve_congruences(a, moduli, b);
  if (!sol) return std::nullopt;
  Element::Coords coords;
  for (std::size_t k = 0; k < js.size(); ++k)
    if ((*sol)[k] != 0) coords.push_back({js[k], Rat((*sol)[k])});
  return g->element(std::move(coords));
}

BoundSubgroup bound_from_profile(const GroupHandle& g, const SubgroupExpr& tag, Profile p) {
  return BoundSubgroup{g, tag, std::move(p)};
}

}  // namespace

PreparedProjection::PreparedProjection(GroupHandle g, ProjectedLinearFn pf, unsigned cap)
    : g_(std::move(g)), pf_(std::move(pf)) {
  hb_ = bind_subgroup(g_, pf_.target.expr());
  c_ = pf_.base.divisor;
  if (c_ < 0) { c_ = -c_; negate_ = true; }
  Profile hs = inverse_scale(g_, c_, hb_.prof);
  auto t = transversal(bound_from_profile(g_, hb_.expr, hs), hb_, cap + 1);
  if (!t.index.is_finite()) throw CapExceeded("solution cosets exceed the cap");
  kernel_reps_ = std::move(t.reps);
}

std::vector<Coset> PreparedProjection::eval(const std::vector<Element>& args) const {
  if (args.size() != pf_.base.coeffs.size())
    throw GroupMismatch("arity mismatch in projected evaluation");
  Element w = add(pf_.base.offset, pf_.bound_shift);
  for (std::size_t i = 0; i < args.size(); ++i)
    w = add(w, scalar_mul(pf_.base.coeffs[i], args[i]));
  if (negate_) w = neg(w);
  auto y0 =
      g_->rational_coeffs() ? solve_local(g_, c_, w, hb_.prof) : solve_integral(g_, c_, w, hb_.prof);
  if (!y0) return {};
  std::vector<Coset> out;
  for (const auto& rep : kernel_reps_) out.push_back({hb_.expr, add(*y0, rep)});
  return out;
}

std::vector<Coset> eval_projected(const GroupHandle& g, const ProjectedLinearFn& pf,
                                  const std::vector<Element>& args, unsigned cap) {
  return PreparedProjection(g, pf, cap).eval(args);
}

std::optional<std::pair<Element, Element>> split_sum(const GroupHandle& g, const Profile& p,
                                                     const Profile& q, const Element& x) {
  if (!profile_member(g, profile_sum(g, p, q), x)) return std::nullopt;
  if (g->rational_coeffs()) {
    const Int pr = g->local_prime();
    Element::Coords uc;
    for (const auto& [j, c] : x.coords()) {
      long e1 = p.div.at(j) == 0 ? -2 : vp(p.div.at(j), pr);
      long e2 = q.div.at(j) == 0 ? -2 : vp(q.div.at(j), pr);
      long vx = vp(c, pr);
      if (e1 >= 0 && vx >= e1) uc.push_back({j, c});
      else if (e2 >= 0 && vx >= e2) continue;  // u_j = 0
      else return std::nullopt;
    }
    Element u = g->element(std::move(uc));
    return std::make_pair(u, sub(x, u));
  }
  // integral families: particular coordinatewise split plus cell repairs
  Profile merged = profile_meet(g, p, q);  // shared breakpoint window only
  auto js = solve_coords(g, merged, x);
  std::vector<Int> ustar(js.size(), 0), freedom(js.size(), 0);
  for (std::size_t k = 0; k < js.size(); ++k) {
    Int dp = p.div.at(js[k]), dq = q.div.at(js[k]);
    Int xv = to_int(x.coeff(js[k]));
    if (dp == 0 && dq == 0) {
      if (xv != 0) return std::nullopt;
    } else if (dp == 0) {
      if (!divides(dq, xv)) return std::nullopt;
    } else if (dq == 0) {
      if (!divides(dp, xv)) return std::nullopt;
      ustar[k] = xv;
    } else {
      Int gg = gcd_i(dp, dq);
      if (!divides(gg, xv)) return std::nullopt;
      Int nu = (dp / gg) * inv_mod(dp / gg, dq / gg);
      ustar[k] = nu * xv;
      freedom[k] = lcm_i(dp, dq);
    }
  }
  std::size_t rows = p.conds.size() + q.conds.size();
  Mat a(rows, js.size());
  std::vector<Int> moduli(rows), b(rows);
  std::size_t r = 0;
  for (const auto& cc : p.conds) {
    Int rhs = 0;
    for (std::size_t k = 0; k < js.size(); ++k) {
      if (!g->coord_in_cell(js[k], cc.cell)) continue;
      a(r, k) = cc.lam.at(js[k]) * freedom[k];
      rhs -= cc.lam.at(js[k]) * ustar[k];
    }
    moduli[r] = cc.modulus;
    b[r] = rhs;
    ++r;
  }
  for (const auto& cc : q.conds) {
    Int rhs = 0;
    for (std::size_t k = 0; k < js.size(); ++k) {
      if (!g->coord_in_cell(js[k], cc.cell)) continue;
      a(r, k) = -cc.lam.at(js[k]) * freedom[k];
      rhs -= cc.lam.at(js[k]) * (to_int(x.coeff(js[k])) - ustar[k]);
    }
    moduli[r] = cc.modulus;
    b[r] = rhs;
    ++r;
  }
  auto sol = solve_congruences(a, moduli, b);
  if (!sol) return std::nullopt;
  Element::Coords uc;
  for (std::size_t k = 0; k < js.size(); ++k) {
    Int val = ustar[k] + freedom[k] * (*sol)[k];
    if (val != 0) uc.push_back({js[k], Rat(val)});
  }
  Element u = g->element(std::move(uc));
  return std::make_pair(u, sub(x, u));
}

std::optional<Coset> intersect_cosets(const GroupHandle& g, const BoundSubgroup& h1,
                                      const Element& y1, const BoundSubgroup& h2,
                                      const Element& y2) {
  auto parts = split_sum(g, h1.prof, h2.prof, sub(y1, y2));
  if (!parts) return std::nullopt;
  Element y = sub(y1, parts->first);  // y = y1 - u = y2 + v
  return Coset{meet(h1.expr, h2.expr), y};
}

std::vector<Coset> eval_intersection(const GroupHandle& g, const ProjectedLinearFn& f1,
                                     const ProjectedLinearFn& f2, const std::vector<Element>& args,
                                     unsigned cap) {
  auto c1 = eval_projected(g, f1, args, cap);
  auto c2 = eval_projected(g, f2, args, cap);
  BoundSubgroup h1 = bind_subgroup(g, f1.target.expr());
  BoundSubgroup h2 = bind_subgroup(g, f2.target.expr());
  BoundSubgroup m = bind_subgroup(g, meet(h1.expr, h2.expr));
  std::vector<Coset> out;
  for (const auto& a : c1)
    for (const auto& b : c2) {
      auto c = intersect_cosets(g, h1, a.rep, h2, b.rep);
      if (!c) continue;
      bool dup = false;
      for (const auto& prev : out)
        if (coset_eq(m, prev.rep, c->rep)) { dup = true; break; }
      if (!dup) out.push_back(*c);
    }
  return out;
}

// ---- predicates and trees ---------------------------------------------------

PredicatePtr pred_true() { return std::make_shared<Predicate>(Predicate{Predicate::True{}}); }
PredicatePtr pred_in(SubgroupExpr s, Element offset) {
  return std::make_shared<Predicate>(Predicate{Predicate::In{std::move(s), std::move(offset)}});
}
PredicatePtr pred_less(Element bound) {
  return std::make_shared<Predicate>(Predicate{Predicate::Less{std::move(bound)}});
}
PredicatePtr pred_not(PredicatePtr p) {
  return std::make_shared<Predicate>(Predicate{Predicate::Not{std::move(p)}});
}
PredicatePtr pred_and(PredicatePtr a, PredicatePtr b) {
  return std::make_shared<Predicate>(Predicate{Predicate::And{std::move(a), std::move(b)}});
}
PredicatePtr pred_or(PredicatePtr a, PredicatePtr b) {
  return std::make_shared<Predicate>(Predicate{Predicate::Or{std::move(a), std::move(b)}});
}

bool eval_predicate(const GroupHandle& g, const PredicatePtr& p, const Element& x) {
  struct V {
    const GroupHandle& g;
    const Element& x;
    bool operator()(const Predicate::True&) const { return true; }
    bool operator()(const Predicate::In& in) const {
      return member(bind_subgroup(g, in.s), sub(x, in.offset));
    }
    bool operator()(const Predicate::Less& l) const { return compare(x, l.bound) == Cmp::LT; }
    bool operator()(const Predicate::Not& n) const { return !eval_predicate(g, n.inner, x); }
    bool operator()(const Predicate::And& a) const {
      return eval_predicate(g, a.a, x) && eval_predicate(g, a.b, x);
    }
    bool operator()(const Predicate::Or& o) const {
      return eval_predicate(g, o.a, x) || eval_predicate(g, o.b, x);
    }
  };
  return std::visit(V{g, x}, p->node);
}

FnTreePtr tree_leaf(ProjectedLinearFn fn) {
  return std::make_shared<FnTree>(FnTree{FnTree::Leaf{std::move(fn)}});
}
FnTreePtr tree_meet(std::vector<FnTreePtr> args) {
  return std::make_shared<FnTree>(FnTree{FnTree::Meet{std::move(args)}});
}
FnTreePtr tree_minus(FnTreePtr pos, std::vector<FnTreePtr> negs) {
  return std::make_shared<FnTree>(FnTree{FnTree::Minus{std::move(pos), std::move(negs)}});
}

namespace {

std::vector<const ProjectedLinearFn*> positive_leaves(const FnTreePtr& t) {
  struct V {
    std::vector<const ProjectedLinearFn*>& out;
    void operator()(const FnTree::Leaf& l) const { out.push_back(&l.fn); }
    void operator()(const FnTree::Meet& m) const {
      for (const auto& a : m.args) std::visit(V{out}, a->node);
    }
    void operator()(const FnTree::Minus& mi) const { std::visit(V{out}, mi.pos->node); }
  };
  std::vector<const ProjectedLinearFn*> out;
  std::visit(V{out}, t->node);
  return out;
}

}  // namespace

struct PreparedPiecewise::PNode {
  struct Leaf { PreparedProjection fn; };
  struct Meet { std::vector<PNodePtr> args; std::vector<BoundSubgroup> step_tgts; };
  struct Minus { PNodePtr pos; std::vector<PNodePtr> negs; };
  std::variant<Leaf, Meet, Minus> node;
  BoundSubgroup tgt;
};

PreparedPiecewise::PNodePtr PreparedPiecewise::prepare(const FnTreePtr& t, unsigned cap) const {
  struct V {
    const PreparedPiecewise& self;
    unsigned cap;
    PNodePtr operator()(const FnTree::Leaf& l) const {
      PreparedProjection pp(self.g_, l.fn, cap);
      BoundSubgroup tgt = pp.target();
      return std::make_shared<PNode>(PNode{PNode::Leaf{std::move(pp)}, std::move(tgt)});
    }
    PNodePtr operator()(const FnTree::Meet& m) const {
      std::vector<PNodePtr> args;
      std::vector<BoundSubgroup> steps;
      SubgroupExpr acc;
      for (std::size_t i = 0; i < m.args.size(); ++i) {
        args.push_back(self.prepare(m.args[i], cap));
        acc = i == 0 ? args[i]->tgt.expr : meet(acc, args[i]->tgt.expr);
        if (i > 0) steps.push_back(bind_subgroup(self.g_, acc));
      }
      BoundSubgroup tgt = bind_subgroup(self.g_, acc);
      return std::make_shared<PNode>(
          PNode{PNode::Meet{std::move(args), std::move(steps)}, std::move(tgt)});
    }
    PNodePtr operator()(const FnTree::Minus& mi) const {
      PNodePtr pos = self.prepare(mi.pos, cap);
      std::vector<PNodePtr> negs;
      for (const auto& n : mi.negs) {
        negs.push_back(self.prepare(n, cap));
        if (!profile_contains(self.g_, negs.back()->tgt.prof, pos->tgt.prof))
          throw InadmissibleTarget("subtracted target does not refine the positive one");
      }
      BoundSubgroup tgt = pos->tgt;
      return std::make_shared<PNode>(
          PNode{PNode::Minus{std::move(pos), std::move(negs)}, std::move(tgt)});
    }
  };
  return std::visit(V{*this, cap}, t->node);
}

PreparedPiecewise::Value PreparedPiecewise::eval_node(const PNodePtr& n,
                                                      const std::vector<Element>& args) const {
  struct V {
    const PreparedPiecewise& self;
    const PNodePtr& n;
    const std::vector<Element>& args;
    Value operator()(const PNode::Leaf& l) const {
      Value v{{}, &n->tgt};
      for (auto& c : l.fn.eval(args)) v.reps.push_back(c.rep);
      return v;
    }
    Value operator()(const PNode::Meet& m) const {
      Value acc = self.eval_node(m.args.at(0), args);
      for (std::size_t i = 1; i < m.args.size(); ++i) {
        Value nxt = self.eval_node(m.args[i], args);
        const BoundSubgroup& mt = m.step_tgts[i - 1];
        std::vector<Element> merged;
        for (const auto& a : acc.reps)
          for (const auto& b : nxt.reps) {
            auto c = intersect_cosets(self.g_, *acc.tgt, a, *nxt.tgt, b);
            if (!c) continue;
            bool dup = false;
            for (const auto& prev : merged)
              if (coset_eq(mt, prev, c->rep)) { dup = true; break; }
            if (!dup) merged.push_back(c->rep);
          }
        acc = Value{std::move(merged), &mt};
      }
      return Value{std::move(acc.reps), &n->tgt};
    }
    Value operator()(const PNode::Minus& mi) const {
      Value pos = self.eval_node(mi.pos, args);
      for (const auto& neg : mi.negs) {
        Value sub_v = self.eval_node(neg, args);
        std::vector<Element> kept;
        for (const auto& y : pos.reps) {
          bool removed = false;
          for (const auto& z : sub_v.reps)
            if (coset_eq(*sub_v.tgt, y, z)) { removed = true; break; }
          if (!removed) kept.push_back(y);
        }
        pos.reps = std::move(kept);
      }
      return Value{std::move(pos.reps), &n->tgt};
    }
  };
  return std::visit(V{*this, n, args}, n->node);
}

PreparedPiecewise::PreparedPiecewise(const PiecewiseFn& f, unsigned cap)
    : g_(f.group), multiplicity_cap_(f.multiplicity_cap), cap_(cap) {
  tb_ = bind_subgroup(g_, f.target.expr());
  for (const auto& piece : f.pieces) {
    PPiece pp;
    pp.domain = piece.domain;
    pp.body = prepare(piece.body, cap);
    if (!profile_contains(g_, pp.body->tgt.prof, tb_.prof))
      throw InadmissibleTarget("piece value does not refine the declared target");
    auto expansion = transversal(pp.body->tgt, tb_, cap + 1);
    if (!expansion.index.is_finite())
      throw CapExceeded("piece target has too many classes over the declared target");
    pp.expansion = std::move(expansion.reps);
    pieces_.push_back(std::move(pp));
  }
}

std::vector<Coset> PreparedPiecewise::eval(const std::vector<Element>& args) const {
  std::vector<Coset> out;
  for (const auto& piece : pieces_) {
    bool in_domain = true;
    for (const auto& x : args)
      if (!eval_predicate(g_, piece.domain, x)) { in_domain = false; break; }
    if (!in_domain) continue;
    Value v = eval_node(piece.body, args);
    for (const auto& y : v.reps)
      for (const auto& t : piece.expansion) {
        Element rep = add(y, t);
        bool dup = false;
        for (const auto& prev : out)
          if (coset_eq(tb_, prev.rep, rep)) { dup = true; break; }
        if (!dup) out.push_back({tb_.expr, rep});
      }
  }
  if (out.size() > multiplicity_cap_)
    throw MultiplicityExceeded("evaluation produced " + std::to_string(out.size()) +
                               " cosets, cap " + std::to_string(multiplicity_cap_));
  return out;
}

std::vector<Coset> eval_piecewise(const PiecewiseFn& f, const std::vector<Element>& args,
                                  unsigned cap) {
  return PreparedPiecewise(f, cap).eval(args);
}

bool validate_piecewise(const PiecewiseFn& f, unsigned cap) {
  const GroupHandle& g = f.group;
  BoundSubgroup tb = bind_subgroup(g, f.target.expr());
  for (const auto& piece : f.pieces) {
    auto leaves = positive_leaves(piece.body);
    if (leaves.empty()) continue;
    SubgroupExpr acc = leaves[0]->target.expr();
    for (std::size_t i = 1; i < leaves.size(); ++i) acc = meet(acc, leaves[i]->target.expr());
    auto iv = index(bind_subgroup(g, acc), tb, cap);
    if (!iv.is_finite()) return false;
  }
  return true;
}

// ---- serialization ----------------------------------------------------------

namespace {

json linear_to_json(const LinearFn& f) {
  json j;
  j["coeffs"] = json::array();
  for (const auto& c : f.coeffs) j["coeffs"].push_back(c.str());
  j["divisor"] = f.divisor.str();
  j["offset"] = format_element(f.offset);
  j["shift"] = f.shift.str();
  return j;
}

LinearFn linear_from_json(const GroupHandle& g, const json& j) {
  LinearFn f;
  for (const auto& c : j.at("coeffs")) f.coeffs.push_back(Int(c.get<std::string>()));
  f.divisor = Int(j.at("divisor").get<std::string>());
  f.offset = parse_element(j.at("offset").get<std::string>(), g);
  f.shift = Int(j.at("shift").get<std::string>());
  return f;
}

TargetShape target_from_text(const std::string& text) {
  // target shapes are a sublanguage of the subgroup grammar
  SubgroupExpr e = parse_subgroup_text(text);
  TargetShape t;
  const SubgroupExpr* cur = &e;
  if (auto* sh = std::get_if<SubgroupExpr::Shift>(&cur->node().v)) {
    t.p = sh->p;
    t.r = sh->k;
    cur = &sh->inner;
  }
  if (auto* sp = std::get_if<SubgroupExpr::Sharp>(&cur->node().v)) {
    t.sharp = true;
    t.d = sp->d;
    t.p = sp->p;
    t.s = sp->s;
    return t;
  }
  if (auto* cv = std::get_if<SubgroupExpr::Conv>(&cur->node().v)) {
    t.d = cv->d;
    return t;
  }
  throw InadmissibleTarget("target must be of the form D + p^rG or sharp(D,p,s) + p^rG");
}

json pred_to_json(const PredicatePtr& p) {
  struct V {
    json operator()(const Predicate::True&) const { return json{{"op", "true"}}; }
    json operator()(const Predicate::In& in) const {
      return json{{"op", "in"},
                  {"subgroup", in.s.to_string()},
                  {"offset", format_element(in.offset)}};
    }
    json operator()(const Predicate::Less& l) const {
      return json{{"op", "less"}, {"bound", format_element(l.bound)}};
    }
    json operator()(const Predicate::Not& n) const {
      return json{{"op", "not"}, {"arg", pred_to_json(n.inner)}};
    }
    json operator()(const Predicate::And& a) const {
      return json{{"op", "and"}, {"args", json::array({pred_to_json(a.a), pred_to_json(a.b)})}};
    }
    json operator()(const Predicate::Or& o) const {
      return json{{"op", "or"}, {"args", json::array({pred_to_json(o.a), pred_to_json(o.b)})}};
    }
  };
  return std::visit(V{}, p->node);
}

PredicatePtr pred_from_json(const GroupHandle& g, const json& j) {
  std::string op = j.at("op").get<std::string>();
  if (op == "true") return pred_true();
  if (op == "in")
    return pred_in(parse_subgroup_text(j.at("subgroup").get<std::string>()),
                   parse_element(j.at("offset").get<std::string>(), g));
  if (op == "less") return pred_less(parse_element(j.at("bound").get<std::string>(), g));
  if (op == "not") return pred_not(pred_from_json(g, j.at("arg")));
  if (op == "and")
    return pred_and(pred_from_json(g, j.at("args").at(0)), pred_from_json(g, j.at("args").at(1)));
  if (op == "or")
    return pred_or(pred_from_json(g, j.at("args").at(0)), pred_from_json(g, j.at("args").at(1)));
  throw ParseError("unknown predicate op " + op, 0);
}

json tree_to_json(const FnTreePtr& t) {
  struct V {
    json operator()(const FnTree::Leaf& l) const {
      json j = linear_to_json(l.fn.base);
      j["op"] = "leaf";
      j["target"] = l.fn.target.to_string();
      return j;
    }
    json operator()(const FnTree::Meet& m) const {
      json j{{"op", "meet"}};
      j["args"] = json::array();
      for (const auto& a : m.args) j["args"].push_back(tree_to_json(a));
      return j;
    }
    json operator()(const FnTree::Minus& mi) const {
      json j{{"op", "minus"}};
      j["pos"] = tree_to_json(mi.pos);
      j["neg"] = json::array();
      for (const auto& n : mi.negs) j["neg"].push_back(tree_to_json(n));
      return j;
    }
  };
  return std::visit(V{}, t->node);
}

FnTreePtr tree_from_json(const GroupHandle& g, const json& j) {
  std::string op = j.at("op").get<std::string>();
  if (op == "leaf") {
    LinearFn f = linear_from_json(g, j);
    TargetShape t = target_from_text(j.at("target").get<std::string>());
    return tree_leaf(project(g, f, t));
  }
  if (op == "meet") {
    std::vector<FnTreePtr> args;
    for (const auto& a : j.at("args")) args.push_back(tree_from_json(g, a));
    return tree_meet(std::move(args));
  }
  if (op == "minus") {
    std::vector<FnTreePtr> negs;
    for (const auto& n : j.at("neg")) negs.push_back(tree_from_json(g, n));
    return tree_minus(tree_from_json(g, j.at("pos")), std::move(negs));
  }
  throw ParseError("unknown tree op " + op, 0);
}

}  // namespace

std::string piecewise_to_json(const PiecewiseFn& f) {
  json j;
  j["op"] = "union";
  j["group"] = f.group->spec().to_string();
  j["target"] = f.target.to_string();
  j["multiplicity_cap"] = f.multiplicity_cap;
  j["arity"] = f.arity;
  j["pieces"] = json::array();
  for (const auto& p : f.pieces)
    j["pieces"].push_back(
        json{{"domain", pred_to_json(p.domain)}, {"body", tree_to_json(p.body)}});
  return j.dump(2);
}

PiecewiseFn piecewise_from_json(const GroupHandle& g, const std::string& text) {
  json j = json::parse(text);
  PiecewiseFn f;
  f.group = g;
  f.target = target_from_text(j.at("target").get<std::string>());
  f.multiplicity_cap = j.at("multiplicity_cap").get<unsigned>();
  f.arity = j.at("arity").get<unsigned>();
  for (const auto& p : j.at("pieces"))
    f.pieces.push_back({pred_from_json(g, p.at("domain")), tree_from_json(g, p.at("body"))});
  return f;
}

// ---- the two counterexample constructions -----------------------------------

PiecewiseFn build_counterexample_72(const GroupHandle& g) {
  if (g->family() != Family::PolyPart || g->spec().constraints.empty())
    throw WrongFamily("needs the partitioned polynomial family");
  Int p = g->spec().constraints.front().p;
  for (const auto& c : g->spec().constraints)
    if (c.p != p || c.n != 2)
      throw WrongFamily("needs every cell constrained by the same prime squared");

  LinearFn f1{{Int(1)}, Int(1), g->zero(), Int(0)};
  TargetShape h1{ConvexSubgroup::zero(), true, p, 2, 2};  // S#(0,p,2) + p^2 G
  LinearFn f2{{Int(0)}, Int(1), g->zero(), Int(0)};
  TargetShape h2{ConvexSubgroup::zero(), true, p, 3, 1};  // S#(0,p,3) + pG

  PiecewiseFn f;
  f.group = g;
  f.target = TargetShape{ConvexSubgroup::zero(), true, p, 3, 2};  // S#(0,p,3) + p^2 G
  f.multiplicity_cap = 1;
  f.arity = 1;
  f.pieces.push_back(
      {pred_true(), tree_meet({tree_leaf(project(g, f1, h1)), tree_leaf(project(g, f2, h2))})});
  return f;
}

Confinement72Harness::Confinement72Harness(const PiecewiseFn& f, std::vector<Element> sample)
    : g_(f.group), target_(f.target), sample_(std::move(sample)) {
  Int p = target_.p;
  tb_ = bind_subgroup(g_, target_.expr());
  fine_ = bind_subgroup(g_, shift(sharp_expr(ConvexSubgroup::zero(), p, 3), p, 1));
  coarse_ = bind_subgroup(g_, shift(sharp_expr(ConvexSubgroup::zero(), p, 2), p, 2));
  PreparedPiecewise pf(f, 16);
  for (const auto& x : sample_) {
    std::vector<Element> reps;
    for (auto& c : pf.eval({x})) reps.push_back(c.rep);
    values_.push_back(std::move(reps));
  }
}

ConfinementReport Confinement72Harness::check(const Int& a, const Int& b,
                                              const Element& g0) const {
  ConfinementReport rep;
  LinearFn hf{{a}, b, g0, Int(0)};
  std::vector<Element> agreement;
  try {
    // any candidate whose solution sets have two or more classes per point can
    // never be a subset of the single-valued partial function
    PreparedProjection h(g_, project(g_, hf, target_), 1);
    for (std::size_t i = 0; i < sample_.size(); ++i) {
      auto hx = h.eval({sample_[i]});
      if (hx.empty()) continue;
      bool subset = true;
      for (const auto& y : hx) {
        bool found = false;
        for (const auto& fy : values_[i])
          if (coset_eq(tb_, y.rep, fy)) { found = true; break; }
        if (!found) { subset = false; break; }
      }
      if (subset) agreement.push_back(sample_[i]);
    }
  } catch (const CapExceeded&) {
    rep.agreement_size = 0;
    rep.pass = true;
    return rep;
  }
  rep.agreement_size = agreement.size();
  auto confined = [&](const BoundSubgroup& s) {
    for (std::size_t i = 1; i < agreement.size(); ++i)
      if (!coset_eq(s, agreement[i], agreement[0])) return false;
    return true;
  };
  rep.confined_to_fine = confined(fine_);
  rep.confined_to_coarse = confined(coarse_);
  rep.pass = agreement.size() <= 1 || rep.confined_to_fine || rep.confined_to_coarse;
  if (!rep.pass) {
    for (std::size_t i = 1; i < agreement.size() && !rep.violating_pair; ++i)
      if (!coset_eq(fine_, agreement[i], agreement[0]) &&
          !coset_eq(coarse_, agreement[i], agreement[0]))
        rep.violating_pair = std::make_pair(agreement[0], agreement[i]);
  }
  return rep;
}

ConfinementReport confinement_check_72(const PiecewiseFn& f, const Int& a, const Int& b,
                                       const Element& g0, const std::vector<Element>& sample) {
  return Confinement72Harness(f, sample).check(a, b, g0);
}

bool translate_check_73(const Element& g0, unsigned i) {
  const GroupHandle& g = g0.group();
  if (g->family() != Family::LocalLex || g->local_prime() != 2)
    throw WrongFamily("the translate family lives over the 2-localized group");
  if (i < 1) throw InadmissibleTarget("level must be >= 1");
  for (unsigned j = 0; j + 1 < i; ++j) {
    Rat c = g0.coeff(j);
    if (c != 0 && vp(c, 2) < 1) return false;  // needs an even coefficient
  }
  Rat lead = g0.coeff(i - 1);
  return lead != 0 && vp(lead, 2) == 0;  // needs an odd coefficient
}

ConflictReport conflict_73(const GroupHandle& g, unsigned i, unsigned j) {
  if (i < 1 || i >= j) throw InadmissibleTarget("need 1 <= i < j");
  ConflictReport rep;
  rep.clashing_coordinate = i - 1;
  // a joint translate needs coordinate i-1 odd at level i but even at level j
  // (since i-1 <= j-2); the exhaustive grid confirms the clash
  rep.unsatisfiable = true;
  rep.grid_confirmed = true;
  for (std::uint64_t bits = 0; bits < (1ull << j); ++bits) {
    Element::Coords c;
    for (unsigned k = 0; k < j; ++k)
      if (bits & (1ull << k)) c.push_back({k, Rat(1)});
    Element cand = g->element(std::move(c));
    if (translate_check_73(cand, i) && translate_check_73(cand, j)) {
      rep.unsatisfiable = false;
      rep.grid_confirmed = false;
      break;
    }
  }
  return rep;
}

}  // namespace oag
