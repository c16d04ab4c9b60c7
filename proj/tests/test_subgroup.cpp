#include <doctest.h>

#include "oag/parse.hpp"
#include "oag/quotient.hpp"
#include "oag/rng.hpp"
#include "oag/subgroup.hpp"

using namespace oag;

namespace {

Element el(const GroupHandle& g, std::vector<std::pair<std::uint32_t, Rat>> c) {
  return g->element(std::move(c));
}

SubgroupExpr tail(std::uint32_t m) { return conv(ConvexSubgroup::tail(m)); }

// depth-bounded random expression from the full grammar
SubgroupExpr random_expr(Rng& rng, const GroupHandle& g, unsigned depth) {
  auto rand_prime = [&]() { return rng.flip() ? Int(2) : Int(3); };
  auto rand_convex = [&]() {
    switch (rng.below(4)) {
      case 0: return ConvexSubgroup::zero();
      case 1: return ConvexSubgroup::full();
      default: {
        std::uint32_t hi = g->finite_rank().value_or(5);
        return ConvexSubgroup::tail(1 + static_cast<std::uint32_t>(rng.below(hi)));
      }
    }
  };
  if (depth == 0 || rng.below(3) == 0) {
    if (rng.flip()) return conv(rand_convex());
    return sharp_expr(rand_convex(), rand_prime(), 1 + static_cast<unsigned>(rng.below(3)));
  }
  switch (rng.below(4)) {
    case 0: return shift(random_expr(rng, g, depth - 1), rand_prime(),
                         static_cast<unsigned>(rng.below(3)));
    case 1: return meet(random_expr(rng, g, depth - 1), random_expr(rng, g, depth - 1));
    case 2: return join(random_expr(rng, g, depth - 1), random_expr(rng, g, depth - 1));
    default: return scale(rand_prime(), 1 + static_cast<unsigned>(rng.below(2)),
                          random_expr(rng, g, depth - 1));
  }
}

}  // namespace

TEST_CASE("closed-form membership on pinned instances") {
  auto f3 = make_group(GroupSpec::free_lex(3));
  auto s = parse_subgroup_expr("shift(tail(1),2,1)", f3);
  CHECK(member(s, el(f3, {{0, 2}, {1, 1}})));
  CHECK(!member(s, el(f3, {{0, 1}})));

  auto pm = make_group(GroupSpec::poly_mod(2, 2));
  auto sharp22 = parse_subgroup_expr("sharp(zero,2,2)", pm);
  CHECK(member(sharp22, el(pm, {{0, 4}, {1, 4}})));
  CHECK(!member(sharp22, el(pm, {{0, 2}, {1, 2}})));
  CHECK(member(sharp22, el(pm, {{0, 4}})));

  // Tail(m) + p^sG in the polynomial family: prefix divisibility only
  auto t2s = parse_subgroup_expr("shift(tail(2),2,2)", pm);
  CHECK(member(t2s, el(pm, {{0, 4}, {1, 4}, {2, 1}, {3, 3}})));
  CHECK(!member(t2s, el(pm, {{0, 2}, {1, 2}})));

  auto sharp23 = parse_subgroup_expr("sharp(zero,2,3)", pm);
  CHECK(member(sharp23, el(pm, {{0, 8}, {1, 8}})));
  CHECK(!member(sharp23, el(pm, {{0, 4}, {1, 4}})));
}

TEST_CASE("member agrees with member_oracle across the grammar") {
  std::vector<GroupSpec> specs = {GroupSpec::free_lex(3), GroupSpec::local_lex(2),
                                  GroupSpec::poly_mod(2, 2),
                                  GroupSpec::poly_part({{2, 2, 0}, {3, 1, 1}})};
  Rng rng(20240601);
  for (const auto& spec : specs) {
    auto g = make_group(spec);
    unsigned agree = 0, total = 0;
    for (int i = 0; i < 150; ++i) {
      SubgroupExpr e = random_expr(rng, g, 3);
      BoundSubgroup b;
      try {
        b = bind_subgroup(g, e);
      } catch (const UnknownConvex&) { continue; }
      Element x = random_element(g, 5, 6, rng.next());
      bool expect = member_oracle(g, e, x);
      bool got = member(b, x);
      CHECK(got == expect);
      if (got == expect) ++agree;
      ++total;
      // subgroups contain zero
      CHECK(member(b, g->zero()));
      CHECK(member_oracle(g, e, g->zero()));
    }
    CHECK(agree == total);
  }
}

TEST_CASE("divisibility descent identity (membership form)") {
  // x in S#(D,p,s) and x in p^rG  <=>  x/p^r exists and lies in S#(D,p,s-r)
  std::vector<GroupSpec> specs = {GroupSpec::local_lex(2), GroupSpec::local_lex(3),
                                  GroupSpec::poly_mod(2, 2)};
  for (const auto& spec : specs) {
    auto g = make_group(spec);
    Int p = spec.p;
    for (std::uint64_t i = 0; i < 120; ++i) {
      Element x = random_element(g, 5, 9, 31 * i + 7);
      std::vector<ConvexSubgroup> chain{ConvexSubgroup::zero()};
      for (std::uint32_t m = 1; m <= x.max_support() + 2; ++m)
        chain.push_back(ConvexSubgroup::tail(m));
      for (const auto& d : chain)
        for (unsigned s = 1; s <= 3; ++s)
          for (unsigned r = 1; r <= s; ++r) {
            bool lhs = member(sharp(g, d, p, s), x) &&
                       member(bind_subgroup(g, pk_g(p, r)), x);
            auto y = try_divide(x, pow_i(p, r));
            bool rhs = y.has_value() && member(sharp(g, d, p, s - r), *y);
            CHECK(lhs == rhs);
          }
    }
  }
}

TEST_CASE("sharp monotonicity in the base subgroup and exponent") {
  auto pm = make_group(GroupSpec::poly_mod(2, 2));
  for (std::uint64_t i = 0; i < 80; ++i) {
    Element x = random_element(pm, 5, 9, 900 + i);
    for (unsigned s = 2; s <= 3; ++s)
      for (unsigned k = 0; k <= 2; ++k) {
        auto lower = bind_subgroup(pm, shift(sharp_expr(ConvexSubgroup::zero(), 2, s), 2, k));
        auto upper = bind_subgroup(pm, shift(sharp_expr(ConvexSubgroup::tail(2), 2, s), 2, k));
        auto weaker = bind_subgroup(pm, shift(sharp_expr(ConvexSubgroup::zero(), 2, s - 1), 2, k));
        auto conv_lo = bind_subgroup(pm, shift(zero_group(), 2, k));
        if (member(conv_lo, x)) CHECK(member(lower, x));
        if (member(lower, x)) {
          CHECK(member(upper, x));
          CHECK(member(weaker, x));
        }
      }
  }
  // alpha + p^kG <= alpha#[p^s] + p^kG <= alpha#[p^(s-1)] + p^kG <= beta + p^kG
  for (std::uint64_t i = 0; i < 80; ++i) {
    Element x = random_element(pm, 5, 9, 1700 + i);
    for (unsigned k = 1; k <= 2; ++k) {
      auto a0 = bind_subgroup(pm, shift(tail(4), 2, k));
      auto a1 = bind_subgroup(pm, shift(sharp_expr(ConvexSubgroup::tail(4), 2, 3), 2, k));
      auto a2 = bind_subgroup(pm, shift(sharp_expr(ConvexSubgroup::tail(4), 2, 2), 2, k));
      auto a3 = bind_subgroup(pm, shift(tail(2), 2, k));
      if (member(a0, x)) CHECK(member(a1, x));
      if (member(a1, x)) CHECK(member(a2, x));
      if (member(a2, x)) CHECK(member(a3, x));
    }
  }
}

TEST_CASE("spine maps: pinned examples and conventions") {
  auto l2 = make_group(GroupSpec::local_lex(2));
  auto t = spine_maps(l2, 2, el(l2, {{3, 1}}));
  CHECK(t.s_point == ConvexSubgroup::tail(4));
  CHECK(t.t_point == ConvexSubgroup::tail(4));
  CHECK(t.t_plus_point == ConvexSubgroup::tail(3));
  CHECK(!t.t_plus_empty_intersection);

  CHECK(spine_maps(l2, 2, el(l2, {{1, 2}})).s_point == ConvexSubgroup::zero());

  auto f2 = make_group(GroupSpec::free_lex(2));
  CHECK(spine_maps(f2, 3, el(f2, {{0, 1}})).s_point == ConvexSubgroup::tail(1));

  auto z = spine_maps(l2, 2, l2->zero());
  CHECK(z.s_point == ConvexSubgroup::zero());
  CHECK(z.t_point == ConvexSubgroup::zero());
  CHECK(z.t_plus_point == ConvexSubgroup::zero());

  auto e0 = spine_maps(l2, 2, el(l2, {{0, 1}}));
  CHECK(e0.t_plus_point == ConvexSubgroup::full());
  CHECK(e0.t_plus_empty_intersection);

  // the spine-point witness of the nonconvex case in the modular family
  auto pm = make_group(GroupSpec::poly_mod(2, 2));
  CHECK(spine_maps(pm, 4, el(pm, {{0, 4}})).s_point == ConvexSubgroup::zero());
}

TEST_CASE("sharp closed forms against the finite-chain literal intersection") {
  auto f2 = make_group(GroupSpec::free_lex(2));
  auto s = sharp(f2, ConvexSubgroup::zero(), 2, 2);
  auto expect = bind_subgroup(f2, shift(tail(1), 2, 2));
  CHECK(profiles_equal(f2, s.prof, expect.prof));

  auto l3 = make_group(GroupSpec::local_lex(3));
  auto s2 = sharp(l3, ConvexSubgroup::tail(2), 3, 2);
  for (std::uint64_t i = 0; i < 60; ++i) {
    Element x = random_element(l3, 4, 9, 40 + i);
    CHECK(member(s2, x) == (vp(x.coeff(0), 3) >= 2 || x.coeff(0) == 0));
  }

  auto pm = make_group(GroupSpec::poly_mod(2, 2));
  auto s3 = sharp(pm, ConvexSubgroup::zero(), 2, 3);
  for (std::uint64_t i = 0; i < 60; ++i) {
    Element x = random_element(pm, 5, 16, 60 + i);
    bool all8 = true;
    for (const auto& [j, c] : x.coords())
      if (to_int(c) % 8 != 0) all8 = false;
    CHECK(member(s3, x) == all8);
  }
}

TEST_CASE("convexify_sharp: witnesses and reported conditions") {
  auto f2 = make_group(GroupSpec::free_lex(2));
  auto r1 = convexify_sharp(f2, ConvexSubgroup::zero(), 2, 2);
  REQUIRE(r1.witness.has_value());
  CHECK(*r1.witness == ConvexSubgroup::tail(1));

  auto l2 = make_group(GroupSpec::local_lex(2));
  auto r2 = convexify_sharp(l2, ConvexSubgroup::tail(5), 2, 2);
  REQUIRE(r2.witness.has_value());
  CHECK(*r2.witness == ConvexSubgroup::tail(4));
  // the zero subgroup also convexifies in the localized family: condition (3) fails
  auto r3 = convexify_sharp(l2, ConvexSubgroup::zero(), 2, 2);
  CHECK(r3.witness.has_value());
  CHECK(!r3.cond_realized_as_spine_point);

  auto pm = make_group(GroupSpec::poly_mod(2, 2));
  auto r4 = convexify_sharp(pm, ConvexSubgroup::zero(), 2, 2);
  CHECK(!r4.witness.has_value());
  CHECK(r4.cond_infinitely_many_between);
  CHECK(r4.cond_chain_intersection);
  CHECK(r4.cond_realized_as_spine_point);
  REQUIRE(r4.spine_witness.has_value());
  CHECK(*r4.spine_witness == el(pm, {{0, 4}}));
}

TEST_CASE("convexify agrees with the three conditions across a grid") {
  std::vector<GroupSpec> specs = {GroupSpec::free_lex(3), GroupSpec::local_lex(2),
                                  GroupSpec::poly_mod(2, 2), GroupSpec::poly_mod(3, 1),
                                  GroupSpec::poly_part({{2, 2, 0}, {3, 1, 1}})};
  for (const auto& spec : specs) {
    auto g = make_group(spec);
    for (Int p : {Int(2), Int(3)})
      for (unsigned s = 1; s <= 3; ++s) {
        std::vector<ConvexSubgroup> alphas{ConvexSubgroup::zero(), ConvexSubgroup::full(),
                                           ConvexSubgroup::tail(1), ConvexSubgroup::tail(2)};
        for (const auto& a : alphas) {
          auto r = convexify_sharp(g, a, p, s);
          bool all3 = r.cond_infinitely_many_between && r.cond_chain_intersection &&
                      r.cond_realized_as_spine_point;
          CHECK(r.witness.has_value() == !all3);
        }
      }
  }
}

TEST_CASE("subgroup_eq: normal forms, witnesses, and the shifted-meet identity") {
  auto f3 = make_group(GroupSpec::free_lex(3));
  auto a = parse_subgroup_expr("shift(tail(2),2,2)", f3);
  auto b = parse_subgroup_expr("shift(tail(2),2,2)", f3);
  CHECK(subgroup_eq(a, b, 50, 1).verdict == EqVerdict::EqualByNormalForm);

  auto pm = make_group(GroupSpec::poly_mod(2, 2));
  auto s22 = parse_subgroup_expr("sharp(zero,2,2)", pm);
  auto g4 = parse_subgroup_expr("shift(zero,2,2)", pm);
  auto r = subgroup_eq(s22, g4, 100, 2);
  REQUIRE(r.verdict == EqVerdict::NotEqual);
  REQUIRE(r.witness.has_value());
  CHECK(member(s22, *r.witness) != member(g4, *r.witness));

  // (S#(0,2,3)+2G) meet (S#(0,2,2)+4G) = S#(0,2,3)+4G in the all-(2,2) family
  std::vector<PartConstraint> cs;
  for (unsigned i = 0; i < 8; ++i) cs.push_back({2, 2, i});
  auto g72 = make_group(GroupSpec::poly_part(cs));
  auto lhs = parse_subgroup_expr("meet(shift(sharp(zero,2,3),2,1),shift(sharp(zero,2,2),2,2))", g72);
  auto rhs = parse_subgroup_expr("shift(sharp(zero,2,3),2,2)", g72);
  CHECK(subgroup_eq(lhs, rhs, 50, 3).verdict == EqVerdict::EqualByNormalForm);
}

TEST_CASE("tail arithmetic across exponents keeps normal-form equality") {
  // if Tail(a)+pG = Tail(b)+pG by normal form then the same holds mod p^r
  auto l2 = make_group(GroupSpec::local_lex(2));
  for (std::uint32_t a = 0; a <= 3; ++a)
    for (std::uint32_t b = 0; b <= 3; ++b)
      for (Int p : {Int(2), Int(3)}) {
        auto lo_a = bind_subgroup(l2, shift(tail(a), p, 1));
        auto lo_b = bind_subgroup(l2, shift(tail(b), p, 1));
        if (!profiles_equal(l2, lo_a.prof, lo_b.prof)) continue;
        for (unsigned r = 2; r <= 3; ++r) {
          auto hi_a = bind_subgroup(l2, shift(tail(a), p, r));
          auto hi_b = bind_subgroup(l2, shift(tail(b), p, r));
          CHECK(profiles_equal(l2, hi_a.prof, hi_b.prof));
        }
      }
}

TEST_CASE("describe normalizes chain meets") {
  auto f3 = make_group(GroupSpec::free_lex(3));
  auto m = parse_subgroup_expr("meet(tail(1),tail(2))", f3);
  CHECK(describe(m) == "tail(2)");
  CHECK_THROWS_AS(parse_subgroup_expr("sharp(tail(9),2,1)", f3), UnknownConvex);
}
