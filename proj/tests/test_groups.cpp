#include <doctest.h>

#include "oag/group.hpp"
#include "oag/parse.hpp"
#include "oag/rng.hpp"

using namespace oag;

namespace {

Element el(const GroupHandle& g, std::vector<std::pair<std::uint32_t, Rat>> c) {
  return g->element(std::move(c));
}

}  // namespace

TEST_CASE("make_group: families and invalid specs") {
  auto f3 = make_group(GroupSpec::free_lex(3));
  CHECK(f3->finite_rank() == 3u);
  CHECK(f3->describe().find("0..2") != std::string::npos);

  auto pm = make_group(GroupSpec::poly_mod(2, 2));
  CHECK(!pm->finite_rank());
  // constraint predicate rejects q = 2: sum 2, 4 does not divide 2
  CHECK(pm->check_coords({{0u, Rat(2)}}).has_value());
  CHECK(!pm->check_coords({{0u, Rat(4)}}).has_value());

  auto pp = make_group(GroupSpec::poly_part({{2, 2, 0}}));
  // 4*t^1: coordinate 1 has 2-adic valuation 0, cell 0 sum is 4
  CHECK(!pp->check_coords({{1u, Rat(4)}}).has_value());
  CHECK(pp->check_coords({{1u, Rat(2)}}).has_value());

  CHECK_THROWS_AS(make_group(GroupSpec::poly_mod(4, 1)), InvalidSpec);
  CHECK_THROWS_AS(make_group(GroupSpec::poly_mod(2, 0)), InvalidSpec);
  CHECK_THROWS_AS(make_group(GroupSpec::poly_part({{2, 1, 0}, {3, 1, 0}})), InvalidSpec);
}

TEST_CASE("arithmetic basics") {
  auto f3 = make_group(GroupSpec::free_lex(3));
  auto x = el(f3, {{0, 1}});
  auto y = el(f3, {{1, 1}});
  CHECK(add(x, y) == el(f3, {{0, 1}, {1, 1}}));

  auto l2 = make_group(GroupSpec::local_lex(2));
  auto a = el(l2, {{0, Rat(1, 3)}});
  auto b = el(l2, {{0, Rat(2, 3)}});
  CHECK(add(a, b) == el(l2, {{0, 1}}));

  auto pm = make_group(GroupSpec::poly_mod(2, 2));
  auto q = el(pm, {{0, 2}, {1, 2}});
  CHECK(add(q, q) == el(pm, {{0, 4}, {1, 4}}));
  CHECK(scalar_mul(2, q) == el(pm, {{0, 4}, {1, 4}}));
  CHECK(scalar_mul(0, q).is_zero());
  CHECK(scalar_mul(3, el(f3, {{1, 1}})) == el(f3, {{1, 3}}));
}

TEST_CASE("lexicographic comparison, index 0 most significant") {
  auto f2 = make_group(GroupSpec::free_lex(2));
  CHECK(compare(el(f2, {{0, 1}, {1, -5}}), el(f2, {{1, 100}})) == Cmp::GT);
  auto pm = make_group(GroupSpec::poly_mod(2, 1));
  CHECK(compare(el(pm, {{0, 2}}), el(pm, {{1, 2}})) == Cmp::GT);
  auto x = el(f2, {{0, 3}});
  CHECK(compare(x, x) == Cmp::EQ);
}

TEST_CASE("divide_exact checks both coefficients and constraints") {
  auto l3 = make_group(GroupSpec::local_lex(3));
  auto v = el(l3, {{0, 9}, {1, 3}});
  CHECK(divide_exact(v, 3) == el(l3, {{0, 3}, {1, 1}}));

  auto pm = make_group(GroupSpec::poly_mod(2, 2));
  CHECK(divide_exact(el(pm, {{0, 4}, {1, 4}}), 2) == el(pm, {{0, 2}, {1, 2}}));
  // 2/2 = 1 has coefficient sum 1, not divisible by 4
  CHECK_THROWS_AS(divide_exact(el(pm, {{0, 4}}), 2), NotDivisible);
  CHECK_THROWS_AS(divide_exact(el(pm, {{0, 4}, {1, 4}}), 3), NotDivisible);
}

TEST_CASE("group axioms and order compatibility on samples") {
  for (auto spec : {GroupSpec::free_lex(3), GroupSpec::local_lex(2), GroupSpec::poly_mod(2, 2),
                    GroupSpec::poly_part({{2, 2, 0}, {3, 1, 1}})}) {
    auto g = make_group(spec);
    for (std::uint64_t i = 0; i < 40; ++i) {
      auto x = random_element(g, 6, 8, 1000 + i);
      auto y = random_element(g, 6, 8, 2000 + i);
      auto z = random_element(g, 6, 8, 3000 + i);
      CHECK(add(x, y) == add(y, x));
      CHECK(add(add(x, y), z) == add(x, add(y, z)));
      CHECK(add(x, neg(x)).is_zero());
      if (compare(x, y) == Cmp::LT) CHECK(compare(add(x, z), add(y, z)) == Cmp::LT);
      for (Int c : {Int(2), Int(3), Int(-5)})
        CHECK(divide_exact(scalar_mul(c, x), c) == x);
    }
  }
}

TEST_CASE("random_element is deterministic and constraint-respecting") {
  auto pm = make_group(GroupSpec::poly_mod(2, 2));
  CHECK(random_element(pm, 6, 9, 77) == random_element(pm, 6, 9, 77));
  for (std::uint64_t i = 0; i < 1000; ++i) {
    auto x = random_element(pm, 6, 9, i);
    Int sum = 0;
    for (const auto& [j, c] : x.coords()) sum += to_int(c);
    CHECK(sum % 4 == 0);
  }
  auto l2 = make_group(GroupSpec::local_lex(2));
  for (std::uint64_t i = 0; i < 1000; ++i) {
    auto x = random_element(l2, 6, 9, i);
    for (const auto& [j, c] : x.coords()) CHECK(den(c) % 2 != 0);
  }
}

TEST_CASE("parse and format round-trip") {
  auto l2 = make_group(GroupSpec::local_lex(2));
  auto x = parse_element("3*e0 + 1/5*e2", l2);
  CHECK(x == el(l2, {{0, 3}, {2, Rat(1, 5)}}));

  auto pm = make_group(GroupSpec::poly_mod(2, 2));
  CHECK_THROWS_AS(parse_element("4 + 2*t^3", pm), ConstraintViolation);
  CHECK(parse_element("", pm).is_zero());
  CHECK(parse_element("4 + 4*t^3", pm) == el(pm, {{0, 4}, {3, 4}}));

  for (auto spec : {GroupSpec::free_lex(4), GroupSpec::local_lex(3), GroupSpec::poly_mod(2, 2),
                    GroupSpec::poly_part({{2, 1, 0}, {2, 2, 2}})}) {
    auto g = make_group(spec);
    for (std::uint64_t i = 0; i < 200; ++i) {
      auto x = random_element(g, 6, 9, 500 + i);
      CHECK(parse_element(format_element(x), g) == x);
    }
  }
}

TEST_CASE("parse errors carry positions") {
  auto f3 = make_group(GroupSpec::free_lex(3));
  CHECK_THROWS_AS(parse_element("3*e0 + ", f3), ParseError);
  CHECK_THROWS_AS(parse_element("e9", f3), ConstraintViolation);  // support outside rank
  CHECK_THROWS_AS(parse_element("1/0*e0", f3), ParseError);
}
