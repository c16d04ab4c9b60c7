#include <doctest.h>

#include "oag/parse.hpp"

using namespace oag;

TEST_CASE("group spec grammar") {
  CHECK(parse_group_spec("freelex(3)").family == Family::FreeLex);
  CHECK(parse_group_spec("freelex(3)").rank == 3);
  auto l = parse_group_spec("locallex(p=3)");
  CHECK(l.family == Family::LocalLex);
  CHECK(l.p == 3);
  auto pm = parse_group_spec("polymod(p=2,n=2)");
  CHECK(pm.n == 2);
  auto pp = parse_group_spec("polypart((2,2),(2,2),(3,1))");
  REQUIRE(pp.constraints.size() == 3);
  CHECK(pp.constraints[2].p == 3);
  CHECK(pp.constraints[2].cell == 2);
  CHECK_THROWS_AS(parse_group_spec("polymod(p=4,n=1)"), ParseError);
  CHECK_THROWS_AS(parse_group_spec("ring(3)"), ParseError);
  CHECK_THROWS_AS(parse_group_spec("freelex(3) junk"), ParseError);
}

TEST_CASE("subgroup grammar round-trips through to_string") {
  auto f3 = make_group(GroupSpec::free_lex(3));
  for (const char* text : {"tail(2)", "zero", "full", "sharp(tail(1),2,2)",
                           "shift(sharp(zero,2,3),2,2)", "meet(tail(1),shift(zero,2,1))",
                           "join(tail(2),scale(2,1,full))"}) {
    auto b = parse_subgroup_expr(text, f3);
    auto again = parse_subgroup_expr(b.expr.to_string(), f3);
    CHECK(profiles_equal(f3, b.prof, again.prof));
  }
  CHECK_THROWS_AS(parse_subgroup_expr("sharp(tail(9),2,1)", f3), UnknownConvex);
  CHECK_THROWS_AS(parse_subgroup_expr("meet(tail(1)", f3), ParseError);
  CHECK_THROWS_AS(parse_subgroup_expr("shift(full,6,1)", f3), ParseError);
}

TEST_CASE("parse errors report positions") {
  try {
    parse_group_spec("polymod(p=2,m=2)");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.pos > 10);
  }
}
