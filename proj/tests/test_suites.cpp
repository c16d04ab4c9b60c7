#include <doctest.h>

#include "oag/suites.hpp"

using namespace oag;

TEST_CASE("every registry entry executes and reports") {
  for (const auto& id : registry_ids()) {
    LemmaCase c;
    c.id = id;
    c.spec = default_spec_for(id);
    c.samples = 40;  // trimmed grids for the unit pass
    c.seed = 7;
    auto rep = run_lemma_suite(c);
    CHECK(!rep.cases.empty());
    CHECK(rep.passed());
  }
}

TEST_CASE("unknown ids and incompatible families are rejected") {
  LemmaCase c;
  c.id = "no-such-lemma";
  c.spec = GroupSpec::poly_mod(2, 2);
  CHECK_THROWS_AS(run_lemma_suite(c), UnknownLemma);

  LemmaCase d;
  d.id = "dim71";
  d.spec = GroupSpec::free_lex(3);
  CHECK_THROWS_AS(run_lemma_suite(d), IncompatibleFamily);

  LemmaCase e;
  e.id = "cex72";
  e.spec = GroupSpec::poly_mod(2, 2);
  CHECK_THROWS_AS(run_lemma_suite(e), WrongFamily);
}

TEST_CASE("dimension profile tables") {
  auto rows = dim_profile(GroupSpec::poly_mod(2, 2), 2, 4);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].dim == IndexValue::finite(0));
  CHECK(rows[1].dim == IndexValue::finite(1));
  CHECK(rows[2].dim == IndexValue::finite(0));
  CHECK(rows[3].dim == IndexValue::finite(0));

  auto csv = dim_profile_csv(rows);
  CHECK(csv.find("s,dim_tag,dim_value") == 0);
  CHECK(csv.find("2,finite,1") != std::string::npos);

  auto pp = GroupSpec::poly_part({{2, 2, 0}, {2, 2, 1}, {3, 1, 2}});
  auto rows2 = dim_profile(pp, 2, 3);
  CHECK(rows2[0].dim == IndexValue::finite(0));
  CHECK(rows2[1].dim == IndexValue::finite(2));
  CHECK(rows2[2].dim == IndexValue::finite(0));
  auto rows3 = dim_profile(pp, 3, 3);
  CHECK(rows3[0].dim == IndexValue::finite(1));
  CHECK(rows3[1].dim == IndexValue::finite(0));
  CHECK(rows3[2].dim == IndexValue::finite(0));

  CHECK_THROWS_AS(dim_profile(GroupSpec::free_lex(3), 2, 3), IncompatibleFamily);
}

TEST_CASE("reports are byte-stable under a fixed seed and cap") {
  LemmaCase c;
  c.id = "tower";
  c.spec = GroupSpec::poly_mod(2, 2);
  c.seed = 99;
  auto a = run_lemma_suite(c).to_json();
  auto b = run_lemma_suite(c).to_json();
  CHECK(a == b);
  // timing is only serialized on request, keeping the default byte-stable
  CHECK(a.find("wall_ms") == std::string::npos);
  CHECK(run_lemma_suite(c).to_json(true).find("wall_ms") != std::string::npos);
}

TEST_CASE("harness self-test: a corrupted group makes a suite fail with a witness") {
  // a handle whose effective constraint disagrees with the declared spec
  GroupSpec declared = GroupSpec::poly_mod(2, 2);
  auto corrupted = make_group_unchecked(declared, {{0u, Int(8)}});

  // the declared pattern expects the dimension bump at s = 2, but elements of
  // the corrupted handle carry the depth-3 constraint, shifting it to s = 3
  bool failed = false;
  std::string witness;
  auto g = corrupted;
  for (unsigned s = 1; s <= 4 && !failed; ++s) {
    auto a = bind_subgroup(g, shift(sharp_expr(ConvexSubgroup::zero(), 2, s), 2, 1));
    auto b = bind_subgroup(g, shift(sharp_expr(ConvexSubgroup::zero(), 2, s + 1), 2, 1));
    auto d = fp_dimension(a, b, 2, 32);
    IndexValue expect = IndexValue::finite(s == declared.n ? 1 : 0);
    if (!(d == expect)) {
      failed = true;
      witness = "s=" + std::to_string(s) + " dim=" + d.to_string();
    }
  }
  CHECK(failed);
  CHECK(!witness.empty());
}
