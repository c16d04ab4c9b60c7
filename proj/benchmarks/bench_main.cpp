#include <benchmark/benchmark.h>

#include "oag/cosetlogic.hpp"
#include "oag/parse.hpp"
#include "oag/quotient.hpp"

using namespace oag;

static void BM_ProfileMember(benchmark::State& state) {
  auto g = make_group(GroupSpec::poly_mod(2, 2));
  auto s = parse_subgroup_expr("shift(sharp(zero,2,3),2,2)", g);
  auto x = random_element(g, 8, 16, 42);
  for (auto _ : state) benchmark::DoNotOptimize(member(s, x));
}
BENCHMARK(BM_ProfileMember);

static void BM_OracleMember(benchmark::State& state) {
  auto g = make_group(GroupSpec::poly_mod(2, 2));
  auto s = parse_subgroup_expr("shift(sharp(zero,2,3),2,2)", g);
  auto x = random_element(g, 8, 16, 42);
  for (auto _ : state) benchmark::DoNotOptimize(member_oracle(g, s.expr, x));
}
BENCHMARK(BM_OracleMember);

static void BM_ProfileBind(benchmark::State& state) {
  auto g = make_group(GroupSpec::poly_part({{2, 2, 0}, {2, 2, 1}, {3, 1, 2}}));
  auto e = parse_subgroup_text("meet(shift(sharp(zero,2,3),2,1),shift(sharp(zero,2,2),2,2))");
  for (auto _ : state) benchmark::DoNotOptimize(bind_subgroup(g, e));
}
BENCHMARK(BM_ProfileBind);

static void BM_IndexClosure(benchmark::State& state) {
  auto g = make_group(GroupSpec::free_lex(static_cast<unsigned>(state.range(0))));
  auto a = bind_subgroup(g, full_group());
  auto b = bind_subgroup(g, pk_g(2, 3));
  for (auto _ : state) benchmark::DoNotOptimize(index(a, b, 32));
}
BENCHMARK(BM_IndexClosure)->Arg(2)->Arg(3)->Arg(4);

static void BM_SaturationSweep(benchmark::State& state) {
  using namespace cosetlogic;
  auto amb = make_ambient({8, 8});
  Subgrp full{{{1, 0}, {0, 1}}};
  Subgrp m1{{{2, 0}, {0, 1}}};
  Subgrp gp{{{2, 0}, {0, 2}}};
  CosetSystem sys{{0, 0}, full, {{{0, 0}, m1}}};
  for (auto _ : state)
    for (std::int64_t code = 0; code < amb.order(); ++code)
      benchmark::DoNotOptimize(saturation_membership(sys, gp, amb, amb.decode(code)));
}
BENCHMARK(BM_SaturationSweep);

BENCHMARK_MAIN();
