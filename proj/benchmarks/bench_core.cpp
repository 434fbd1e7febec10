#include <benchmark/benchmark.h>

#include "cantordyn/folding.hpp"
#include "cantordyn/linear_model.hpp"
#include "cantordyn/multicurve.hpp"
#include "cantordyn/tree_tower.hpp"

using namespace cantordyn;

namespace {

MapSpec fixture(const char* name) {
  return load_valid_map_spec(std::string(CANTORDYN_FIXTURE_DIR) + "/" + name + ".spec");
}

// Dense n×n matrix with a positive diagonal band and a wrap-around cycle.
IntegerMatrix banded(std::size_t n) {
  IntegerMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 1;
    m(i, (i + 1) % n) = 2;
    m((i + 3) % n, i) = 1;
  }
  return m;
}

void BM_LeadingEigenvalue(benchmark::State& state) {
  auto m = banded(static_cast<std::size_t>(state.range(0)));
  const Rational width = make_rational(1, 1 << 30);
  for (auto _ : state) benchmark::DoNotOptimize(leading_eigenvalue(m, width));
}
BENCHMARK(BM_LeadingEigenvalue)->Arg(4)->Arg(8)->Arg(16);

void BM_Analyze(benchmark::State& state) {
  MapSpec s = fixture("airplane");
  Multicurve g(s, {"beta", "gamma0"});
  for (auto _ : state) benchmark::DoNotOptimize(analyze(s, g, default_bracket_width(), 6));
}
BENCHMARK(BM_Analyze);

void BM_Refine(benchmark::State& state) {
  MapSpec s = fixture("apply2_g2");
  auto sys = from_annular_rules(s, config_multicurve(s));
  for (auto _ : state) benchmark::DoNotOptimize(refine(sys, static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_Refine)->Arg(2)->Arg(4)->Arg(6);

void BM_TowerBuild(benchmark::State& state) {
  MapSpec s = fixture("airplane");
  Multicurve g = config_multicurve(s);
  for (auto _ : state) benchmark::DoNotOptimize(tower_build(s, g, static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_TowerBuild)->Arg(4)->Arg(8)->Arg(10);

void BM_Census(benchmark::State& state) {
  MapSpec s = fixture("nested_pair");
  Multicurve g = config_multicurve(s);
  for (auto _ : state) benchmark::DoNotOptimize(decomposition_census(s, g, static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_Census)->Arg(8)->Arg(32);

void BM_FindObstruction(benchmark::State& state) {
  MapSpec s = emit_map_spec(plan_from_recipe({Recipe::apply2, 3, 0, 40, 8, 3}));
  for (auto _ : state) benchmark::DoNotOptimize(find_obstruction(s));
}
BENCHMARK(BM_FindObstruction);

}  // namespace
BENCHMARK_MAIN();
