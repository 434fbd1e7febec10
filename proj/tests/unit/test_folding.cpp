#include <gtest/gtest.h>

#include "cantordyn/folding.hpp"
#include "cantordyn/multicurve.hpp"
#include "cantordyn/tree_tower.hpp"

using namespace cantordyn;

namespace {

std::string fixture(const std::string& name) { return std::string(CANTORDYN_FIXTURE_DIR) + "/" + name; }

FoldingPlan plan_with(FoldingType type, std::vector<int> degrees, int p = 8) {
  FoldingPlan plan;
  plan.type = type;
  plan.degrees = std::move(degrees);
  plan.polynomial_degrees = {plan.degrees.front()};
  plan.post_critical_count = p;
  plan.inner_marked = p - p / 2;
  plan.outer_marked = p / 2;
  return plan;
}

RecipeInput recipe(Recipe r, int g1, int degree, int g2 = 0) {
  RecipeInput in;
  in.recipe = r;
  in.deg_g1 = g1;
  in.deg_g2 = g2;
  in.degree = degree;
  return in;
}

RationalMatrix rational_matrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  RationalMatrix m(rows.size());
  std::size_t i = 0;
  for (auto r : rows) {
    std::size_t j = 0;
    for (const auto& x : r) m(i, j++) = x;
    ++i;
  }
  return m;
}

}  // namespace

TEST(ClassifyType, Cases) {
  EXPECT_EQ(classify_type(Side::inner, Side::inner, 2), FoldingType::A);
  EXPECT_EQ(classify_type(Side::outer, Side::outer, 4), FoldingType::A);
  EXPECT_EQ(classify_type(Side::inner, Side::outer, 3), FoldingType::B);
  EXPECT_EQ(classify_type(Side::outer, Side::inner, 3), FoldingType::C);
  EXPECT_THROW(classify_type(Side::inner, Side::inner, 3), FoldingError);
  EXPECT_THROW(classify_type(Side::inner, Side::outer, 2), FoldingError);
}

TEST(LambdaBeta, Sums) {
  EXPECT_EQ(lambda_beta({4, 4}), make_rational(1, 2));
  EXPECT_EQ(lambda_beta({2, 3}), make_rational(5, 6));
  EXPECT_EQ(lambda_beta({2, 7, 7, 7}), make_rational(13, 14));
}

TEST(Feasibility, Constructions) {
  EXPECT_TRUE(feasible_A(2, 2, {2, 3}));
  EXPECT_FALSE(feasible_A(2, 2, {2, 2}));
  EXPECT_FALSE(feasible_A(2, 3, {2, 7, 7}));
  EXPECT_FALSE(feasible_A(3, 2, {2, 7}));
  EXPECT_TRUE(feasible_B(2, 3, 3, {2, 7, 3}));
  EXPECT_FALSE(feasible_B(2, 2, 3, {2, 7, 2}));  // deg g₁ + deg g₂ < 5
  EXPECT_FALSE(feasible_B(2, 3, 4, {2, 7, 7, 3}));
  EXPECT_FALSE(feasibility_A(2, 2, {2, 3}, 2).ok());
}

TEST(MinDegree, Bounds) {
  EXPECT_EQ(min_degree_apply1(2), 5);
  EXPECT_EQ(min_degree_apply1(3), 5);
  EXPECT_EQ(min_degree_apply1(6), 8);
  EXPECT_EQ(min_degree_apply1_pair(2, 3), 12);
  EXPECT_EQ(min_degree_apply2(2), 23);
  EXPECT_EQ(min_degree_apply2(3), 35);
  EXPECT_EQ(min_degree_apply2_pair(2, 3), 25);
  EXPECT_THROW(min_degree_apply1_pair(2, 2), FoldingError);
  EXPECT_THROW(min_degree_apply1(1), FoldingError);
}

TEST(PlanFromRecipe, Examples) {
  auto p2 = plan_from_recipe(recipe(Recipe::apply2, 2, 23));
  EXPECT_EQ(p2.type, FoldingType::A);
  EXPECT_EQ(p2.degrees, (std::vector<int>{2, 7, 7, 7}));
  EXPECT_EQ(p2.lambda_beta(), make_rational(13, 14));
  EXPECT_EQ(p2.d0(), 2);
  auto p1 = plan_from_recipe(recipe(Recipe::apply1, 2, 5));
  EXPECT_EQ(p1.degrees, (std::vector<int>{2, 3}));
  auto pp = plan_from_recipe(recipe(Recipe::apply2_pair, 2, 25, 3));
  EXPECT_EQ(pp.type, FoldingType::B);
  EXPECT_EQ(pp.degrees, (std::vector<int>{2, 20, 3}));
  EXPECT_LT(pp.lambda_beta(), 1);
  EXPECT_THROW(plan_from_recipe(recipe(Recipe::apply2, 2, 22)), FoldingError);
}

TEST(PlanFromRecipe, DegreesSumToTarget) {
  for (int d = 23; d < 40; ++d) {
    auto p = plan_from_recipe(recipe(Recipe::apply2, 2, d));
    EXPECT_EQ(p.total_degree(), d);
    EXPECT_LT(p.d0(), p.m());
  }
}

TEST(TypeC, SquaresToTypeB) {
  auto c = plan_with(FoldingType::C, {2, 5, 3});
  EXPECT_THROW(c.d0(), FoldingError);
  auto sq = square_if_type_c(c);
  EXPECT_EQ(sq.type, FoldingType::B);
  EXPECT_TRUE(sq.squared);
  EXPECT_EQ(sq.m(), 9);
  EXPECT_EQ(sq.total_degree(), 10 * 10);
  // λ(F²) = λ(F)² and d(F², β) = d₁d_m, the square of the geometric mean.
  EXPECT_EQ(sq.lambda_beta(), c.lambda_beta() * c.lambda_beta());
  EXPECT_EQ(sq.d0(), 6);
  auto a = plan_with(FoldingType::A, {4, 4});
  EXPECT_EQ(square_if_type_c(a), a);
}

TEST(CheckPlan, Structure) {
  EXPECT_NO_THROW(check_plan(plan_with(FoldingType::A, {2, 7, 7, 7})));
  EXPECT_THROW(check_plan(plan_with(FoldingType::A, {2, 7, 7})), FoldingError);
  EXPECT_THROW(check_plan(plan_with(FoldingType::A, {2})), FoldingError);
  auto bad_split = plan_with(FoldingType::A, {2, 3});
  bad_split.outer_marked = 1;
  EXPECT_THROW(check_plan(bad_split), FoldingError);
}

TEST(DegreeCriterion, Cases) {
  auto airplane = load_plan(fixture("plans/airplane.plan"));
  EXPECT_FALSE(check_thm_no1(airplane).applicable);
  auto c = check_thm_no1(plan_from_recipe(recipe(Recipe::apply2, 2, 23)));
  ASSERT_TRUE(c.accepted);
  EXPECT_EQ(c.N, 3u);
  EXPECT_TRUE(c.verify());
  auto one = check_thm_no1(plan_with(FoldingType::A, {1, 3}, 4));
  EXPECT_EQ(one.N, 1u);
}

TEST(DegreeCriterion, SmallestN) {
  for (int p = 4; p < 40; p += 5)
    for (int m = 2; m <= 6; m += 2) {
      std::vector<int> degs(static_cast<std::size_t>(m), 2 * m);
      degs.front() = m - 1;
      auto c = check_thm_no1(plan_with(FoldingType::A, degs, p));
      ASSERT_TRUE(c.N);
      auto holds = [&](unsigned n) {
        BigInt lhs = p - 3, rhs = 1;
        for (unsigned i = 0; i < n; ++i) {
          lhs *= m - 1;
          rhs *= m;
        }
        return lhs < rhs;
      };
      EXPECT_TRUE(holds(*c.N));
      if (*c.N > 1) EXPECT_FALSE(holds(*c.N - 1));
    }
}

TEST(WitnessCriterion, Declared) {
  auto plan = plan_from_recipe(recipe(Recipe::apply1, 2, 5));
  EXPECT_THROW(check_thm_no2(plan), FoldingError);
  plan.witness = InjectiveTreeWitness{2, true, true};
  auto ok = check_thm_no2(plan);
  EXPECT_TRUE(ok.accepted);
  EXPECT_TRUE(ok.warnings.empty());
  EXPECT_NE(ok.to_text().find("conditional on declared witness"), std::string::npos);
  plan.witness = InjectiveTreeWitness{2, true, false};
  auto sierpinski = check_thm_no2(plan);
  EXPECT_TRUE(sierpinski.accepted);
  EXPECT_EQ(sierpinski.warnings, (std::vector<std::string>{"no two bounded Fatou domains touch"}));
  plan.witness = InjectiveTreeWitness{0, true, true};
  EXPECT_FALSE(check_thm_no2(plan).accepted);
  plan.witness = InjectiveTreeWitness{2, false, true};
  EXPECT_FALSE(check_thm_no2(plan).accepted);
}

TEST(EntryBound, Examples) {
  const Rational h = make_rational(1, 2);
  auto c = entry_bound_check(rational_matrix({{0, h}, {h, 0}}), {2, 2}, 1, 2, 8);
  EXPECT_TRUE(c.accepted);
  EXPECT_EQ(c.v, (std::vector<Rational>{make_rational(1, 4), make_rational(1, 4)}));
  EXPECT_EQ(c.matrix->apply(c.v), (std::vector<Rational>{make_rational(1, 8), make_rational(1, 8)}));
  EXPECT_TRUE(c.verify());
  // d₀ = 2, m = 4: the bound d₀k_j²/(m k_i²) = 1/2 is attained, but a 2-cycle
  // with entries 1/2 breaks M v ≤ v/m, so the degrees are inconsistent.
  auto cycle = entry_bound_check(rational_matrix({{0, h}, {h, 0}}), {2, 2}, 2, 4, 8);
  EXPECT_FALSE(cycle.accepted);
  EXPECT_TRUE(cycle.verify());
  auto over = entry_bound_check(rational_matrix({{0, make_rational(3, 4)}, {h, 0}}), {2, 2}, 2, 4, 8);
  EXPECT_FALSE(over.accepted);
  EXPECT_THROW(entry_bound_check(rational_matrix({{0, h}, {h, 0}}), {2, 0}, 2, 4, 8), std::invalid_argument);
  EXPECT_FALSE(entry_bound_check(rational_matrix({{0, h}, {h, 0}}), {0, 0}, 2, 4, 8).applicable);
}

TEST(EntryBound, SingleCycleExtremal) {
  // a_{j,j+1} = k_{j+1}/(m k_j) gives M v = v/m for v = 1/k.
  const std::vector<BigInt> k{1, 2, 3};
  RationalMatrix m(3);
  for (std::size_t j = 0; j < 3; ++j) m(j, (j + 1) % 3) = Rational(k[(j + 1) % 3]) / Rational(2 * k[j]);
  auto c = entry_bound_check(m, k, 9, 2, 5);
  ASSERT_TRUE(c.cycle_scale);
  EXPECT_EQ(*c.cycle_scale, make_rational(1, 2));
  auto mv = m.apply(c.cycle_v);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(mv[i], c.cycle_v[i] / 2);
}

TEST(Emit, AirplanePlanGivesTheFixture) {
  auto spec = emit_map_spec(load_plan(fixture("plans/airplane.plan")));
  EXPECT_EQ(serialize_map_spec(spec), serialize_map_spec(load_valid_map_spec(fixture("airplane_folding.spec"))));
}

TEST(Emit, SpecsValidateAndAreCantor) {
  for (auto plan : {plan_from_recipe(recipe(Recipe::apply2, 2, 23)), plan_from_recipe(recipe(Recipe::apply1, 2, 5)),
                    plan_from_recipe(recipe(Recipe::apply2_pair, 2, 25, 3))}) {
    MapSpec s = emit_map_spec(plan);
    EXPECT_TRUE(validate(s).ok()) << plan.recipe;
    EXPECT_EQ(s.degree, plan.total_degree());
    Multicurve beta(s, {"beta"});
    EXPECT_EQ(transition_matrix(s, beta).entries(0, 0), plan.lambda_beta());
    EXPECT_EQ(reduced_matrix(s, beta).entries(0, 0), plan.m());
    EXPECT_TRUE(is_cantor(s, beta));
  }
  auto apply2 = emit_map_spec(plan_from_recipe(recipe(Recipe::apply2, 2, 23)));
  auto t = tower_build(apply2, Multicurve(apply2, {"beta"}), 1);
  EXPECT_EQ(t.trees[1].edges.size(), 4u);
  EXPECT_TRUE(t.trees[1].is_tree());
}

TEST(Emit, TooManyMarkedPointsForTheDegree) {
  auto plan = plan_with(FoldingType::A, {2, 3}, 14);
  plan.inner_marked = 2;
  plan.outer_marked = 12;
  EXPECT_THROW(emit_map_spec(plan), FoldingError);
}

TEST(FindObstruction, Fixtures) {
  auto airplane = find_obstruction(load_valid_map_spec(fixture("airplane.spec")));
  EXPECT_TRUE(airplane.accepted);
  EXPECT_EQ(airplane.multicurve, (std::vector<std::string>{"gamma0"}));
  EXPECT_FALSE(find_obstruction(emit_map_spec(plan_from_recipe(recipe(Recipe::apply2, 2, 23)))).accepted);
}

TEST(AirplaneParameter, Bracket) {
  auto a = airplane_parameter(make_rational(1, 1000000));
  EXPECT_TRUE(a.sign_change);
  EXPECT_TRUE(a.period_three);
  EXPECT_TRUE(a.ordering);
  EXPECT_LE(a.hi - a.lo, make_rational(1, 1000000));
  // Both ends round to the six-decimal bracket [−1.754878, −1.754877].
  const Rational ulp = make_rational(1, 2000000);
  EXPECT_LE(abs(Rational(a.lo - parse_rational("-1.754878"))), ulp);
  EXPECT_LE(abs(Rational(a.hi - parse_rational("-1.754877"))), ulp);
  // Independent check: f changes sign across the bracket.
  auto f = [](const Rational& c) { return Rational((c * c + c) * (c * c + c) + c); };
  EXPECT_LT(f(a.lo) * f(a.hi), 0);
}

TEST(PlanFile, RoundTrip) {
  auto plan = plan_from_recipe(recipe(Recipe::apply2_pair, 2, 25, 3));
  plan.witness = InjectiveTreeWitness{3, true, false};
  EXPECT_EQ(parse_plan(serialize_plan(plan)), plan);
  auto text = serialize_plan(load_plan(fixture("plans/apply2_g2.plan")));
  EXPECT_EQ(serialize_plan(parse_plan(text)), text);
  EXPECT_THROW(parse_plan("{"), std::exception);
}
