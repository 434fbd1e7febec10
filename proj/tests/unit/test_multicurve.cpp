#include <gtest/gtest.h>

#include "cantordyn/multicurve.hpp"
#include "random_specs.hpp"

using namespace cantordyn;
using cantordyn::testing::make_spec;

namespace {

std::string fixture(const std::string& name) { return std::string(CANTORDYN_FIXTURE_DIR) + "/" + name; }

const Rational kWidth = make_rational(1, 1 << 30);

// γ₁ pulls back to γ₂ once, γ₂ to γ₁ twice: M_r = [[0,2],[1,0]].
MapSpec swap_spec() { return make_spec(2, {{"g1", {{1, "g2"}, {1, "null"}}}, {"g2", {{1, "g1"}, {1, "g1"}}}}); }

IntegerMatrix integer_matrix(std::initializer_list<std::initializer_list<long>> rows) {
  IntegerMatrix m(rows.size());
  std::size_t i = 0;
  for (auto r : rows) {
    std::size_t j = 0;
    for (long x : r) m(i, j++) = x;
    ++i;
  }
  return m;
}

class Airplane : public ::testing::Test {
 protected:
  MapSpec spec = load_valid_map_spec(fixture("airplane.spec"));
  Multicurve beta{spec, {"beta"}};
  Multicurve gamma0{spec, {"gamma0"}};
};

}  // namespace

TEST(MulticurveType, RejectsBadInput) {
  MapSpec s = swap_spec();
  EXPECT_THROW(Multicurve(s, {}), MulticurveError);
  EXPECT_THROW(Multicurve(s, {"g1", "g1"}), MulticurveError);
  EXPECT_THROW(Multicurve(s, {"p1"}), MulticurveError);
  EXPECT_THROW(Multicurve(s, {"nope"}), MulticurveError);
  Multicurve g(s, {"g2", "g1"});
  EXPECT_EQ(g.index_of("g1"), 1u);
  EXPECT_FALSE(g.contains("p1"));
}

TEST_F(Airplane, TransitionMatrices) {
  auto tg = transition_matrix(spec, gamma0);
  EXPECT_EQ(tg.entries(0, 0), Rational(1));
  EXPECT_EQ(transition_matrix(spec, beta).entries(0, 0), make_rational(1, 2));
  EXPECT_EQ(reduced_matrix(spec, gamma0).entries(0, 0), 2);
  auto both = transition_matrix(spec, Multicurve(spec, {"beta", "gamma0"}));
  EXPECT_EQ(both.entries(0, 1), 0);
  EXPECT_EQ(both.entries(1, 0), 0);
}

TEST(TransitionMatrix, SinglePreimageOfDegreeD) {
  MapSpec s = make_spec(5, {{"g", {{5, "g"}}}});
  Multicurve g(s, {"g"});
  EXPECT_EQ(transition_matrix(s, g).entries(0, 0), make_rational(1, 5));
  EXPECT_EQ(reduced_matrix(s, g).entries(0, 0), 1);
}

TEST(TransitionMatrix, SwapPattern) {
  MapSpec s = swap_spec();
  auto r = reduced_matrix(s, Multicurve(s, {"g1", "g2"}));
  EXPECT_EQ(r.entries, integer_matrix({{0, 2}, {1, 0}}));
  auto t = transition_matrix(s, Multicurve(s, {"g1", "g2"}));
  EXPECT_EQ(t.entries(0, 1), Rational(2));
  EXPECT_EQ(t.entries(1, 0), Rational(1));
}

TEST(LeadingEigenvalue, ExactOne) {
  auto e = leading_eigenvalue(integer_matrix({{1}}), kWidth);
  EXPECT_EQ(e.vs_one, VsOne::equal);
  EXPECT_EQ(e.lo, 1);
  EXPECT_EQ(e.hi, 1);
}

TEST(LeadingEigenvalue, SquareRootOfTwo) {
  auto e = leading_eigenvalue(integer_matrix({{0, 2}, {1, 0}}), kWidth);
  EXPECT_EQ(e.vs_one, VsOne::greater);
  EXPECT_LE(e.hi - e.lo, kWidth);
  EXPECT_LT(e.lo * e.lo, 2);
  EXPECT_GE(e.hi * e.hi, 2);
}

TEST(LeadingEigenvalue, ZeroMatrix) {
  auto e = leading_eigenvalue(IntegerMatrix(3), kWidth);
  EXPECT_EQ(e.vs_one, VsOne::less);
  EXPECT_EQ(e.lo, 0);
  EXPECT_EQ(e.hi, 0);
}

TEST(LeadingEigenvalue, RationalSubOne) {
  RationalMatrix m(1);
  m(0, 0) = make_rational(1, 2);
  auto e = leading_eigenvalue(m, kWidth);
  EXPECT_EQ(e.vs_one, VsOne::less);
  EXPECT_TRUE(e.exact());
  EXPECT_EQ(e.lo, make_rational(1, 2));
}

TEST(LeadingEigenvalue, NilpotentPartDoesNotHideOne) {
  // Jordan-like block with eigenvalue 1 plus a transient edge.
  auto e = leading_eigenvalue(integer_matrix({{1, 1}, {0, 1}}), kWidth);
  EXPECT_EQ(e.vs_one, VsOne::equal);
}

TEST(ComparePerron, OrdersReports) {
  auto a = leading_eigenvalue(integer_matrix({{0, 2}, {1, 0}}), kWidth);
  auto b = leading_eigenvalue(integer_matrix({{0, 1}, {2, 0}}), kWidth);
  auto c = leading_eigenvalue(integer_matrix({{1, 1}, {1, 1}}), kWidth);
  EXPECT_EQ(compare_perron(a, b), 0);
  EXPECT_EQ(compare_perron(a, c), -1);
  EXPECT_EQ(compare_perron(c, a), 1);
}

TEST(Irreducible, Patterns) {
  EXPECT_TRUE(is_irreducible(integer_matrix({{0, 2}, {1, 0}})));
  EXPECT_FALSE(is_irreducible(integer_matrix({{1, 1}, {0, 1}})));
  EXPECT_TRUE(is_irreducible(integer_matrix({{2}})));
  EXPECT_FALSE(is_irreducible(integer_matrix({{0}})));
}

TEST(StronglyConnectedComponents, BlockTriangular) {
  auto sccs = strongly_connected_components(integer_matrix({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}));
  EXPECT_EQ(sccs.size(), 3u);
  auto one = strongly_connected_components(integer_matrix({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].size(), 3u);
}

TEST_F(Airplane, StabilityAndIrreducibility) {
  EXPECT_TRUE(is_irreducible(spec, gamma0));
  EXPECT_TRUE(is_prestable(spec, gamma0));
  EXPECT_TRUE(is_stable(spec, gamma0));
  EXPECT_EQ(stabilize(spec, gamma0), gamma0);
  EXPECT_EQ(irreducible_core(spec, gamma0), gamma0);
}

TEST(Stability, UnstableWhenAPreimageLeavesGamma) {
  MapSpec s = make_spec(2, {{"g1", {{1, "g1"}, {1, "g2"}}}, {"g2", {{2, "g2"}}}});
  Multicurve g1(s, {"g1"});
  EXPECT_TRUE(is_prestable(s, g1));
  EXPECT_FALSE(is_stable(s, g1));
  EXPECT_EQ(stabilize(s, g1), Multicurve(s, {"g1", "g2"}));
}

TEST(Stability, AllPreimagesInessential) {
  MapSpec s = make_spec(2, {{"g", {{2, "null"}}}});
  EXPECT_FALSE(is_prestable(s, Multicurve(s, {"g"})));
}

TEST(IrreducibleCore, PicksTheDominantBlock) {
  // a: λ = 1/2, b: λ = 3/2, no interaction.
  MapSpec s = make_spec(6, {{"a", {{2, "a"}, {4, "null"}}}, {"b", {{2, "b"}, {2, "b"}, {2, "b"}}}});
  Multicurve both(s, {"a", "b"});
  EXPECT_TRUE(is_stable(s, both));
  EXPECT_EQ(irreducible_core(s, both), Multicurve(s, {"b"}));
  EXPECT_TRUE(is_thurston_obstruction(s, both));
  EXPECT_FALSE(is_thurston_obstruction(s, Multicurve(s, {"a"})));
}

TEST(IrreducibleCore, RequiresStableInput) {
  MapSpec s = make_spec(2, {{"g1", {{1, "g1"}, {1, "g2"}}}, {"g2", {{2, "g2"}}}});
  EXPECT_THROW(irreducible_core(s, Multicurve(s, {"g1"})), MulticurveError);
}

TEST_F(Airplane, Kappa) {
  EXPECT_EQ(kappa(spec, gamma0, "gamma0", 3).value, 8);
  EXPECT_EQ(kappa(spec, gamma0, "gamma0", 0).value, 1);
  EXPECT_FALSE(kappa(spec, gamma0, "gamma0", 3).horizon_only);
  auto table = kappa_table(spec, beta, 4);
  ASSERT_EQ(table.size(), 5u);
  EXPECT_EQ(table[4][0], 16);
}

TEST(Kappa, SinglePreimageChainStaysOne) {
  MapSpec s = make_spec(3, {{"g", {{3, "g"}}}});
  for (unsigned n = 0; n < 6; ++n) EXPECT_EQ(kappa(s, Multicurve(s, {"g"}), "g", n).value, 1);
}

TEST(Kappa, NotPrestableIsFlagged) {
  MapSpec s = make_spec(2, {{"g", {{2, "null"}}}});
  EXPECT_TRUE(kappa(s, Multicurve(s, {"g"}), "g", 2).horizon_only);
}

TEST(KappaCsv, Format) {
  MapSpec s = swap_spec();
  Multicurve g(s, {"g1", "g2"});
  EXPECT_EQ(kappa_csv(g, kappa_table(s, g, 2)), "n,class,kappa\n0,g1,1\n0,g2,1\n1,g1,2\n1,g2,1\n2,g1,2\n2,g2,2\n");
}

TEST_F(Airplane, Cantor) {
  EXPECT_TRUE(is_cantor(spec, gamma0));
  EXPECT_TRUE(is_cantor(spec, beta));
}

TEST(Cantor, MatingEquatorIsNot) {
  MapSpec s = load_valid_map_spec(fixture("mating_equator.spec"));
  EXPECT_FALSE(is_cantor(s, config_multicurve(s)));
}

TEST(Cantor, SwapPatternIs) {
  MapSpec s = swap_spec();
  EXPECT_TRUE(is_cantor(s, Multicurve(s, {"g1", "g2"})));
}

TEST(Cantor, ReducibleThrowsButHorizonReports) {
  MapSpec s = load_valid_map_spec(fixture("nested_pair.spec"));
  Multicurve g = config_multicurve(s);
  EXPECT_THROW(is_cantor(s, g), NotIrreducible);
  auto h = cantor_horizon(s, g, 16);
  EXPECT_TRUE(h.monotone);
  EXPECT_TRUE(h.growth_observed);
}

TEST_F(Airplane, ReducedEigenCheck) {
  auto r = reduced_eigen_check(spec, gamma0);
  EXPECT_TRUE(r.consistent());
  EXPECT_TRUE(r.cantor);
  EXPECT_EQ(r.eigen.lo, 2);
  EXPECT_EQ(r.eigen.vs_one, VsOne::greater);
}

TEST(ReducedEigenCheck, IdentityAndSwap) {
  MapSpec one = make_spec(2, {{"g", {{2, "g"}}}});
  auto r1 = reduced_eigen_check(one, Multicurve(one, {"g"}));
  EXPECT_TRUE(r1.consistent());
  EXPECT_EQ(r1.eigen.vs_one, VsOne::equal);
  EXPECT_FALSE(r1.cantor);
  MapSpec sw = swap_spec();
  auto r2 = reduced_eigen_check(sw, Multicurve(sw, {"g1", "g2"}));
  EXPECT_TRUE(r2.cantor);
  EXPECT_EQ(r2.eigen.vs_one, VsOne::greater);
}

TEST_F(Airplane, Obstruction) {
  EXPECT_TRUE(is_thurston_obstruction(spec, gamma0));
  EXPECT_FALSE(is_thurston_obstruction(spec, beta));
}

TEST(Obstruction, UnstableIsNever) {
  MapSpec s = make_spec(3, {{"g1", {{1, "g1"}, {1, "g1"}, {1, "g2"}}}, {"g2", {{3, "g2"}}}});
  EXPECT_FALSE(is_thurston_obstruction(s, Multicurve(s, {"g1"})));
}

TEST(PerronCertificate, SearchAndVerify) {
  auto m = integer_matrix({{0, 2}, {1, 0}});
  auto c = perron_certificate(m);
  EXPECT_GT(c.lambda, 1);
  EXPECT_TRUE(verify_perron_certificate(m, c.v, c.lambda));
  // a hand certificate: M (4,3) = (6,4) > 5/4 · (4,3)
  EXPECT_TRUE(verify_perron_certificate(m, {Rational(4), Rational(3)}, make_rational(5, 4)));
  EXPECT_FALSE(verify_perron_certificate(m, {Rational(4), Rational(3)}, make_rational(3, 2)));
  EXPECT_FALSE(verify_perron_certificate(m, {Rational(0), Rational(3)}, make_rational(1, 2)));
}

TEST(PerronCertificate, RefusesNonExpanding) {
  EXPECT_THROW(perron_certificate(integer_matrix({{1}})), MulticurveError);
  EXPECT_THROW(perron_certificate(integer_matrix({{0, 1}, {1, 0}})), MulticurveError);
}

TEST(PerronCertificate, ImprimitiveMatrixTerminates) {
  auto m = integer_matrix({{0, 3, 0}, {0, 0, 1}, {2, 0, 0}});
  auto c = perron_certificate(m);
  EXPECT_TRUE(verify_perron_certificate(m, c.v, c.lambda));
}

TEST_F(Airplane, AnalysisSummaries) {
  EXPECT_EQ(analyze(spec, gamma0, kWidth, 3).summary(), "OBSTRUCTION λ=1, Cantor");
  EXPECT_EQ(analyze(spec, beta, kWidth, 3).summary(), "no obstruction λ=1/2, Cantor");
  auto j = analyze(spec, gamma0, kWidth, 2).to_json();
  EXPECT_TRUE(j.at("thurston_obstruction").get<bool>());
}

TEST(Analysis, SinglePreimageIsNotCantor) {
  MapSpec s = load_valid_map_spec(fixture("mating_equator.spec"));
  auto text = analyze(s, config_multicurve(s), kWidth, 3).summary();
  EXPECT_NE(text.find("not Cantor"), std::string::npos) << text;
}

TEST(Analysis, IrrationalEigenvalueIsBracketed) {
  MapSpec s = swap_spec();
  auto r = analyze(s, Multicurve(s, {"g1", "g2"}), kWidth, 2);
  // M_Γ = [[0,2],[1,0]] too (all degrees 1), so λ = √2.
  EXPECT_FALSE(r.eigen.exact());
  EXPECT_NE(r.summary().find("λ≈"), std::string::npos);
}
