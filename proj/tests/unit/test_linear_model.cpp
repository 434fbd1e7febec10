#include <gtest/gtest.h>

#include "cantordyn/linear_model.hpp"
#include "random_specs.hpp"

using namespace cantordyn;
using cantordyn::testing::make_spec;

namespace {

std::string fixture(const std::string& name) { return std::string(CANTORDYN_FIXTURE_DIR) + "/" + name; }

Rational q(const char* text) { return parse_rational(text); }

class TwoChildren : public ::testing::Test {
 protected:
  MapSpec spec = load_valid_map_spec(fixture("two_children.spec"));
  IntervalSystem sys = from_annular_rules(spec, config_multicurve(spec));
};

IntervalSystem system_of(const std::string& name) {
  MapSpec s = load_valid_map_spec(fixture(name));
  return from_annular_rules(s, config_multicurve(s));
}

}  // namespace

TEST_F(TwoChildren, Placement) {
  ASSERT_EQ(sys.parents().size(), 1u);
  EXPECT_EQ(sys.parents()[0].lo, 0);
  EXPECT_EQ(sys.parents()[0].hi, 1);
  ASSERT_EQ(sys.children().size(), 2u);
  EXPECT_EQ(sys.children()[0].interval.lo, 0);
  EXPECT_EQ(sys.children()[0].interval.hi, q("0.4"));
  EXPECT_EQ(sys.children()[1].interval.lo, q("0.6"));
  EXPECT_EQ(sys.children()[1].interval.hi, 1);
  EXPECT_EQ(sys.slope(0), q("2.5"));
  EXPECT_EQ(sys.slope(1), q("2.5"));
  EXPECT_EQ(sys.apply(1, q("0.6")), 0);
}

TEST_F(TwoChildren, RefineTwoLevels) {
  auto level = refine(sys, 2);
  std::vector<std::pair<Rational, Rational>> got;
  for (const auto& iv : level.intervals) got.emplace_back(iv.interval.lo, iv.interval.hi);
  std::vector<std::pair<Rational, Rational>> want = {
      {0, q("0.16")}, {q("0.24"), q("0.4")}, {q("0.6"), q("0.76")}, {q("0.84"), 1}};
  EXPECT_EQ(got, want);
  EXPECT_EQ(refine(sys, 0).intervals.size(), 1u);
  EXPECT_EQ(level.count_in_parent(0), 4u);
}

TEST_F(TwoChildren, Expansion) {
  auto ex = expansion_report(sys, 10);
  EXPECT_EQ(ex.l1, q("0.4"));
  EXPECT_EQ(ex.L[1], q("0.16"));
  EXPECT_EQ(ex.first_k, 2u);
  for (std::size_t k = 1; k < ex.L.size(); ++k) EXPECT_LE(ex.L[k], ex.L[k - 1]);
}

TEST_F(TwoChildren, Itineraries) {
  EXPECT_EQ(itinerary_of(sys, Rational(0), 6).word, Word(6, 0));
  EXPECT_EQ(itinerary_of(sys, Rational(1), 6).word, Word(6, 1));
  auto r = itinerary_of(sys, q("0.24"), 5);
  EXPECT_EQ(r.word, (Word{0, 1, 0, 0, 0}));
  EXPECT_FALSE(r.escape_step);
  auto gap = itinerary_of(sys, q("0.5"), 5);
  EXPECT_EQ(gap.escape_step, 0u);
  EXPECT_TRUE(gap.word.empty());
  auto later = itinerary_of(sys, q("0.2"), 5);  // 0.2 → 0.5, a gap
  EXPECT_EQ(later.escape_step, 1u);
}

TEST_F(TwoChildren, PeriodTwoPoint) {
  // σ²(x) = 6.25x − 3.75 on child 1 then child 0, fixed at 5/7.
  const Rational x = make_rational(5, 7);
  Word w;
  Rational prev_width = 2;
  for (int k = 0; k < 12; ++k) {
    w.push_back(k % 2 == 0 ? 1 : 0);
    Interval j = point_of(sys, w);
    EXPECT_TRUE(j.contains(x));
    EXPECT_LT(j.length(), prev_width);
    prev_width = j.length();
  }
  EXPECT_EQ(itinerary_of(sys, x, 8).word, (Word{1, 0, 1, 0, 1, 0, 1, 0}));
}

TEST_F(TwoChildren, PointOfZeroWordCollapsesToZero) {
  for (std::size_t k = 1; k < 8; ++k) {
    Interval j = point_of(sys, Word(k, 0));
    EXPECT_EQ(j.lo, 0);
  }
  EXPECT_THROW(point_of(sys, {}), std::invalid_argument);
  EXPECT_THROW(point_of(sys, {5}), std::invalid_argument);
}

TEST_F(TwoChildren, OmegaLimits) {
  auto fixed = omega_limit_approx(sys, Itinerary::eventually_periodic({}, {0}), 256, 4);
  EXPECT_EQ(fixed, (std::set<Word>{{0, 0, 0, 0}}));
  auto pre = omega_limit_approx(sys, Itinerary::eventually_periodic({1, 1, 1}, {0, 1}), 256, 3);
  EXPECT_EQ(pre, (std::set<Word>{{0, 1, 0}, {1, 0, 1}}));
}

TEST(Classify, Kinds) {
  EXPECT_EQ(classify(Itinerary::eventually_periodic({}, {0})), ItineraryClass::periodic);
  EXPECT_EQ(classify(Itinerary::eventually_periodic({1}, {0})), ItineraryClass::preperiodic);
  EXPECT_EQ(classify(Itinerary::eventually_periodic({0, 1}, {0, 1})), ItineraryClass::periodic);
  EXPECT_EQ(classify(Itinerary::finite({0, 1})), ItineraryClass::finite);
  EXPECT_EQ(classify(thue_morse()), ItineraryClass::wandering_presentation);
  EXPECT_THROW(classify(Itinerary::wandering([](std::size_t k) { return k % 3 == 0 ? 1u : 0u; })),
               std::invalid_argument);
}

TEST(ThueMorse, Prefix) {
  EXPECT_EQ(thue_morse().prefix(8), (Word{0, 1, 1, 0, 1, 0, 0, 1}));
}

TEST(FromAnnularRules, SingleChildIsItsParent) {
  MapSpec s = load_valid_map_spec(fixture("mating_equator.spec"));
  auto sys = from_annular_rules(s, config_multicurve(s));
  ASSERT_EQ(sys.children().size(), 1u);
  EXPECT_EQ(sys.children()[0].interval, sys.parents()[0]);
  EXPECT_EQ(sys.slope(0), 1);
}

TEST(FromAnnularRules, AirplaneFolding) {
  auto sys = system_of("airplane_folding.spec");
  ASSERT_EQ(sys.children_of(0).size(), 2u);
  EXPECT_GT(sys.children()[1].interval.lo, sys.children()[0].interval.hi);
  EXPECT_EQ(refine(sys, 3).intervals.size(), 8u);
  auto ex = expansion_report(sys, 10);
  ASSERT_TRUE(ex.first_k);
  EXPECT_LE(*ex.first_k, 3u);
}

TEST(FromAnnularRules, OrientationReversesTheAffineMap) {
  auto sys = system_of("airplane.spec");  // β children: +1 then −1
  EXPECT_GT(sys.slope(0), 0);
  EXPECT_LT(sys.slope(1), 0);
  const auto& c1 = sys.children()[1].interval;
  EXPECT_EQ(sys.apply(1, c1.lo), sys.parents()[0].hi);
  EXPECT_EQ(sys.apply(1, c1.hi), sys.parents()[0].lo);
}

TEST(FromAnnularRules, ShrinkAndGapPolicy) {
  MapSpec s = make_spec(6, {{"g", {{2, "g"}, {2, "g"}, {2, "g"}}}});
  Multicurve g(s, {"g"});
  LinearModelParams half{make_rational(1, 2), GapPolicy::equal};
  auto sys = from_annular_rules(s, g, half);
  Rational covered = 0;
  for (const auto& c : sys.children()) covered += c.interval.length();
  EXPECT_EQ(covered, make_rational(1, 2) * sys.parents()[0].length());
  auto prop = from_annular_rules(s, g, {make_rational(1, 2), GapPolicy::proportional_to_neighbors});
  EXPECT_EQ(prop.children().size(), 3u);
  EXPECT_THROW(from_annular_rules(s, g, {Rational(1), GapPolicy::equal}), LinearModelError);
  EXPECT_THROW(from_annular_rules(s, g, {Rational(0), GapPolicy::equal}), LinearModelError);
}

TEST(FromAnnularRules, PerronLengthsAcrossClasses) {
  // M_r = [[0,2],[1,0]]: parent lengths follow a certified Perron vector.
  MapSpec s = make_spec(2, {{"g1", {{1, "g2"}, {1, "null"}}}, {"g2", {{1, "g1"}, {1, "g1"}}}});
  auto sys = from_annular_rules(s, Multicurve(s, {"g1", "g2"}));
  EXPECT_EQ(sys.children_of(0).size(), 2u);
  EXPECT_EQ(sys.children_of(1).size(), 1u);
  for (std::size_t c = 0; c < sys.children().size(); ++c) {
    const auto& ch = sys.children()[c];
    EXPECT_TRUE(sys.parents()[ch.parent].contains(ch.interval));
    EXPECT_EQ(ch.interval.length() * (sys.slope(c) < 0 ? -sys.slope(c) : sys.slope(c)),
              sys.parents()[ch.target].length());
  }
}

TEST(IntervalSystem, RejectsBrokenGeometry) {
  std::vector<Interval> parents{{Rational(0), Rational(1)}};
  // overlapping children
  EXPECT_THROW(IntervalSystem::create({"g"}, parents,
                                      {{0, {Rational(0), make_rational(1, 2)}, 0, 1},
                                       {0, {make_rational(1, 3), Rational(1)}, 0, 1}}),
               LinearModelError);
  // parent endpoint 1 not an endpoint of a child
  EXPECT_THROW(IntervalSystem::create({"g"}, parents,
                                      {{0, {Rational(0), make_rational(1, 3)}, 0, 1},
                                       {0, {make_rational(1, 2), make_rational(3, 4)}, 0, 1}}),
               LinearModelError);
  // touching children leave no gap
  EXPECT_THROW(IntervalSystem::create({"g"}, parents,
                                      {{0, {Rational(0), make_rational(1, 2)}, 0, 1},
                                       {0, {make_rational(1, 2), Rational(1)}, 0, 1}}),
               LinearModelError);
}

TEST(AnnularCondition, Examples) {
  MapSpec airplane = load_valid_map_spec(fixture("airplane.spec"));
  EXPECT_TRUE(annular_condition_check(airplane, config_multicurve(airplane)));
  MapSpec loop1 = make_spec(2, {{"g", {{1, "g"}, {1, "null"}}}});
  auto r1 = annular_condition_report(loop1, Multicurve(loop1, {"g"}));
  EXPECT_FALSE(r1.no_degree_one_cycle);
  EXPECT_FALSE(r1.ok());
  MapSpec loop3 = make_spec(3, {{"g", {{3, "g"}}}});
  auto r3 = annular_condition_report(loop3, Multicurve(loop3, {"g"}));
  EXPECT_FALSE(r3.branching_reachable);
  EXPECT_FALSE(r3.ok());
}

TEST(AnnularCondition, SingleChildCycleNeverExpands) {
  MapSpec s = load_valid_map_spec(fixture("mating_equator.spec"));
  auto sys = from_annular_rules(s, config_multicurve(s));
  EXPECT_FALSE(annular_condition_check(s, config_multicurve(s)));
  EXPECT_FALSE(expansion_report(sys, 20).first_k);
}

TEST(Output, CsvAndSvg) {
  auto sys = system_of("two_children.spec");
  std::vector<RefinementLevel> levels{refine(sys, 0), refine(sys, 1)};
  EXPECT_EQ(refinement_csv({levels[1]}), "depth,address,lo,hi\n1,0,0/1,2/5\n1,1,3/5,1/1\n");
  auto svg = refinement_svg(sys, levels);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(svg, refinement_svg(sys, levels));
}

TEST(Itinerary, PresentationIsShortest) {
  auto it = Itinerary::eventually_periodic({1, 0, 1}, {0, 1});
  EXPECT_EQ(it.head(), (Word{}));
  EXPECT_EQ(*it.cycle(), (Word{1, 0}));
  EXPECT_EQ(it.prefix(6), (Word{1, 0, 1, 0, 1, 0}));
  auto pre = Itinerary::eventually_periodic({2, 0, 1}, {0, 1});
  EXPECT_EQ(pre.head(), (Word{2}));
  EXPECT_EQ(pre.prefix(5), (Word{2, 0, 1, 0, 1}));
  EXPECT_THROW(Itinerary::finite({0}).at(1), std::out_of_range);
}
