#include <gtest/gtest.h>

#include "cantordyn/tree_tower.hpp"
#include "random_specs.hpp"

using namespace cantordyn;
using cantordyn::testing::count_matrix;
using cantordyn::testing::row_sums_of_power;

namespace {

std::string fixture(const std::string& name) { return std::string(CANTORDYN_FIXTURE_DIR) + "/" + name; }

struct Built {
  MapSpec spec;
  TreeTower tower;
};

Built build(const std::string& name, unsigned depth) {
  MapSpec s = load_valid_map_spec(fixture(name));
  TreeTower t = tower_build(s, config_multicurve(s), depth);
  return {std::move(s), std::move(t)};
}

std::string edge_id(const DualTree& t, std::size_t e) { return t.edges[e].id; }

}  // namespace

TEST(Level0, Shapes) {
  auto airplane = dual_tree_level0(load_valid_map_spec(fixture("airplane.spec")));
  EXPECT_EQ(airplane.vertices.size(), 2u);
  EXPECT_EQ(airplane.edges.size(), 1u);
  EXPECT_EQ(airplane.total_marked(), 5);
  auto nested = dual_tree_level0(load_valid_map_spec(fixture("nested_pair.spec")));
  EXPECT_EQ(nested.vertices.size(), 3u);
  EXPECT_TRUE(nested.is_tree());
  auto star = dual_tree_level0(load_valid_map_spec(fixture("star.spec")));
  EXPECT_EQ(star.vertices.size(), 4u);
  EXPECT_EQ(star.edges.size(), 3u);
  EXPECT_TRUE(star.is_tree());
}

TEST(PerronMetric, CertifiedBelowTheEigenvalue) {
  MapSpec s = load_valid_map_spec(fixture("airplane.spec"));
  auto pm = perron_metric(s, config_multicurve(s));
  // M_r = (2): λ certified in (1, 2), edge slope mv/v = 2.
  EXPECT_GT(pm.lambda, 1);
  EXPECT_LT(pm.lambda, 2);
  EXPECT_EQ(pm.mv[0], 2 * pm.v[0]);
  EXPECT_EQ(pm.max_slope, 2);
  MapSpec star = load_valid_map_spec(fixture("star.spec"));
  EXPECT_THROW(perron_metric(star, config_multicurve(star)), TowerError);
}

TEST(Tower, AirplaneIsAPathThatHalves) {
  auto [spec, t] = build("airplane.spec", 4);
  ASSERT_EQ(t.trees.size(), 5u);
  for (const auto& tree : t.trees) {
    const std::size_t n = std::size_t{1} << tree.level;
    EXPECT_TRUE(tree.is_tree());
    EXPECT_EQ(tree.edges.size(), n);
    EXPECT_EQ(tree.vertices.size(), n + 1);
    Rational offset = 0;
    for (const auto& e : tree.edges) {
      EXPECT_EQ(e.length, make_rational(2, static_cast<long>(n)));
      EXPECT_EQ(e.offset, offset);
      offset += e.length;
    }
    EXPECT_EQ(tree.total_length(), 2);
  }
  EXPECT_EQ(t.tree_degree, 2u);
  EXPECT_EQ(t.lambda1, 3);
  EXPECT_TRUE(t.axioms.ok());
}

TEST(Tower, OrientationReversesTheSecondHalf) {
  auto [spec, t] = build("airplane.spec", 2);
  std::vector<std::string> ids;
  for (std::size_t e = 0; e < t.trees[2].edges.size(); ++e) ids.push_back(edge_id(t.trees[2], e));
  EXPECT_EQ(ids, (std::vector<std::string>{"beta:0.0", "beta:0.1", "beta:1.1", "beta:1.0"}));
}

TEST(Tower, TauForgetsTheFirstSymbol) {
  auto [spec, t] = build("airplane.spec", 3);
  for (std::size_t n = 1; n + 1 < t.trees.size(); ++n)
    for (std::size_t e = 0; e < t.trees[n + 1].edges.size(); ++e) {
      const auto& up = t.trees[n + 1].edges[e];
      const auto& down = t.trees[n].edges[t.tau[n].edge_image[e]];
      EXPECT_EQ(down.address, Word(up.address.begin() + 1, up.address.end())) << up.id;
    }
  for (auto img : t.tau[0].edge_image) EXPECT_EQ(img, 0u);
}

TEST(Tower, InclusionCoversEachEdgeByItsChildren) {
  auto [spec, t] = build("airplane.spec", 3);
  EXPECT_EQ(t.iota[0].edge_image[0], (std::vector<std::size_t>{0, 1}));
  for (std::size_t n = 0; n + 1 < t.trees.size(); ++n)
    for (std::size_t e = 0; e < t.trees[n].edges.size(); ++e) {
      Rational len = 0;
      for (auto x : t.iota[n].edge_image[e]) len += t.trees[n + 1].edges[x].length;
      EXPECT_EQ(len, t.trees[n].edges[e].length);
    }
}

TEST(Tower, EdgeCountsMatchRowSums) {
  for (const std::string f : {"airplane.spec", "nested_pair.spec", "apply2_g2.spec", "airplane_folding.spec"}) {
    auto [spec, t] = build(f, 4);
    auto b = count_matrix(spec, config_multicurve(spec).classes());
    for (unsigned n = 0; n < t.trees.size(); ++n) {
      BigInt sum = 0;
      for (const auto& k : row_sums_of_power(b, n)) sum += k;
      EXPECT_EQ(BigInt(t.trees[n].edges.size()), sum) << f << " T" << n;
    }
  }
  auto [spec, t] = build("apply2_g2.spec", 3);
  std::vector<std::size_t> counts;
  for (const auto& tree : t.trees) counts.push_back(tree.edges.size());
  EXPECT_EQ(counts, (std::vector<std::size_t>{1, 4, 16, 64}));
}

TEST(Tower, DepthZero) {
  auto [spec, t] = build("nested_pair.spec", 0);
  EXPECT_EQ(t.trees.size(), 1u);
  EXPECT_TRUE(t.tau.empty());
  EXPECT_TRUE(t.iota.empty());
}

TEST(LengthBound, ClosedForms) {
  auto [a, ta] = build("airplane.spec", 5);
  auto ra = length_bound_check(ta);
  EXPECT_TRUE(ra.ok());
  EXPECT_EQ(ra.closed_form, 6);  // 3/(3−2)·2
  EXPECT_EQ(ra.totals.size(), 6u);
  auto [g, tg] = build("apply2_g2.spec", 3);
  const Rational d(static_cast<long>(tg.tree_degree));
  EXPECT_EQ(length_bound_check(tg).closed_form, tg.lambda1 / (tg.lambda1 - d) * tg.trees[0].total_length());
}

TEST(Tower, Lambda1Option) {
  MapSpec s = load_valid_map_spec(fixture("airplane.spec"));
  auto t = tower_build(s, config_multicurve(s), 2, {Rational(4)});
  EXPECT_EQ(t.lambda1, 4);
  EXPECT_EQ(length_bound_check(t).closed_form, 4);  // 4/(4−2)·2
  EXPECT_THROW(tower_build(s, config_multicurve(s), 2, {Rational(2)}), TowerError);
  MapSpec g = load_valid_map_spec(fixture("apply2_g2.spec"));
  auto tg = tower_build(g, config_multicurve(g), 3, {Rational(8)});
  EXPECT_EQ(tg.tree_degree, 4u);
  EXPECT_EQ(length_bound_check(tg).closed_form, 2 * tg.trees[0].total_length());
}

TEST(Tower, Rejections) {
  MapSpec star = load_valid_map_spec(fixture("star.spec"));
  EXPECT_THROW(tower_build(star, config_multicurve(star), 2), TowerError);
  MapSpec two = load_valid_map_spec(fixture("two_children.spec"));
  EXPECT_THROW(tower_build(two, Multicurve(two, {"g"}), 2), TowerError);
  MapSpec airplane = load_valid_map_spec(fixture("airplane.spec"));
  EXPECT_THROW(tower_build(airplane, Multicurve(airplane, {"gamma0"}), 2), TowerError);
}

TEST(CodingPoint, BracketsNestAndShrink) {
  auto [spec, t] = build("airplane.spec", 4);
  auto br = coding_point(t, {0, 1, 1, 0});
  ASSERT_EQ(br.size(), 4u);
  EXPECT_EQ(br[0].edge, "beta:0");
  EXPECT_EQ(br[0].lo, 0);
  EXPECT_EQ(br[0].hi, 1);
  for (std::size_t i = 1; i < br.size(); ++i) {
    EXPECT_LE(br[i - 1].lo, br[i].lo);
    EXPECT_LE(br[i].hi, br[i - 1].hi);
    EXPECT_EQ(br[i].hi - br[i].lo, (br[i - 1].hi - br[i - 1].lo) / 2);
  }
  EXPECT_THROW(coding_point(t, {2}), std::invalid_argument);
  EXPECT_THROW(coding_point(t, {0, 0, 0, 0, 0}), std::invalid_argument);
}

TEST(VertexOrbit, GapVerticesFallToTheirLabel) {
  auto [spec, t] = build("airplane.spec", 2);
  EXPECT_EQ(vertex_orbit(t, "beta:1/0"), (std::vector<std::string>{"beta:1/0", "beta:/0", "V"}));
  EXPECT_EQ(vertex_orbit(t, "U"), (std::vector<std::string>{"U", "U", "U"}));
  EXPECT_THROW(vertex_orbit(t, "nowhere"), std::invalid_argument);
}

TEST(Output, DotAndCsv) {
  auto [spec, t] = build("airplane.spec", 2);
  auto dot = to_dot(t.trees[1]);
  EXPECT_EQ(dot.rfind("graph T1 {", 0), 0u);
  std::size_t edges = 0;
  for (std::size_t pos = 0; (pos = dot.find(" -- ", pos)) != std::string::npos; ++pos) ++edges;
  EXPECT_EQ(edges, 2u);
  auto csv = metric_csv(t);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "level,edge,class,covered,degree,length,offset");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 1 + 2 + 4);
  EXPECT_NE(csv.find("2,beta:1.0,beta,beta,16,1/2,3/2\n"), std::string::npos);
}
