#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cantordyn/exact.hpp"
#include "cantordyn/linear_model.hpp"
#include "cantordyn/multicurve.hpp"
#include "cantordyn/spec_model.hpp"

namespace cantordyn {

class TowerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TreeVertex {
  std::string id;     // level-0 vertex id, or "<class>:<prefix>/<j>" for a gap
  std::string label;  // the level-0 vertex this component eventually maps onto
  int marked = 0;
  bool core = false;  // one of the complex components (a level-0 vertex)
};

struct TreeEdge {
  std::string id;           // "<class>" at level 0, "<class>:<address>" above
  Word address;             // child word, as in the linear model
  std::string curve_class;  // class of Γ the curve is homotopic to
  std::string covered;      // level-0 edge class it covers under τ^n
  BigInt degree{1};         // covering degree onto that edge
  std::size_t from = 0;     // endpoints, ordered along the chain of curve_class
  std::size_t to = 0;
  Rational length;
  Rational offset;  // distance from the start of the chain of curve_class
};

struct DualTree {
  unsigned level = 0;
  std::vector<TreeVertex> vertices;
  std::vector<TreeEdge> edges;

  std::optional<std::size_t> vertex_index(const std::string& id) const;
  std::optional<std::size_t> edge_index(const std::string& id) const;
  std::optional<std::size_t> edge_with_address(const Word& address) const;  // level ≥ 1
  bool is_tree() const;
  Rational total_length() const;
  int total_marked() const;

 private:
  friend class TowerBuilder;
  std::map<std::string, std::size_t> vertex_ids_;
  std::map<std::string, std::size_t> edge_ids_;
};

// τ_n: T_{n+1} → T_n
struct TreeMap {
  std::vector<std::size_t> vertex_image;
  std::vector<std::size_t> edge_image;
};

// ι_n: T_n → T_{n+1}; each edge goes to a path of edges
struct Inclusion {
  std::vector<std::size_t> vertex_image;
  std::vector<std::vector<std::size_t>> edge_image;
};

struct PerronMetric {
  Rational lambda;
  std::vector<Rational> v;   // indexed like the level-0 edge classes
  std::vector<Rational> mv;  // M_r v, the level-0 edge lengths
  Rational max_slope;
  unsigned iterations = 0;
};

DualTree dual_tree_level0(const MapSpec& spec);
// Builds T_{n+1} from T_n by substitution, with τ_n. Unit metric.
std::pair<DualTree, TreeMap> pullback_tree(const MapSpec& spec, const DualTree& tn);
Inclusion inclusion(const MapSpec& spec, const DualTree& tn, const DualTree& tn1);
// Certified λ, v for the level-0 classes; throws TowerError unless Cantor.
PerronMetric perron_metric(const MapSpec& spec, const Multicurve& gamma);

struct AxiomReport {
  bool vertices_preserved = true;      // (a)
  bool new_edges_map_to_new = true;    // (b)
  bool edges_homeomorphic = true;      // τ is a bijection of each edge onto an edge
  bool diagram_commutes = true;        // (d)
  bool inclusion_isometric = true;
  bool inclusion_injective = true;
  bool degree_bounded = true;
  std::vector<std::string> witnesses;  // first failures, human readable

  bool ok() const {
    return vertices_preserved && new_edges_map_to_new && edges_homeomorphic && diagram_commutes &&
           inclusion_isometric && inclusion_injective && degree_bounded;
  }
};

struct TreeTower {
  std::vector<DualTree> trees;
  std::vector<TreeMap> tau;          // tau[n]: T_{n+1} → T_n
  std::vector<Inclusion> iota;       // iota[n]: T_n → T_{n+1}
  PerronMetric metric;
  Rational lambda1;                  // slope cap on new edges
  std::size_t tree_degree = 0;       // sup fibre size of τ
  AxiomReport axioms;
};

struct TowerOptions {
  std::optional<Rational> lambda1;
};

// Requires a clean validate with substitution rules and Γ equal to the
// level-0 edge classes. Throws TowerError with the failing witness if an
// axiom fails.
TreeTower tower_build(const MapSpec& spec, const Multicurve& gamma, unsigned depth, const TowerOptions& options = {});

struct LengthBoundReport {
  std::vector<Rational> totals;  // |T_n|
  Rational closed_form;          // λ₁/(λ₁−d)·|T₀|
  bool recursive_ok = true;
  bool closed_form_ok = true;
  bool ok() const { return recursive_ok && closed_form_ok; }
};

LengthBoundReport length_bound_check(const TreeTower& tower);

struct EdgeBracket {
  unsigned level = 0;
  std::string edge;
  Rational lo;  // position along the chain of the root class
  Rational hi;
};

// Nested edges selected by a linear-model address; the brackets shrink by the
// edge slopes. Throws std::invalid_argument on invalid addresses.
std::vector<EdgeBracket> coding_point(const TreeTower& tower, const Word& address);
// τ-images of a vertex of the top tree, one per level going down.
std::vector<std::string> vertex_orbit(const TreeTower& tower, const std::string& vertex_id);

std::string to_dot(const DualTree& tree);
std::string metric_csv(const TreeTower& tower);

struct CensusDepth {
  unsigned depth = 0;
  std::vector<std::string> complex_components;  // level-0 vertex ids
  BigInt disk;
  BigInt annular;
  BigInt annular_gamma;  // annular components whose core class lies in Γ
  BigInt trivial;
};

struct PeriodicComplex {
  std::string component;
  unsigned preperiod = 0;
  unsigned period = 0;
};

struct CensusReport {
  std::vector<CensusDepth> depths;
  std::vector<PeriodicComplex> complex_dynamics;
  std::map<std::string, std::string> return_map;  // complex component -> its image

  bool complex_count_constant(std::size_t expected) const;
  std::string to_text() const;
};

// Needs a stable Γ equal to the level-0 edge classes and substitution rules.
CensusReport decomposition_census(const MapSpec& spec, const Multicurve& gamma, unsigned depth);

}  // namespace cantordyn
