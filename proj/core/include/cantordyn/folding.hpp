#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cantordyn/exact.hpp"
#include "cantordyn/spec_model.hpp"

namespace cantordyn {

class FoldingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FoldingType { A, B, C };
std::string to_string(FoldingType t);

// Which side of β each of the two extreme disks lands on.
enum class Side { inner, outer };

// Same side: A (m even); U₁ inner and V₁ outer: B (m odd); swapped: C (m odd).
// Throws FoldingError when the parity of m disagrees.
FoldingType classify_type(Side image_of_u1, Side image_of_v1, int m);

struct InjectiveTreeWitness {
  unsigned k = 0;
  bool bounded_fatou_domains = false;
  bool fatou_domains_touch = true;

  friend bool operator==(const InjectiveTreeWitness&, const InjectiveTreeWitness&) = default;
};

struct FoldingPlan {
  FoldingType type = FoldingType::A;
  std::vector<int> degrees;           // d₁ … d_m in radial order
  std::vector<int> polynomial_degrees;  // deg g, or deg g₁, deg g₂
  int post_critical_count = 0;
  int inner_marked = 0;
  int outer_marked = 0;
  std::optional<InjectiveTreeWitness> witness;
  bool squared = false;  // a type C plan replaced by its square
  std::string recipe;

  int m() const { return static_cast<int>(degrees.size()); }
  int total_degree() const;
  Rational lambda_beta() const;
  // d(F, β); for type C plans this is only available after squaring.
  int d0() const;

  friend bool operator==(const FoldingPlan&, const FoldingPlan&) = default;
};

Rational lambda_beta(const std::vector<int>& degrees);

struct Feasibility {
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

Feasibility feasibility_A(int deg_g, int m, const std::vector<int>& degrees, int postcritical_g = 3);
Feasibility feasibility_B(int deg_g1, int deg_g2, int m, const std::vector<int>& degrees, int postcritical_g1 = 3,
                          int postcritical_g2 = 3);
bool feasible_A(int deg_g, int m, const std::vector<int>& degrees);
bool feasible_B(int deg_g1, int deg_g2, int m, const std::vector<int>& degrees);

int min_degree_apply1(int deg_g);
int min_degree_apply1_pair(int deg_g1, int deg_g2);
int min_degree_apply2(int deg_g);
int min_degree_apply2_pair(int deg_g1, int deg_gm);

enum class Recipe { apply1, apply1_pair, apply2, apply2_pair };
std::string to_string(Recipe r);

struct RecipeInput {
  Recipe recipe = Recipe::apply2;
  int deg_g1 = 2;
  int deg_g2 = 0;  // pair recipes only
  int degree = 0;
  int post_critical_count = 8;
  int inner_marked = 3;
};

FoldingPlan plan_from_recipe(const RecipeInput& in);

// Type C plans become type B plans of F²; others are returned unchanged.
FoldingPlan square_if_type_c(const FoldingPlan& plan);
// Throws FoldingError on structural problems (parity, marked split, m < 2).
void check_plan(const FoldingPlan& plan);

enum class CertificateKind { thm_no1, thm_no2, entry_bound, deg_bound, obstruction_found };
std::string to_string(CertificateKind k);

struct Certificate {
  CertificateKind kind = CertificateKind::thm_no1;
  bool applicable = true;
  bool accepted = false;
  std::optional<unsigned> N;
  // thm_no1 data
  BigInt p_minus_3, d0, m;
  // entry_bound data: M v < v (strict) or M v ≤ scale·v
  std::optional<RationalMatrix> matrix;
  std::vector<Rational> v;
  std::optional<Rational> cycle_scale;
  std::vector<Rational> cycle_v;
  std::vector<std::string> multicurve;
  std::vector<std::string> notes;
  std::vector<std::string> warnings;

  // Re-checks the accepted claim in exact arithmetic.
  bool verify() const;
  std::string to_text() const;
};

Certificate check_thm_no1(const FoldingPlan& plan);
// Throws FoldingError when the plan carries no witness.
Certificate check_thm_no2(const FoldingPlan& plan);
// k: intersection numbers with β. Throws std::invalid_argument when some but
// not all k are zero.
Certificate entry_bound_check(const RationalMatrix& m, const std::vector<BigInt>& k, const BigInt& d0, const BigInt& mm,
                              int post_critical_count);
// Exhaustive search over stable multicurves of the declared essential classes.
Certificate find_obstruction(const MapSpec& spec);

MapSpec emit_map_spec(const FoldingPlan& plan);

struct AirplaneParameter {
  Rational lo;
  Rational hi;
  bool sign_change = false;
  bool period_three = false;  // |Q_c³(0)| within a Lipschitz bound at both ends
  bool ordering = false;      // c < x₋₁ < x₀ < 0 < x₁ < c²+c < x₂
};

AirplaneParameter airplane_parameter(const Rational& width);

FoldingPlan parse_plan(const std::string& text);
std::string serialize_plan(const FoldingPlan& plan);
FoldingPlan load_plan(const std::string& path);

}  // namespace cantordyn
