#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cantordyn/exact.hpp"
#include "cantordyn/polynomial.hpp"
#include "cantordyn/spec_model.hpp"

namespace cantordyn {

class MulticurveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Multicurve {
 public:
  // Throws MulticurveError on empty input, duplicates or non-essential ids.
  Multicurve(const MapSpec& spec, std::vector<std::string> classes);

  const std::vector<std::string>& classes() const { return classes_; }
  std::size_t size() const { return classes_.size(); }
  std::optional<std::size_t> index_of(const std::string& id) const;
  bool contains(const std::string& id) const { return index_of(id).has_value(); }

  friend bool operator==(const Multicurve&, const Multicurve&) = default;

 private:
  std::vector<std::string> classes_;
};

// The level-0 edge classes, the usual Γ of a spec.
Multicurve config_multicurve(const MapSpec& spec);

struct TransitionMatrix {
  std::vector<std::string> classes;
  RationalMatrix entries;
};

struct ReducedTransitionMatrix {
  std::vector<std::string> classes;
  IntegerMatrix entries;
};

TransitionMatrix transition_matrix(const MapSpec& spec, const Multicurve& gamma);
ReducedTransitionMatrix reduced_matrix(const MapSpec& spec, const Multicurve& gamma);

enum class VsOne { less, equal, greater };
std::string to_string(VsOne v);

struct EigenReport {
  Rational lo;
  Rational hi;
  VsOne vs_one = VsOne::less;
  // Isolating data for exact comparisons; nullopt for the zero spectrum.
  std::optional<AlgebraicRoot> root;

  bool exact() const { return lo == hi; }
};

// Spectral radius of a non-negative matrix, bracketed to `width`, with the
// comparison against 1 decided exactly. Throws std::invalid_argument on
// negative entries.
EigenReport leading_eigenvalue(const RationalMatrix& m, const Rational& width);
EigenReport leading_eigenvalue(const IntegerMatrix& m, const Rational& width);

// Exact comparison of two Perron roots.
int compare_perron(const EigenReport& a, const EigenReport& b);

Rational default_bracket_width();

bool is_irreducible(const IntegerMatrix& m);
bool is_irreducible(const MapSpec& spec, const Multicurve& gamma);
// Strongly connected components of the digraph j -> i whenever m(i,j) > 0,
// each sorted, listed by smallest member.
std::vector<std::vector<std::size_t>> strongly_connected_components(const IntegerMatrix& m);

bool is_prestable(const MapSpec& spec, const Multicurve& gamma);
bool is_stable(const MapSpec& spec, const Multicurve& gamma);

struct KappaValue {
  BigInt value;
  bool horizon_only = false;  // Γ not pre-stable: counts are reported, not trusted as κ
};

KappaValue kappa(const MapSpec& spec, const Multicurve& gamma, const std::string& cls, unsigned n);
// rows n = 0..depth, columns in Γ order
std::vector<std::vector<BigInt>> kappa_table(const MapSpec& spec, const Multicurve& gamma, unsigned depth);

class NotIrreducible : public MulticurveError {
 public:
  using MulticurveError::MulticurveError;
};

// Exact test for irreducible Γ: some class pulls back to ≥ 2 curves of Γ.
// Throws NotIrreducible.
bool is_cantor(const MapSpec& spec, const Multicurve& gamma);

struct HorizonReport {
  unsigned horizon = 0;
  std::vector<std::vector<BigInt>> kappa;
  bool monotone = true;         // κ_{n+1} ≥ κ_n for every class and n
  bool growth_observed = false;  // κ_H > κ_{H/2} for every class
};

HorizonReport cantor_horizon(const MapSpec& spec, const Multicurve& gamma, unsigned horizon);

struct ReducedEigenReport {
  EigenReport eigen;
  bool prestable = false;
  bool irreducible = false;
  bool cantor = false;
  bool cantor_exact = false;  // false: cantor came from the horizon mode
  bool prestable_implies_ge_one = true;
  bool cantor_implies_gt_one = true;
  bool irreducible_gt_one_implies_cantor = true;

  bool consistent() const {
    return prestable_implies_ge_one && cantor_implies_gt_one && irreducible_gt_one_implies_cantor;
  }
};

ReducedEigenReport reduced_eigen_check(const MapSpec& spec, const Multicurve& gamma);

Multicurve stabilize(const MapSpec& spec, const Multicurve& gamma0);
Multicurve irreducible_core(const MapSpec& spec, const Multicurve& gamma);
bool is_thurston_obstruction(const MapSpec& spec, const Multicurve& gamma);

// Certificate λ > 1, v > 0 with M v > λ v componentwise.
struct PerronCertificate {
  Rational lambda;
  std::vector<Rational> v;
  unsigned iterations = 0;
};

bool verify_perron_certificate(const IntegerMatrix& m, const std::vector<Rational>& v, const Rational& lambda);

// λ = (1 + lower bracket of λ₀)/2 and v = (I+M)^k 1 for the first k that
// certifies. Throws MulticurveError when λ₀ ≤ 1 or the search gives up.
PerronCertificate perron_certificate(const IntegerMatrix& m, unsigned max_iterations = 4096);

struct AnalysisReport {
  Multicurve gamma;
  TransitionMatrix transition;
  ReducedTransitionMatrix reduced;
  EigenReport eigen;
  ReducedEigenReport reduced_check;
  bool irreducible = false;
  bool prestable = false;
  bool stable = false;
  std::optional<bool> cantor;  // exact, when Γ is irreducible
  std::optional<HorizonReport> horizon;
  bool obstruction = false;
  std::vector<std::vector<BigInt>> kappa;

  std::string summary() const;
  nlohmann::ordered_json to_json() const;
};

AnalysisReport analyze(const MapSpec& spec, const Multicurve& gamma, const Rational& width, unsigned kappa_depth);

std::string kappa_csv(const Multicurve& gamma, const std::vector<std::vector<BigInt>>& table);

nlohmann::ordered_json to_json(const EigenReport& e);

}  // namespace cantordyn
