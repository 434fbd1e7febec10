#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cantordyn/exact.hpp"
#include "cantordyn/multicurve.hpp"
#include "cantordyn/spec_model.hpp"

namespace cantordyn {

class LinearModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Interval {
  Rational lo;
  Rational hi;

  Rational length() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct ChildInterval {
  std::size_t parent = 0;
  Interval interval;
  std::size_t target = 0;
  int orientation = 1;
};

// σ on I¹ = ∪ children; child c maps affinely onto parent c.target.
class IntervalSystem {
 public:
  // Checks the invariants (containment, positive gaps, exactness at both
  // ends of every parent) and throws LinearModelError on violation.
  static IntervalSystem create(std::vector<std::string> classes, std::vector<Interval> parents,
                               std::vector<ChildInterval> children);

  const std::vector<std::string>& classes() const { return classes_; }
  const std::vector<Interval>& parents() const { return parents_; }
  const std::vector<ChildInterval>& children() const { return children_; }
  // Children of parent i, left to right.
  const std::vector<std::size_t>& children_of(std::size_t parent) const { return by_parent_[parent]; }

  Rational slope(std::size_t child) const;  // signed
  Rational apply(std::size_t child, const Rational& x) const;
  // Preimage of a sub-interval of the target parent inside the child.
  Interval pull_back(std::size_t child, const Interval& j) const;
  std::optional<std::size_t> parent_containing(const Rational& x) const;
  std::optional<std::size_t> child_containing(const Rational& x) const;

 private:
  std::vector<std::string> classes_;
  std::vector<Interval> parents_;
  std::vector<ChildInterval> children_;
  std::vector<std::vector<std::size_t>> by_parent_;
};

enum class GapPolicy { equal, proportional_to_neighbors };

struct LinearModelParams {
  Rational shrink{4, 5};
  GapPolicy gaps = GapPolicy::equal;
};

// Parent lengths come from a certified Perron vector v of M_r; a parent with
// k ≥ 2 children splits s·|I_i| among them in proportion to v_target and
// spreads the rest over the k−1 gaps. A single child equals its parent.
IntervalSystem from_annular_rules(const MapSpec& spec, const Multicurve& gamma, const LinearModelParams& params = {});

using Word = std::vector<std::size_t>;

struct LevelInterval {
  Interval interval;
  Word address;
  std::size_t parent = 0;
};

struct RefinementLevel {
  unsigned depth = 0;
  std::vector<LevelInterval> intervals;  // sorted by left endpoint

  std::size_t count_in_parent(std::size_t parent) const;
};

RefinementLevel refine(const IntervalSystem& sys, unsigned k);

struct ExpansionReport {
  Rational l1;
  std::vector<Rational> L;  // L[k-1] = L_k, k = 1..horizon
  std::optional<unsigned> first_k;
};

ExpansionReport expansion_report(const IntervalSystem& sys, unsigned horizon);

struct ItineraryResult {
  Word word;
  std::optional<unsigned> escape_step;  // x lies in a gap after this many steps
};

ItineraryResult itinerary_of(const IntervalSystem& sys, const Rational& x, unsigned n);

// The level-k interval with address `word`. Throws on non-composable words.
Interval point_of(const IntervalSystem& sys, const Word& word);
bool is_composable(const IntervalSystem& sys, const Word& word);

class Itinerary {
 public:
  static Itinerary eventually_periodic(Word head, Word cycle);
  static Itinerary finite(Word head);
  // An infinite itinerary the caller asserts is not eventually periodic.
  static Itinerary wandering(std::function<std::size_t(std::size_t)> generator);

  std::size_t at(std::size_t k) const;
  Word prefix(std::size_t n) const;
  const Word& head() const { return head_; }
  const std::optional<Word>& cycle() const { return cycle_; }
  bool has_generator() const { return static_cast<bool>(generator_); }

 private:
  Word head_;
  std::optional<Word> cycle_;
  std::function<std::size_t(std::size_t)> generator_;
};

enum class ItineraryClass { periodic, preperiodic, wandering_presentation, finite };
std::string to_string(ItineraryClass c);

// Generators are checked for a period ≤ 64 on symbols [2048, 4096); finding
// one throws std::invalid_argument.
ItineraryClass classify(const Itinerary& it);

std::set<Word> omega_limit_approx(const IntervalSystem& sys, const Itinerary& it, std::size_t horizon, std::size_t depth);

struct AnnularConditionReport {
  bool branching_reachable = false;  // (i)
  bool no_degree_one_cycle = false;  // (ii)
  bool ok() const { return branching_reachable && no_degree_one_cycle; }
};

AnnularConditionReport annular_condition_report(const MapSpec& spec, const Multicurve& gamma);
bool annular_condition_check(const MapSpec& spec, const Multicurve& gamma);

Itinerary thue_morse();

std::string refinement_csv(const std::vector<RefinementLevel>& levels);
std::string refinement_svg(const IntervalSystem& sys, const std::vector<RefinementLevel>& levels);

}  // namespace cantordyn
