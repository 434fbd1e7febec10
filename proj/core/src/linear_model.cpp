#include "cantordyn/linear_model.hpp"

#include <algorithm>
#include <bit>
#include <iomanip>
#include <sstream>

namespace cantordyn {

IntervalSystem IntervalSystem::create(std::vector<std::string> classes, std::vector<Interval> parents,
                                      std::vector<ChildInterval> children) {
  IntervalSystem s;
  if (parents.empty()) throw LinearModelError("interval system has no parents");
  if (classes.size() != parents.size()) throw LinearModelError("one class name per parent expected");
  for (std::size_t i = 0; i < parents.size(); ++i) {
    if (!(parents[i].length() > 0)) throw LinearModelError("zero-length parent interval " + std::to_string(i));
    for (std::size_t j = 0; j < i; ++j)
      if (parents[i].lo <= parents[j].hi && parents[j].lo <= parents[i].hi)
        throw LinearModelError("parent intervals " + std::to_string(j) + " and " + std::to_string(i) + " overlap");
  }
  s.by_parent_.resize(parents.size());
  for (std::size_t c = 0; c < children.size(); ++c) {
    const auto& ch = children[c];
    std::string where = "child " + std::to_string(c);
    if (ch.parent >= parents.size() || ch.target >= parents.size())
      throw LinearModelError(where + " refers to a missing parent");
    if (ch.orientation != 1 && ch.orientation != -1) throw LinearModelError(where + " has orientation other than ±1");
    if (!(ch.interval.length() > 0)) throw LinearModelError(where + " has zero length");
    if (!parents[ch.parent].contains(ch.interval)) throw LinearModelError(where + " is not contained in its parent");
    s.by_parent_[ch.parent].push_back(c);
  }
  for (std::size_t p = 0; p < parents.size(); ++p) {
    auto& ids = s.by_parent_[p];
    if (ids.empty()) throw LinearModelError("parent " + std::to_string(p) + " has no children");
    std::sort(ids.begin(), ids.end(),
              [&](std::size_t a, std::size_t b) { return children[a].interval.lo < children[b].interval.lo; });
    for (std::size_t k = 0; k + 1 < ids.size(); ++k)
      if (!(children[ids[k]].interval.hi < children[ids[k + 1]].interval.lo))
        throw LinearModelError("children of parent " + std::to_string(p) + " need positive gaps between them");
    if (children[ids.front()].interval.lo != parents[p].lo || children[ids.back()].interval.hi != parents[p].hi)
      throw LinearModelError("both endpoints of parent " + std::to_string(p) + " must be child endpoints");
  }
  s.classes_ = std::move(classes);
  s.parents_ = std::move(parents);
  s.children_ = std::move(children);
  return s;
}

Rational IntervalSystem::slope(std::size_t child) const {
  const auto& c = children_.at(child);
  Rational k = parents_[c.target].length() / c.interval.length();
  return c.orientation == 1 ? k : Rational(-k);
}

Rational IntervalSystem::apply(std::size_t child, const Rational& x) const {
  const auto& c = children_.at(child);
  const auto& t = parents_[c.target];
  Rational k = parents_[c.target].length() / c.interval.length();
  return c.orientation == 1 ? Rational(t.lo + k * (x - c.interval.lo)) : Rational(t.hi - k * (x - c.interval.lo));
}

Interval IntervalSystem::pull_back(std::size_t child, const Interval& j) const {
  const auto& c = children_.at(child);
  const auto& t = parents_[c.target];
  Rational r = c.interval.length() / t.length();
  if (c.orientation == 1) return {c.interval.lo + (j.lo - t.lo) * r, c.interval.lo + (j.hi - t.lo) * r};
  return {c.interval.lo + (t.hi - j.hi) * r, c.interval.lo + (t.hi - j.lo) * r};
}

std::optional<std::size_t> IntervalSystem::parent_containing(const Rational& x) const {
  for (std::size_t i = 0; i < parents_.size(); ++i)
    if (parents_[i].contains(x)) return i;
  return std::nullopt;
}

std::optional<std::size_t> IntervalSystem::child_containing(const Rational& x) const {
  for (std::size_t c = 0; c < children_.size(); ++c)
    if (children_[c].interval.contains(x)) return c;
  return std::nullopt;
}

IntervalSystem from_annular_rules(const MapSpec& spec, const Multicurve& gamma, const LinearModelParams& params) {
  if (!(params.shrink > 0 && params.shrink < 1)) throw LinearModelError("shrink factor must lie in (0, 1)");
  const std::size_t n = gamma.size();
  auto m = reduced_matrix(spec, gamma).entries;

  std::vector<Rational> v(n, Rational(1));
  try {
    v = perron_certificate(m).v;
  } catch (const MulticurveError&) {
    // λ₀ ≤ 1: no expansion to encode; unit lengths keep the system well defined
    // so the annular-condition check can reject it downstream.
  }
  auto mv = to_rational(m).apply(v);

  std::vector<Interval> parents;
  Rational offset = 0;
  for (std::size_t i = 0; i < n; ++i) {
    parents.push_back({offset, offset + v[i]});
    offset += v[i] + 1;
  }

  std::vector<ChildInterval> children;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& cls = gamma.classes()[i];
    auto rule = spec.annular.find(cls);
    if (rule == spec.annular.end()) throw LinearModelError("no annular rule for class '" + cls + "'");
    std::vector<std::pair<std::size_t, int>> kids;  // (target index, orientation)
    for (const auto& slot : rule->second)
      if (const auto* c = std::get_if<ChildSlot>(&slot))
        if (auto t = gamma.index_of(c->target)) kids.push_back({*t, c->orientation});
    if (kids.empty()) throw LinearModelError("inconsistent rules: class '" + cls + "' has no children in the multicurve");
    const Interval& p = parents[i];
    if (kids.size() == 1) {
      children.push_back({i, p, kids[0].first, kids[0].second});
      continue;
    }
    std::vector<Rational> len;
    for (auto [t, o] : kids) len.push_back(params.shrink * v[t] * v[i] / mv[i]);
    Rational spare = (Rational(1) - params.shrink) * v[i];
    std::vector<Rational> gaps(kids.size() - 1);
    if (params.gaps == GapPolicy::equal) {
      for (auto& g : gaps) g = spare / static_cast<long>(gaps.size());
    } else {
      Rational total = 0;
      for (std::size_t k = 0; k < gaps.size(); ++k) total += len[k] + len[k + 1];
      for (std::size_t k = 0; k < gaps.size(); ++k) gaps[k] = spare * (len[k] + len[k + 1]) / total;
    }
    Rational x = p.lo;
    for (std::size_t k = 0; k < kids.size(); ++k) {
      Rational end = k + 1 == kids.size() ? p.hi : Rational(x + len[k]);
      children.push_back({i, {x, end}, kids[k].first, kids[k].second});
      if (k + 1 < kids.size()) x = end + gaps[k];
    }
  }
  return IntervalSystem::create(gamma.classes(), std::move(parents), std::move(children));
}

std::size_t RefinementLevel::count_in_parent(std::size_t parent) const {
  return static_cast<std::size_t>(
      std::count_if(intervals.begin(), intervals.end(), [&](const LevelInterval& l) { return l.parent == parent; }));
}

RefinementLevel refine(const IntervalSystem& sys, unsigned k) {
  RefinementLevel level;
  for (std::size_t i = 0; i < sys.parents().size(); ++i) level.intervals.push_back({sys.parents()[i], {}, i});
  for (unsigned d = 1; d <= k; ++d) {
    std::vector<LevelInterval> next;
    for (std::size_t c = 0; c < sys.children().size(); ++c) {
      const auto& ch = sys.children()[c];
      for (const auto& j : level.intervals) {
        if (j.parent != ch.target) continue;
        Word address{c};
        address.insert(address.end(), j.address.begin(), j.address.end());
        next.push_back({sys.pull_back(c, j.interval), std::move(address), ch.parent});
      }
    }
    std::sort(next.begin(), next.end(),
              [](const LevelInterval& a, const LevelInterval& b) { return a.interval.lo < b.interval.lo; });
    level.intervals = std::move(next);
  }
  level.depth = k;
  return level;
}

ExpansionReport expansion_report(const IntervalSystem& sys, unsigned horizon) {
  if (horizon < 1) throw std::invalid_argument("expansion_report: horizon must be ≥ 1");
  ExpansionReport r;
  r.l1 = sys.children().front().interval.length();
  for (const auto& c : sys.children()) r.l1 = std::min(r.l1, c.interval.length());
  std::vector<Rational> maxlen;
  for (const auto& p : sys.parents()) maxlen.push_back(p.length());
  for (unsigned k = 1; k <= horizon; ++k) {
    std::vector<Rational> next(sys.parents().size(), Rational(0));
    for (const auto& c : sys.children()) {
      Rational l = c.interval.length() / sys.parents()[c.target].length() * maxlen[c.target];
      next[c.parent] = std::max(next[c.parent], l);
    }
    maxlen = std::move(next);
    Rational lk = *std::max_element(maxlen.begin(), maxlen.end());
    r.L.push_back(lk);
    if (!r.first_k && lk < r.l1) r.first_k = k;
  }
  return r;
}

ItineraryResult itinerary_of(const IntervalSystem& sys, const Rational& x, unsigned n) {
  ItineraryResult r;
  Rational y = x;
  if (!sys.parent_containing(y)) {
    r.escape_step = 0;
    return r;
  }
  for (unsigned k = 0; k < n; ++k) {
    auto c = sys.child_containing(y);
    if (!c) {
      r.escape_step = k;
      return r;
    }
    r.word.push_back(*c);
    y = sys.apply(*c, y);
  }
  return r;
}

bool is_composable(const IntervalSystem& sys, const Word& word) {
  for (std::size_t k = 0; k < word.size(); ++k) {
    if (word[k] >= sys.children().size()) return false;
    if (k + 1 < word.size() && sys.children()[word[k]].target != sys.children()[word[k + 1]].parent) return false;
  }
  return true;
}

Interval point_of(const IntervalSystem& sys, const Word& word) {
  if (word.empty()) throw std::invalid_argument("point_of: empty address");
  if (!is_composable(sys, word)) throw std::invalid_argument("point_of: address is not composable");
  Interval j = sys.parents()[sys.children()[word.back()].target];
  for (std::size_t k = word.size(); k-- > 0;) j = sys.pull_back(word[k], j);
  return j;
}

Itinerary Itinerary::eventually_periodic(Word head, Word cycle) {
  if (cycle.empty()) throw std::invalid_argument("itinerary cycle must be non-empty");
  // Shortest presentation: fold head symbols that repeat the cycle into it.
  while (!head.empty() && head.back() == cycle.back()) {
    std::rotate(cycle.rbegin(), cycle.rbegin() + 1, cycle.rend());
    head.pop_back();
  }
  Itinerary it;
  it.head_ = std::move(head);
  it.cycle_ = std::move(cycle);
  return it;
}

Itinerary Itinerary::finite(Word head) {
  Itinerary it;
  it.head_ = std::move(head);
  return it;
}

Itinerary Itinerary::wandering(std::function<std::size_t(std::size_t)> generator) {
  if (!generator) throw std::invalid_argument("itinerary generator must be callable");
  Itinerary it;
  it.generator_ = std::move(generator);
  return it;
}

std::size_t Itinerary::at(std::size_t k) const {
  if (generator_) return generator_(k);
  if (k < head_.size()) return head_[k];
  if (!cycle_) throw std::out_of_range("finite itinerary has no symbol " + std::to_string(k));
  return (*cycle_)[(k - head_.size()) % cycle_->size()];
}

Word Itinerary::prefix(std::size_t n) const {
  Word w;
  for (std::size_t k = 0; k < n; ++k) w.push_back(at(k));
  return w;
}

std::string to_string(ItineraryClass c) {
  switch (c) {
    case ItineraryClass::periodic: return "periodic";
    case ItineraryClass::preperiodic: return "pre-periodic";
    case ItineraryClass::wandering_presentation: return "wandering-presentation";
    case ItineraryClass::finite: return "finite";
  }
  return "?";
}

ItineraryClass classify(const Itinerary& it) {
  if (it.has_generator()) {
    constexpr std::size_t lo = 2048, hi = 4096;
    Word w;
    for (std::size_t k = lo; k < hi; ++k) w.push_back(it.at(k));
    for (std::size_t p = 1; p <= 64; ++p) {
      bool periodic = true;
      for (std::size_t k = 0; k + p < w.size() && periodic; ++k) periodic = w[k] == w[k + p];
      if (periodic)
        throw std::invalid_argument("generator declared wandering has period " + std::to_string(p) +
                                    " on symbols [2048, 4096)");
    }
    return ItineraryClass::wandering_presentation;
  }
  if (!it.cycle()) return ItineraryClass::finite;
  return it.head().empty() ? ItineraryClass::periodic : ItineraryClass::preperiodic;
}

std::set<Word> omega_limit_approx(const IntervalSystem& sys, const Itinerary& it, std::size_t horizon,
                                  std::size_t depth) {
  std::set<Word> seen;
  for (std::size_t k = horizon / 2; k <= horizon; ++k) {
    Word w;
    for (std::size_t i = 0; i < depth; ++i) w.push_back(it.at(k + i));
    if (!is_composable(sys, w)) throw std::invalid_argument("omega_limit_approx: itinerary is not composable");
    seen.insert(std::move(w));
  }
  return seen;
}

AnnularConditionReport annular_condition_report(const MapSpec& spec, const Multicurve& gamma) {
  const std::size_t n = gamma.size();
  std::vector<std::vector<std::size_t>> edges(n), degree_one(n);
  std::vector<std::size_t> child_count(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto rule = spec.annular.find(gamma.classes()[i]);
    if (rule == spec.annular.end()) continue;
    for (const auto& slot : rule->second) {
      const auto* c = std::get_if<ChildSlot>(&slot);
      if (!c) continue;
      auto t = gamma.index_of(c->target);
      if (!t) continue;
      ++child_count[i];
      edges[i].push_back(*t);
      if (c->local_degree == 1) degree_one[i].push_back(*t);
    }
  }
  AnnularConditionReport r;
  r.branching_reachable = true;
  for (std::size_t s = 0; s < n && r.branching_reachable; ++s) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{s};
    seen[s] = true;
    bool found = false;
    while (!stack.empty() && !found) {
      std::size_t u = stack.back();
      stack.pop_back();
      found = child_count[u] >= 2;
      for (auto w : edges[u])
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
    }
    r.branching_reachable = found;
  }
  // Kahn's algorithm on the degree-one subgraph.
  std::vector<std::size_t> indeg(n, 0);
  for (const auto& out : degree_one)
    for (auto w : out) ++indeg[w];
  std::vector<std::size_t> queue;
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) queue.push_back(i);
  std::size_t removed = 0;
  while (!queue.empty()) {
    std::size_t u = queue.back();
    queue.pop_back();
    ++removed;
    for (auto w : degree_one[u])
      if (--indeg[w] == 0) queue.push_back(w);
  }
  r.no_degree_one_cycle = removed == n;
  return r;
}

bool annular_condition_check(const MapSpec& spec, const Multicurve& gamma) {
  return annular_condition_report(spec, gamma).ok();
}

Itinerary thue_morse() {
  return Itinerary::wandering([](std::size_t k) { return static_cast<std::size_t>(std::popcount(k) & 1); });
}

namespace {

std::string address_text(const Word& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "." : "") + std::to_string(w[i]);
  return s;
}

}  // namespace

std::string refinement_csv(const std::vector<RefinementLevel>& levels) {
  std::string out = "depth,address,lo,hi\n";
  for (const auto& level : levels)
    for (const auto& l : level.intervals)
      out += std::to_string(level.depth) + "," + address_text(l.address) + "," + to_string(l.interval.lo) + "," +
             to_string(l.interval.hi) + "\n";
  return out;
}

std::string refinement_svg(const IntervalSystem& sys, const std::vector<RefinementLevel>& levels) {
  const double width = 1000, margin = 20, row = 24;
  Rational lo = sys.parents().front().lo, hi = sys.parents().front().hi;
  for (const auto& p : sys.parents()) {
    lo = std::min(lo, p.lo);
    hi = std::max(hi, p.hi);
  }
  const double span = Rational(hi - lo).get_d();
  auto x = [&](const Rational& r) { return margin + Rational(r - lo).get_d() / span * width; };
  std::ostringstream os;
  os << std::fixed << std::setprecision(3);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width + 2 * margin << "\" height=\""
     << row * static_cast<double>(levels.size()) + 2 * margin << "\">\n";
  for (std::size_t r = 0; r < levels.size(); ++r) {
    double y = margin + row * static_cast<double>(r);
    for (const auto& l : levels[r].intervals) {
      double x0 = x(l.interval.lo), x1 = x(l.interval.hi);
      os << "  <rect x=\"" << x0 << "\" y=\"" << y << "\" width=\"" << std::max(x1 - x0, 0.5) << "\" height=\""
         << row * 0.6 << "\" fill=\"#2b6cb0\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace cantordyn
