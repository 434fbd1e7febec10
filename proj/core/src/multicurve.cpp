#include "cantordyn/multicurve.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace cantordyn {

Multicurve::Multicurve(const MapSpec& spec, std::vector<std::string> classes) : classes_(std::move(classes)) {
  if (classes_.empty()) throw MulticurveError("multicurve must be non-empty");
  std::set<std::string> seen;
  for (const auto& c : classes_) {
    if (spec.kind_of(c) != ClassKind::essential) throw MulticurveError("unknown essential class '" + c + "'");
    if (!seen.insert(c).second) throw MulticurveError("duplicate class '" + c + "' in multicurve");
  }
}

std::optional<std::size_t> Multicurve::index_of(const std::string& id) const {
  auto it = std::find(classes_.begin(), classes_.end(), id);
  if (it == classes_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - classes_.begin());
}

Multicurve config_multicurve(const MapSpec& spec) { return Multicurve(spec, spec.config_classes()); }

TransitionMatrix transition_matrix(const MapSpec& spec, const Multicurve& gamma) {
  TransitionMatrix t{gamma.classes(), RationalMatrix(gamma.size())};
  for (std::size_t j = 0; j < gamma.size(); ++j)
    for (const auto& e : spec.pullback.at(gamma.classes()[j]))
      if (auto i = gamma.index_of(e.image_class)) t.entries(*i, j) += Rational(1, e.local_degree);
  return t;
}

ReducedTransitionMatrix reduced_matrix(const MapSpec& spec, const Multicurve& gamma) {
  ReducedTransitionMatrix r{gamma.classes(), IntegerMatrix(gamma.size())};
  for (std::size_t j = 0; j < gamma.size(); ++j)
    for (const auto& e : spec.pullback.at(gamma.classes()[j]))
      if (auto i = gamma.index_of(e.image_class)) r.entries(*i, j) += 1;
  return r;
}

std::string to_string(VsOne v) {
  switch (v) {
    case VsOne::less: return "less";
    case VsOne::equal: return "equal";
    case VsOne::greater: return "greater";
  }
  return "?";
}

Rational default_bracket_width() { return Rational(1, 1) / Rational(BigInt(1) << 40); }

EigenReport leading_eigenvalue(const RationalMatrix& m, const Rational& width) {
  const std::size_t n = m.size();
  Rational bound = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Rational row = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (m(i, j) < 0) throw std::invalid_argument("leading_eigenvalue: negative entry");
      row += m(i, j);
    }
    bound = std::max(bound, row);
  }
  EigenReport r;
  if (bound == 0) return r;

  Polynomial p = characteristic_polynomial(m);
  // All real eigenvalues lie in [-B, B] and the Perron root is the largest one, ≥ 0.
  auto root = largest_root(p, Rational(-1), bound);
  if (!root) throw std::logic_error("leading_eigenvalue: characteristic polynomial has no root in (-1, B]");
  SturmSequence sturm(root->polynomial());
  if (bound > 1 && sturm.count_roots(Rational(1), bound) > 0) {
    r.vs_one = VsOne::greater;
  } else if (root->polynomial()(Rational(1)) == 0) {
    r.vs_one = VsOne::equal;
  } else {
    r.vs_one = VsOne::less;
  }
  if (r.vs_one == VsOne::equal) {
    root = AlgebraicRoot(root->polynomial(), Rational(1), Rational(1));
  } else {
    root->refine_to(width);
  }
  r.lo = root->lo();
  r.hi = root->hi();
  if (r.vs_one == VsOne::greater && r.lo < 1) r.lo = 1;
  if (r.vs_one == VsOne::less && r.hi > 1) r.hi = 1;
  if (r.lo < 0) r.lo = 0;
  r.root = std::move(root);
  return r;
}

EigenReport leading_eigenvalue(const IntegerMatrix& m, const Rational& width) {
  return leading_eigenvalue(to_rational(m), width);
}

int compare_perron(const EigenReport& a, const EigenReport& b) {
  if (!a.root && !b.root) return 0;
  if (!a.root) return b.root->compare_to(Rational(0)) == 0 ? 0 : -1;
  if (!b.root) return a.root->compare_to(Rational(0)) == 0 ? 0 : 1;
  return compare(*a.root, *b.root);
}

std::vector<std::vector<std::size_t>> strongly_connected_components(const IntegerMatrix& m) {
  const std::size_t n = m.size();
  // Tarjan on edges j -> i for m(i, j) > 0.
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> comps;
  int counter = 0;
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w = 0; w < n; ++w) {
      if (m(w, v) == 0) continue;
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::size_t> comp;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      comps.push_back(std::move(comp));
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (index[v] < 0) visit(v);
  std::sort(comps.begin(), comps.end());
  return comps;
}

bool is_irreducible(const IntegerMatrix& m) {
  if (m.size() == 0) return false;
  if (m.size() == 1) return m(0, 0) > 0;
  return strongly_connected_components(m).size() == 1;
}

bool is_irreducible(const MapSpec& spec, const Multicurve& gamma) {
  return is_irreducible(reduced_matrix(spec, gamma).entries);
}

bool is_prestable(const MapSpec& spec, const Multicurve& gamma) {
  auto r = reduced_matrix(spec, gamma).entries;
  for (std::size_t i = 0; i < r.size(); ++i) {
    bool any = false;
    for (std::size_t j = 0; j < r.size(); ++j) any = any || r(i, j) > 0;
    if (!any) return false;
  }
  return true;
}

bool is_stable(const MapSpec& spec, const Multicurve& gamma) {
  for (const auto& beta : gamma.classes())
    for (const auto& e : spec.pullback.at(beta))
      if (spec.is_essential(e.image_class) && !gamma.contains(e.image_class)) return false;
  return true;
}

std::vector<std::vector<BigInt>> kappa_table(const MapSpec& spec, const Multicurve& gamma, unsigned depth) {
  auto m = reduced_matrix(spec, gamma).entries;
  std::vector<std::vector<BigInt>> rows;
  std::vector<BigInt> v(gamma.size(), BigInt(1));
  rows.push_back(v);
  for (unsigned n = 1; n <= depth; ++n) {
    v = m.apply(v);
    rows.push_back(v);
  }
  return rows;
}

KappaValue kappa(const MapSpec& spec, const Multicurve& gamma, const std::string& cls, unsigned n) {
  auto i = gamma.index_of(cls);
  if (!i) throw MulticurveError("class '" + cls + "' is not in the multicurve");
  KappaValue k;
  k.value = kappa_table(spec, gamma, n).back()[*i];
  k.horizon_only = !is_prestable(spec, gamma);
  return k;
}

bool is_cantor(const MapSpec& spec, const Multicurve& gamma) {
  auto m = reduced_matrix(spec, gamma).entries;
  if (!is_irreducible(m)) throw NotIrreducible("is_cantor: multicurve is not irreducible; use the horizon mode");
  for (const auto& s : m.column_sums())
    if (s >= 2) return true;
  return false;
}

HorizonReport cantor_horizon(const MapSpec& spec, const Multicurve& gamma, unsigned horizon) {
  HorizonReport h;
  h.horizon = horizon;
  h.kappa = kappa_table(spec, gamma, horizon);
  for (std::size_t n = 0; n + 1 < h.kappa.size(); ++n)
    for (std::size_t i = 0; i < gamma.size(); ++i)
      if (h.kappa[n + 1][i] < h.kappa[n][i]) h.monotone = false;
  h.growth_observed = horizon > 0;
  for (std::size_t i = 0; i < gamma.size(); ++i)
    if (!(h.kappa[horizon][i] > h.kappa[horizon / 2][i])) h.growth_observed = false;
  return h;
}

ReducedEigenReport reduced_eigen_check(const MapSpec& spec, const Multicurve& gamma) {
  ReducedEigenReport r;
  auto m = reduced_matrix(spec, gamma).entries;
  r.eigen = leading_eigenvalue(m, default_bracket_width());
  r.prestable = is_prestable(spec, gamma);
  r.irreducible = is_irreducible(m);
  if (r.irreducible) {
    r.cantor = is_cantor(spec, gamma);
    r.cantor_exact = true;
  } else {
    r.cantor = cantor_horizon(spec, gamma, 64).growth_observed;
  }
  bool ge_one = r.eigen.vs_one != VsOne::less;
  bool gt_one = r.eigen.vs_one == VsOne::greater;
  r.prestable_implies_ge_one = !r.prestable || ge_one;
  r.cantor_implies_gt_one = !r.cantor || gt_one;
  r.irreducible_gt_one_implies_cantor = !(r.irreducible && gt_one) || r.cantor;
  return r;
}

Multicurve stabilize(const MapSpec& spec, const Multicurve& gamma0) {
  if (!is_prestable(spec, gamma0)) throw MulticurveError("stabilize: input multicurve is not pre-stable");
  std::set<std::string> current(gamma0.classes().begin(), gamma0.classes().end());
  for (std::size_t step = 0; step <= spec.essential_classes.size(); ++step) {
    std::set<std::string> next;
    for (const auto& beta : current)
      for (const auto& e : spec.pullback.at(beta))
        if (spec.is_essential(e.image_class)) next.insert(e.image_class);
    if (next == current) break;
    if (!std::includes(next.begin(), next.end(), current.begin(), current.end()))
      throw std::logic_error("stabilize: iteration is not monotone");
    current = std::move(next);
  }
  std::vector<std::string> ordered;
  for (const auto& c : spec.essential_classes)
    if (current.count(c)) ordered.push_back(c);
  return Multicurve(spec, ordered);
}

Multicurve irreducible_core(const MapSpec& spec, const Multicurve& gamma) {
  if (!is_stable(spec, gamma)) throw MulticurveError("irreducible_core: multicurve is not stable");
  auto t = transition_matrix(spec, gamma).entries;
  auto r = reduced_matrix(spec, gamma).entries;
  auto full = leading_eigenvalue(t, default_bracket_width());
  if (!full.root || full.root->compare_to(Rational(0)) == 0)
    throw MulticurveError("irreducible_core: leading eigenvalue is 0");
  std::optional<std::vector<std::size_t>> best;
  std::optional<EigenReport> best_eigen;
  for (const auto& comp : strongly_connected_components(r)) {
    if (comp.size() == 1 && r(comp[0], comp[0]) == 0) continue;  // acyclic singleton
    auto e = leading_eigenvalue(t.principal(comp), default_bracket_width());
    // Components come sorted by smallest member, so ties keep the lowest index.
    if (!best || compare_perron(e, *best_eigen) > 0) {
      best = comp;
      best_eigen = std::move(e);
    }
  }
  if (!best || compare_perron(*best_eigen, full) != 0)
    throw std::logic_error("irreducible_core: no component attains the leading eigenvalue");
  std::vector<std::string> classes;
  for (auto i : *best) classes.push_back(gamma.classes()[i]);
  return Multicurve(spec, classes);
}

bool is_thurston_obstruction(const MapSpec& spec, const Multicurve& gamma) {
  if (!is_stable(spec, gamma)) return false;
  auto e = leading_eigenvalue(transition_matrix(spec, gamma).entries, default_bracket_width());
  return e.vs_one != VsOne::less;
}

bool verify_perron_certificate(const IntegerMatrix& m, const std::vector<Rational>& v, const Rational& lambda) {
  if (v.size() != m.size() || !(lambda > 1)) return false;
  for (const auto& x : v)
    if (!(x > 0)) return false;
  auto mv = to_rational(m).apply(v);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!(mv[i] > lambda * v[i])) return false;
  return true;
}

namespace {

// Coarse dyadic rounding of a certified vector, kept only if it still certifies.
std::vector<Rational> simplify(const IntegerMatrix& m, const std::vector<Rational>& v, const Rational& lambda) {
  for (unsigned bits = 0; bits <= 40; ++bits) {
    BigInt scale = BigInt(1) << bits;
    std::vector<Rational> w;
    for (const auto& x : v) {
      BigInt k;
      Rational scaled = x * scale;
      mpz_fdiv_q(k.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
      if (k == 0) k = 1;
      Rational q(k, scale);
      q.canonicalize();
      w.push_back(q);
    }
    if (verify_perron_certificate(m, w, lambda)) return w;
  }
  return v;
}

}  // namespace

PerronCertificate perron_certificate(const IntegerMatrix& m, unsigned max_iterations) {
  auto e = leading_eigenvalue(m, default_bracket_width());
  if (e.vs_one != VsOne::greater) throw MulticurveError("no Perron certificate: leading eigenvalue of M_r is not > 1");
  AlgebraicRoot root = *e.root;
  while (!root.exact() && root.lo() <= 1) root.refine();
  Rational lambda = (Rational(1) + root.lo()) / 2;

  IntegerMatrix step = IntegerMatrix::identity(m.size()) + m;
  std::vector<BigInt> w(m.size(), BigInt(1));
  for (unsigned k = 0; k <= max_iterations; ++k) {
    BigInt top = *std::max_element(w.begin(), w.end());
    std::vector<Rational> v;
    for (const auto& x : w) {
      Rational q(x, top);
      q.canonicalize();
      v.push_back(q);
    }
    if (verify_perron_certificate(m, v, lambda)) return {lambda, simplify(m, v, lambda), k};
    w = step.apply(w);
    BigInt g = 0;
    for (const auto& x : w) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g > 1)
      for (auto& x : w) x /= g;
  }
  throw MulticurveError("no Perron certificate found within " + std::to_string(max_iterations) + " iterations");
}

nlohmann::ordered_json to_json(const EigenReport& e) {
  nlohmann::ordered_json j;
  j["lo"] = to_string(e.lo);
  j["hi"] = to_string(e.hi);
  j["vs_one"] = to_string(e.vs_one);
  return j;
}

AnalysisReport analyze(const MapSpec& spec, const Multicurve& gamma, const Rational& width, unsigned kappa_depth) {
  AnalysisReport a{gamma, transition_matrix(spec, gamma), reduced_matrix(spec, gamma), {}, {}, false,
                   false, false, std::nullopt, std::nullopt, false, {}};
  a.eigen = leading_eigenvalue(a.transition.entries, width);
  a.reduced_check = reduced_eigen_check(spec, gamma);
  a.irreducible = a.reduced_check.irreducible;
  a.prestable = a.reduced_check.prestable;
  a.stable = is_stable(spec, gamma);
  if (a.irreducible) {
    a.cantor = is_cantor(spec, gamma);
  } else {
    a.horizon = cantor_horizon(spec, gamma, std::max(kappa_depth, 16u));
  }
  a.obstruction = a.stable && a.eigen.vs_one != VsOne::less;
  a.kappa = kappa_table(spec, gamma, kappa_depth);
  return a;
}

namespace {

std::string lambda_text(const EigenReport& e) {
  if (e.exact()) return "λ=" + to_display(e.lo);
  std::ostringstream os;
  os.precision(10);
  os << "λ≈" << Rational((e.lo + e.hi) / 2).get_d() << " in [" << to_string(e.lo) << ", " << to_string(e.hi) << "]";
  return os.str();
}

}  // namespace

std::string AnalysisReport::summary() const {
  std::string status = obstruction ? "OBSTRUCTION" : stable ? "no obstruction" : "unstable, no obstruction";
  std::string cantor_text;
  if (cantor) {
    cantor_text = *cantor ? "Cantor" : "not Cantor";
  } else {
    cantor_text = horizon->growth_observed ? "Cantor growth observed to horizon " + std::to_string(horizon->horizon)
                                           : "no Cantor growth to horizon " + std::to_string(horizon->horizon);
  }
  return status + " " + lambda_text(eigen) + ", " + cantor_text;
}

nlohmann::ordered_json AnalysisReport::to_json() const {
  using oj = nlohmann::ordered_json;
  oj j;
  j["multicurve"] = gamma.classes();
  oj t = oj::array();
  oj r = oj::array();
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    oj trow = oj::array();
    oj rrow = oj::array();
    for (std::size_t k = 0; k < gamma.size(); ++k) {
      trow.push_back(to_string(transition.entries(i, k)));
      rrow.push_back(to_string(reduced.entries(i, k)));
    }
    t.push_back(trow);
    r.push_back(rrow);
  }
  j["transition_matrix"] = t;
  j["reduced_matrix"] = r;
  j["leading_eigenvalue"] = cantordyn::to_json(eigen);
  j["reduced_leading_eigenvalue"] = cantordyn::to_json(reduced_check.eigen);
  j["irreducible"] = irreducible;
  j["prestable"] = prestable;
  j["stable"] = stable;
  if (cantor) {
    j["cantor"] = *cantor;
  } else {
    oj h;
    h["mode"] = "horizon";
    h["horizon"] = horizon->horizon;
    h["monotone"] = horizon->monotone;
    h["growth_observed"] = horizon->growth_observed;
    j["cantor"] = h;
  }
  oj lemma;
  lemma["prestable_implies_ge_one"] = reduced_check.prestable_implies_ge_one;
  lemma["cantor_implies_gt_one"] = reduced_check.cantor_implies_gt_one;
  lemma["irreducible_gt_one_implies_cantor"] = reduced_check.irreducible_gt_one_implies_cantor;
  j["eigenvalue_lemma"] = lemma;
  j["thurston_obstruction"] = obstruction;
  oj kt = oj::array();
  for (std::size_t n = 0; n < kappa.size(); ++n) {
    oj row;
    row["n"] = n;
    for (std::size_t i = 0; i < gamma.size(); ++i) row[gamma.classes()[i]] = to_string(kappa[n][i]);
    kt.push_back(row);
  }
  j["kappa"] = kt;
  j["summary"] = summary();
  return j;
}

std::string kappa_csv(const Multicurve& gamma, const std::vector<std::vector<BigInt>>& table) {
  std::string out = "n,class,kappa\n";
  for (std::size_t n = 0; n < table.size(); ++n)
    for (std::size_t i = 0; i < gamma.size(); ++i)
      out += std::to_string(n) + "," + gamma.classes()[i] + "," + to_string(table[n][i]) + "\n";
  return out;
}

}  // namespace cantordyn
