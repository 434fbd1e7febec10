#include "cantordyn/folding.hpp"

#include <algorithm>
#include <cmath>

#include "cantordyn/multicurve.hpp"
#include "cantordyn/polynomial.hpp"

namespace cantordyn {

std::string to_string(FoldingType t) {
  switch (t) {
    case FoldingType::A: return "A";
    case FoldingType::B: return "B";
    case FoldingType::C: return "C";
  }
  return "?";
}

FoldingType classify_type(Side image_of_u1, Side image_of_v1, int m) {
  if (m < 2) throw FoldingError("a folding needs m ≥ 2 preimage curves");
  FoldingType t;
  if (image_of_u1 == image_of_v1) {
    t = FoldingType::A;
  } else {
    t = image_of_u1 == Side::inner ? FoldingType::B : FoldingType::C;
  }
  bool even = m % 2 == 0;
  if ((t == FoldingType::A) != even)
    throw FoldingError("type " + to_string(t) + " needs m " + (even ? "odd" : "even") + ", got m=" + std::to_string(m));
  return t;
}

Rational lambda_beta(const std::vector<int>& degrees) {
  Rational s = 0;
  for (int d : degrees) {
    if (d < 1) throw std::invalid_argument("lambda_beta: degrees must be ≥ 1");
    s += Rational(1, d);
  }
  return s;
}

int FoldingPlan::total_degree() const {
  int s = 0;
  for (int d : degrees) s += d;
  return s;
}

Rational FoldingPlan::lambda_beta() const { return cantordyn::lambda_beta(degrees); }

int FoldingPlan::d0() const {
  switch (type) {
    case FoldingType::A: return degrees.front();
    case FoldingType::B: return std::min(degrees.front(), degrees.back());
    case FoldingType::C: break;
  }
  throw FoldingError("d(F, β) of a type C plan is a geometric mean; square the plan first");
}

Feasibility feasibility_A(int deg_g, int m, const std::vector<int>& degrees, int postcritical_g) {
  Feasibility f;
  if (deg_g < 2) f.failures.push_back("deg g must be ≥ 2");
  if (postcritical_g < 3) f.failures.push_back("#P_g must be ≥ 3");
  if (m < 2 || m % 2 != 0) f.failures.push_back("m must be even and ≥ 2");
  if (static_cast<int>(degrees.size()) != m) f.failures.push_back("degree sequence length differs from m");
  if (!degrees.empty() && degrees.front() != deg_g) f.failures.push_back("d₁ must equal deg g");
  if (std::any_of(degrees.begin(), degrees.end(), [](int d) { return d < 2; }))
    f.failures.push_back("all degrees must be ≥ 2");
  else if (!degrees.empty() && !(lambda_beta(degrees) < 1))
    f.failures.push_back("λ_β = " + to_display(lambda_beta(degrees)) + " is not < 1");
  return f;
}

Feasibility feasibility_B(int deg_g1, int deg_g2, int m, const std::vector<int>& degrees, int postcritical_g1,
                          int postcritical_g2) {
  Feasibility f;
  if (deg_g1 < 2 || deg_g2 < 2) f.failures.push_back("polynomial degrees must be ≥ 2");
  if (deg_g1 + deg_g2 < 5) f.failures.push_back("deg g₁ + deg g₂ must be ≥ 5");
  if (postcritical_g1 < 3 || postcritical_g2 < 3) f.failures.push_back("#P_g must be ≥ 3 for both polynomials");
  if (m < 3 || m % 2 == 0) f.failures.push_back("m must be odd and ≥ 3");
  if (static_cast<int>(degrees.size()) != m) f.failures.push_back("degree sequence length differs from m");
  if (!degrees.empty() && (degrees.front() != deg_g1 || degrees.back() != deg_g2))
    f.failures.push_back("d₁ and d_m must equal deg g₁ and deg g₂");
  if (std::any_of(degrees.begin(), degrees.end(), [](int d) { return d < 2; }))
    f.failures.push_back("all degrees must be ≥ 2");
  else if (!degrees.empty() && !(lambda_beta(degrees) < 1))
    f.failures.push_back("λ_β = " + to_display(lambda_beta(degrees)) + " is not < 1");
  return f;
}

bool feasible_A(int deg_g, int m, const std::vector<int>& degrees) { return feasibility_A(deg_g, m, degrees).ok(); }

bool feasible_B(int deg_g1, int deg_g2, int m, const std::vector<int>& degrees) {
  return feasibility_B(deg_g1, deg_g2, m, degrees).ok();
}

int min_degree_apply1(int deg_g) {
  if (deg_g < 2) throw FoldingError("deg g must be ≥ 2");
  return std::max(deg_g + 2, 5);
}

int min_degree_apply1_pair(int g1, int g2) {
  if (g1 < 2 || g2 < 2) throw FoldingError("polynomial degrees must be ≥ 2");
  if (g1 + g2 < 5) throw FoldingError("pair recipes need deg g₁ + deg g₂ ≥ 5");
  Rational bound = Rational(g1 + g2) + Rational(g1 * g2, g1 * g2 - g1 - g2);
  BigInt fl;
  mpz_fdiv_q(fl.get_mpz_t(), bound.get_num_mpz_t(), bound.get_den_mpz_t());
  return static_cast<int>(fl.get_si()) + 1;  // strict inequality
}

int min_degree_apply2(int deg_g) {
  if (deg_g < 2) throw FoldingError("deg g must be ≥ 2");
  return deg_g + (deg_g + 1) * (deg_g + 5);
}

int min_degree_apply2_pair(int g1, int gm) {
  if (g1 < 2 || gm < 2) throw FoldingError("polynomial degrees must be ≥ 2");
  if (g1 + gm < 5) throw FoldingError("pair recipes need deg g₁ + deg g₂ ≥ 5");
  if (g1 > gm) throw FoldingError("apply2 pair needs deg g₁ ≤ deg g₂");
  return g1 + gm + g1 * (gm + 7);
}

std::string to_string(Recipe r) {
  switch (r) {
    case Recipe::apply1: return "apply1";
    case Recipe::apply1_pair: return "apply1_pair";
    case Recipe::apply2: return "apply2";
    case Recipe::apply2_pair: return "apply2_pair";
  }
  return "?";
}

void check_plan(const FoldingPlan& plan) {
  const int m = plan.m();
  if (m < 2) throw FoldingError("a folding needs m ≥ 2 preimage curves");
  if (std::any_of(plan.degrees.begin(), plan.degrees.end(), [](int d) { return d < 1; }))
    throw FoldingError("degrees must be ≥ 1");
  if ((plan.type == FoldingType::A) != (m % 2 == 0))
    throw FoldingError("type " + to_string(plan.type) + " is inconsistent with m=" + std::to_string(m));
  if (plan.inner_marked < 2 || plan.outer_marked < 2)
    throw FoldingError("β needs at least two marked points on each side");
  if (plan.inner_marked + plan.outer_marked != plan.post_critical_count)
    throw FoldingError("marked split does not add up to post_critical_count");
}

FoldingPlan plan_from_recipe(const RecipeInput& in) {
  FoldingPlan p;
  p.post_critical_count = in.post_critical_count;
  p.inner_marked = in.inner_marked;
  p.outer_marked = in.post_critical_count - in.inner_marked;
  const int g = in.deg_g1, g2 = in.deg_g2, d = in.degree;
  int bound = 0;
  switch (in.recipe) {
    case Recipe::apply1: bound = min_degree_apply1(g); break;
    case Recipe::apply1_pair: bound = min_degree_apply1_pair(g, g2); break;
    case Recipe::apply2: bound = min_degree_apply2(g); break;
    case Recipe::apply2_pair: bound = min_degree_apply2_pair(g, g2); break;
  }
  if (d < bound)
    throw FoldingError("degree " + std::to_string(d) + " is below the " + to_string(in.recipe) + " bound " +
                       std::to_string(bound));
  switch (in.recipe) {
    case Recipe::apply1:
      p.type = FoldingType::A;
      p.degrees = {g, d - g};
      p.polynomial_degrees = {g};
      break;
    case Recipe::apply1_pair:
      p.type = FoldingType::B;
      p.degrees = {g, d - g - g2, g2};
      p.polynomial_degrees = {g, g2};
      break;
    case Recipe::apply2: {
      p.type = FoldingType::A;
      int m = (g + 1) % 2 == 0 ? g + 1 : g + 2;
      p.degrees.assign(static_cast<std::size_t>(m), g + 5);
      p.degrees.front() = g;
      p.degrees.back() = d - g - (m - 2) * (g + 5);
      p.polynomial_degrees = {g};
      break;
    }
    case Recipe::apply2_pair: {
      p.type = FoldingType::B;
      int m = (g + 1) % 2 == 1 ? g + 1 : g + 2;
      p.degrees.assign(static_cast<std::size_t>(m), g2 + 7);
      p.degrees.front() = g;
      p.degrees.back() = g2;
      int rest = d - g - g2 - (m - 3) * (g2 + 7);
      p.degrees[static_cast<std::size_t>(m - 2)] = rest;
      p.polynomial_degrees = {g, g2};
      break;
    }
  }
  p.recipe = to_string(in.recipe) + "(deg_g=" + std::to_string(g) +
             (g2 ? ", deg_g2=" + std::to_string(g2) : std::string()) + ", d=" + std::to_string(d) + ")";
  check_plan(p);
  if (p.total_degree() != d) throw std::logic_error("plan_from_recipe: degrees do not sum to d");
  if (!(p.lambda_beta() < 1)) throw FoldingError("recipe produced λ_β = " + to_display(p.lambda_beta()) + " ≥ 1");
  if ((in.recipe == Recipe::apply2 || in.recipe == Recipe::apply2_pair) && !(p.d0() < p.m()))
    throw FoldingError("recipe produced d₀ ≥ m");
  return p;
}

FoldingPlan square_if_type_c(const FoldingPlan& plan) {
  if (plan.type != FoldingType::C) return plan;
  check_plan(plan);
  // Type C orientations are (−1)^i: δ₁ sends its inner side out. The F²-preimages
  // of β inside the block of δᵢ follow δ₁…δ_m, reversed when δᵢ reverses.
  FoldingPlan sq = plan;
  sq.type = FoldingType::B;
  sq.squared = true;
  sq.degrees.clear();
  const int m = plan.m();
  for (int i = 0; i < m; ++i) {
    bool forward = i % 2 == 1;
    for (int k = 0; k < m; ++k) {
      int j = forward ? k : m - 1 - k;
      sq.degrees.push_back(plan.degrees[static_cast<std::size_t>(i)] * plan.degrees[static_cast<std::size_t>(j)]);
    }
  }
  sq.recipe = plan.recipe.empty() ? "square of a type C plan" : "square of " + plan.recipe;
  return sq;
}

std::string to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::thm_no1: return "thm_no1";
    case CertificateKind::thm_no2: return "thm_no2";
    case CertificateKind::entry_bound: return "entry_bound";
    case CertificateKind::deg_bound: return "deg_bound";
    case CertificateKind::obstruction_found: return "obstruction_found";
  }
  return "?";
}

namespace {

BigInt pow(const BigInt& b, unsigned e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

}  // namespace

bool Certificate::verify() const {
  if (!accepted) return true;  // nothing claimed
  switch (kind) {
    case CertificateKind::thm_no1: {
      if (!N || *N == 0) return false;
      if (!(p_minus_3 * pow(d0, *N) < pow(m, *N))) return false;
      return *N == 1 || !(p_minus_3 * pow(d0, *N - 1) < pow(m, *N - 1));
    }
    case CertificateKind::entry_bound: {
      if (!matrix || v.size() != matrix->size()) return false;
      auto mv = matrix->apply(v);
      for (std::size_t i = 0; i < v.size(); ++i)
        if (!(v[i] > 0) || !(mv[i] < v[i])) return false;
      if (cycle_scale) {
        auto mc = matrix->apply(cycle_v);
        for (std::size_t i = 0; i < cycle_v.size(); ++i)
          if (!(mc[i] <= *cycle_scale * cycle_v[i])) return false;
      }
      return true;
    }
    case CertificateKind::thm_no2:
    case CertificateKind::deg_bound:
    case CertificateKind::obstruction_found: return true;
  }
  return false;
}

std::string Certificate::to_text() const {
  std::string out = to_string(kind) + ": ";
  if (!applicable) {
    out += "inapplicable";
  } else {
    out += accepted ? "accepted" : "rejected";
  }
  if (N) out += " N=" + std::to_string(*N);
  if (!v.empty()) {
    out += " v=(";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + to_display(v[i]);
    out += ")";
  }
  if (!multicurve.empty()) {
    out += " multicurve={";
    for (std::size_t i = 0; i < multicurve.size(); ++i) out += (i ? "," : "") + multicurve[i];
    out += "}";
  }
  out += "\n";
  for (const auto& n : notes) out += "  " + n + "\n";
  for (const auto& w : warnings) out += "  warning: " + w + "\n";
  return out;
}

Certificate check_thm_no1(const FoldingPlan& input) {
  FoldingPlan plan = square_if_type_c(input);
  check_plan(plan);
  Certificate c;
  c.kind = CertificateKind::thm_no1;
  c.d0 = plan.d0();
  c.m = plan.m();
  c.p_minus_3 = plan.post_critical_count - 3;
  if (plan.squared) c.notes.push_back("type C plan squared: analysed as type B of F²");
  c.notes.push_back("d0=" + to_string(c.d0) + " m=" + to_string(c.m) + " p=" + std::to_string(plan.post_critical_count));
  if (c.d0 >= c.m) {
    c.applicable = false;
    c.notes.push_back("inapplicable: d0 ≥ m");
    return c;
  }
  for (unsigned n = 1;; ++n)
    if (c.p_minus_3 * pow(c.d0, n) < pow(c.m, n)) {
      c.N = n;
      break;
    }
  c.accepted = true;
  c.notes.push_back("(p-3)·d0^N = " + to_string(BigInt(c.p_minus_3 * pow(c.d0, *c.N))) + " < m^N = " +
                    to_string(pow(c.m, *c.N)));
  return c;
}

Certificate check_thm_no2(const FoldingPlan& plan) {
  if (!plan.witness) throw FoldingError("thm_no2 needs a declared injective-tree witness");
  Certificate c;
  c.kind = CertificateKind::thm_no2;
  const auto& w = *plan.witness;
  c.notes.push_back("conditional on declared witness (k=" + std::to_string(w.k) + ")");
  c.accepted = true;
  if (w.k < 1) {
    c.accepted = false;
    c.notes.push_back("witness k must be ≥ 1");
  }
  if (!(plan.lambda_beta() < 1)) {
    c.accepted = false;
    c.notes.push_back("λ_β = " + to_display(plan.lambda_beta()) + " is not < 1");
  }
  if (!w.bounded_fatou_domains) {
    c.accepted = false;
    c.notes.push_back("an injective tree needs non-empty bounded Fatou domains");
  }
  if (!w.fatou_domains_touch) c.warnings.push_back("no two bounded Fatou domains touch");
  return c;
}

Certificate entry_bound_check(const RationalMatrix& mat, const std::vector<BigInt>& k, const BigInt& d0,
                              const BigInt& mm, int post_critical_count) {
  const std::size_t n = mat.size();
  if (k.size() != n) throw std::invalid_argument("entry_bound_check: one intersection number per class");
  std::size_t zeros = static_cast<std::size_t>(std::count(k.begin(), k.end(), BigInt(0)));
  if (zeros != 0 && zeros != n)
    throw std::invalid_argument("entry_bound_check: intersection numbers must be all zero or all non-zero");
  Certificate c;
  c.kind = CertificateKind::entry_bound;
  c.d0 = d0;
  c.m = mm;
  c.p_minus_3 = post_critical_count - 3;
  if (zeros == n) {
    c.applicable = false;
    c.notes.push_back("Γ does not meet β");
    return c;
  }
  c.matrix = mat;
  bool bounds = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rational bound = Rational(d0 * k[j] * k[j]) / Rational(mm * k[i] * k[i]);
      if (mat(i, j) > bound) {
        bounds = false;
        c.notes.push_back("entry (" + std::to_string(i) + "," + std::to_string(j) + ") = " + to_display(mat(i, j)) +
                          " exceeds " + to_display(bound));
      }
    }
  for (std::size_t i = 0; i < n; ++i) c.v.push_back(Rational(1) / Rational(k[i] * k[i]));
  auto mv = mat.apply(c.v);
  bool contracts = true;
  for (std::size_t i = 0; i < n; ++i) contracts = contracts && mv[i] < c.v[i];
  if (!contracts) c.notes.push_back("M v < v fails");

  // Single cycle: one non-zero entry per row and column, forming one orbit.
  std::vector<std::size_t> next(n, n);
  bool cycle = true;
  for (std::size_t i = 0; i < n && cycle; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (mat(i, j) != 0) {
        if (next[i] != n) cycle = false;
        next[i] = j;
      }
  if (cycle) {
    std::size_t x = 0, steps = 0;
    do {
      if (next[x] == n) {
        cycle = false;
        break;
      }
      x = next[x];
      ++steps;
    } while (x != 0 && steps <= n);
    cycle = cycle && x == 0 && steps == n;
  }
  bool cycle_ok = true;
  if (cycle) {
    for (std::size_t i = 0; i < n; ++i) c.cycle_v.push_back(Rational(1) / Rational(k[i]));
    c.cycle_scale = Rational(1) / Rational(mm);
    auto mc = mat.apply(c.cycle_v);
    for (std::size_t i = 0; i < n; ++i) cycle_ok = cycle_ok && mc[i] <= *c.cycle_scale * c.cycle_v[i];
    c.notes.push_back(cycle_ok ? "single cycle: M v ≤ v/m with v = 1/k" : "single cycle: M v ≤ v/m fails");
  }
  c.accepted = bounds && contracts && cycle_ok;
  return c;
}

Certificate find_obstruction(const MapSpec& spec) {
  Certificate c;
  c.kind = CertificateKind::obstruction_found;
  const auto& ess = spec.essential_classes;
  if (ess.size() > 16) throw FoldingError("obstruction search is limited to 16 essential classes");
  for (std::size_t mask = 1; mask < (std::size_t{1} << ess.size()); ++mask) {
    std::vector<std::string> classes;
    for (std::size_t i = 0; i < ess.size(); ++i)
      if (mask & (std::size_t{1} << i)) classes.push_back(ess[i]);
    Multicurve g(spec, classes);
    if (is_thurston_obstruction(spec, g)) {
      auto e = leading_eigenvalue(transition_matrix(spec, g).entries, default_bracket_width());
      c.accepted = true;
      c.multicurve = classes;
      c.notes.push_back("stable, λ " + std::string(e.exact() ? "= " + to_display(e.lo) : "in [" + to_string(e.lo) + ", " + to_string(e.hi) + "]"));
      return c;
    }
  }
  c.notes.push_back("no stable multicurve of the declared classes has λ ≥ 1");
  return c;
}

MapSpec emit_map_spec(const FoldingPlan& input) {
  FoldingPlan plan = square_if_type_c(input);
  check_plan(plan);
  const int m = plan.m();
  const bool type_a = plan.type == FoldingType::A;
  MapSpec s;
  s.degree = plan.total_degree();
  s.post_critical_count = plan.post_critical_count;
  s.essential_classes = {"beta"};
  std::vector<std::string> inner, outer;
  for (int i = 1; i <= plan.inner_marked; ++i) inner.push_back("p_u" + std::to_string(i));
  for (int i = 1; i <= plan.outer_marked; ++i) outer.push_back("p_v" + std::to_string(i));
  s.peripheral_classes = inner;
  s.peripheral_classes.insert(s.peripheral_classes.end(), outer.begin(), outer.end());

  auto& beta = s.pullback["beta"];
  auto& rule = s.annular["beta"];
  for (int i = 1; i <= m; ++i) {
    int orientation = i % 2 == 1 ? 1 : -1;
    beta.push_back({plan.degrees[static_cast<std::size_t>(i - 1)], "beta"});
    rule.push_back(ChildSlot{"beta", plan.degrees[static_cast<std::size_t>(i - 1)], orientation});
    // The annulus after an odd child lands outside β, after an even one inside.
    if (i < m) rule.push_back(GapSlot{std::string(i % 2 == 1 ? "V" : "U")});
  }

  // Marked points: the inner ones cycle; the outer ones cycle (type B) or fall inside (type A).
  std::map<std::string, std::vector<std::string>> preimages;
  for (std::size_t i = 0; i < inner.size(); ++i) preimages[inner[(i + 1) % inner.size()]].push_back(inner[i]);
  for (std::size_t i = 0; i < outer.size(); ++i)
    preimages[type_a ? inner[i % inner.size()] : outer[(i + 1) % outer.size()]].push_back(outer[i]);
  for (const auto& p : s.peripheral_classes) {
    if (static_cast<int>(preimages[p].size()) > s.degree)
      throw FoldingError("degree " + std::to_string(s.degree) + " is too small for " +
                         std::to_string(preimages[p].size()) + " marked preimages of " + p);
    auto& entries = s.pullback[p];
    for (const auto& y : preimages[p]) entries.push_back({1, y});
    while (static_cast<int>(entries.size()) < s.degree) entries.push_back({1, std::string(kNullClass)});
  }
  s.pullback[std::string(kNullClass)].assign(static_cast<std::size_t>(s.degree), {1, std::string(kNullClass)});

  s.config.vertices = {{"U", plan.inner_marked}, {"V", plan.outer_marked}};
  s.config.edges = {{"beta", "U", "V"}};

  auto& sub_u = s.substitution["U"];
  auto& sub_v = s.substitution["V"];
  sub_u.push_back({std::string("U"), plan.inner_marked, plan.degrees.front(), {{"beta", 0}}});
  for (int i = 1; i < m; ++i) {
    PreimagePiece annulus{std::nullopt, 0,
                          plan.degrees[static_cast<std::size_t>(i - 1)] + plan.degrees[static_cast<std::size_t>(i)],
                          {{"beta", static_cast<std::size_t>(i - 1)}, {"beta", static_cast<std::size_t>(i)}}};
    (i % 2 == 1 ? sub_v : sub_u).push_back(std::move(annulus));
  }
  PreimagePiece v1{std::string("V"), plan.outer_marked, plan.degrees.back(), {{"beta", static_cast<std::size_t>(m - 1)}}};
  (type_a ? sub_u : sub_v).push_back(std::move(v1));
  return s;
}

AirplaneParameter airplane_parameter(const Rational& width) {
  // (c²+c)²+c = c⁴ + 2c³ + c² + c
  Polynomial f({Rational(0), Rational(1), Rational(1), Rational(2), Rational(1)});
  AirplaneParameter a;
  a.sign_change = f.sign_at(Rational(-2)) * f.sign_at(Rational(-1)) < 0;
  auto [lo, hi] = bisect_sign_change(f, Rational(-2), Rational(-1), width);
  a.lo = lo;
  a.hi = hi;
  // |f'| ≤ 4·8 + 6·4 + 2·2 + 1 = 61 on [-2, -1], so |f| ≤ 61·width at both ends.
  Rational tol = Rational(61) * (hi - lo);
  auto absq = [](const Rational& q) { return q < 0 ? Rational(-q) : q; };
  a.period_three = absq(f(lo)) <= tol && absq(f(hi)) <= tol;
  auto ordered = [](long double c) {
    long double x0 = (1.0L - std::sqrt(1.0L - 4.0L * c)) / 2.0L;
    long double x1 = -x0;
    long double r = std::sqrt(-x0 - c);
    long double xm1 = -r, x2 = r;
    long double c1 = c * c + c;
    return c < xm1 && xm1 < x0 && x0 < 0 && 0 < x1 && x1 < c1 && c1 < x2;
  };
  a.ordering = ordered(static_cast<long double>(lo.get_d())) && ordered(static_cast<long double>(hi.get_d()));
  return a;
}

namespace {

using json = nlohmann::json;

[[noreturn]] void plan_error(const std::string& where, const std::string& what) {
  throw SpecError(SpecError::Kind::schema, where, what);
}

int get_int(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) plan_error(where, "missing field '" + key + "'");
  if (!j.at(key).is_number_integer()) plan_error(where + "." + key, "expected an integer");
  return j.at(key).get<int>();
}

}  // namespace

FoldingPlan parse_plan(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(SpecError::Kind::syntax, "plan", e.what());
  }
  if (!j.is_object()) plan_error("plan", "expected an object");
  static const std::vector<std::string> known = {"type", "degrees", "polynomial_degrees", "post_critical_count",
                                                 "marked", "witness", "squared", "recipe"};
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) plan_error(key, "unknown field");
  FoldingPlan p;
  if (!j.contains("type") || !j["type"].is_string()) plan_error("type", "expected \"A\", \"B\" or \"C\"");
  std::string t = j["type"];
  if (t == "A") p.type = FoldingType::A;
  else if (t == "B") p.type = FoldingType::B;
  else if (t == "C") p.type = FoldingType::C;
  else plan_error("type", "expected \"A\", \"B\" or \"C\"");
  auto ints = [&](const std::string& key) {
    if (!j.contains(key) || !j[key].is_array()) plan_error(key, "expected an array of integers");
    std::vector<int> out;
    for (std::size_t i = 0; i < j[key].size(); ++i) {
      if (!j[key][i].is_number_integer()) plan_error(key + "[" + std::to_string(i) + "]", "expected an integer");
      out.push_back(j[key][i].get<int>());
    }
    return out;
  };
  p.degrees = ints("degrees");
  p.polynomial_degrees = ints("polynomial_degrees");
  p.post_critical_count = get_int(j, "post_critical_count", "plan");
  if (!j.contains("marked") || !j["marked"].is_object()) plan_error("marked", "expected {inner, outer}");
  p.inner_marked = get_int(j["marked"], "inner", "marked");
  p.outer_marked = get_int(j["marked"], "outer", "marked");
  if (j.contains("witness")) {
    const auto& w = j["witness"];
    if (!w.is_object()) plan_error("witness", "expected an object");
    InjectiveTreeWitness wit;
    int k = get_int(w, "k", "witness");
    if (k < 0) plan_error("witness.k", "must be ≥ 0");
    wit.k = static_cast<unsigned>(k);
    if (w.contains("bounded_fatou_domains")) wit.bounded_fatou_domains = w["bounded_fatou_domains"].get<bool>();
    if (w.contains("fatou_domains_touch")) wit.fatou_domains_touch = w["fatou_domains_touch"].get<bool>();
    p.witness = wit;
  }
  if (j.contains("squared")) p.squared = j["squared"].get<bool>();
  if (j.contains("recipe")) p.recipe = j["recipe"].get<std::string>();
  try {
    check_plan(p);
  } catch (const FoldingError& e) {
    throw SpecError(SpecError::Kind::invalid, "plan", e.what());
  }
  return p;
}

std::string serialize_plan(const FoldingPlan& p) {
  nlohmann::ordered_json j;
  j["type"] = to_string(p.type);
  j["degrees"] = p.degrees;
  j["polynomial_degrees"] = p.polynomial_degrees;
  j["post_critical_count"] = p.post_critical_count;
  j["marked"] = {{"inner", p.inner_marked}, {"outer", p.outer_marked}};
  if (p.witness) {
    j["witness"] = {{"k", p.witness->k},
                    {"bounded_fatou_domains", p.witness->bounded_fatou_domains},
                    {"fatou_domains_touch", p.witness->fatou_domains_touch}};
  }
  if (p.squared) j["squared"] = true;
  if (!p.recipe.empty()) j["recipe"] = p.recipe;
  return j.dump(2) + "\n";
}

FoldingPlan load_plan(const std::string& path) { return parse_plan(read_text_file(path)); }

}  // namespace cantordyn
