#include "cantordyn/spec_model.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "cantordyn/gluing.hpp"

namespace cantordyn {

ClassKind MapSpec::kind_of(std::string_view id) const {
  if (id == kNullClass) return ClassKind::null;
  if (std::find(essential_classes.begin(), essential_classes.end(), id) != essential_classes.end())
    return ClassKind::essential;
  if (std::find(peripheral_classes.begin(), peripheral_classes.end(), id) != peripheral_classes.end())
    return ClassKind::peripheral;
  return ClassKind::unknown;
}

std::vector<std::string> MapSpec::universe() const {
  std::vector<std::string> u = essential_classes;
  u.insert(u.end(), peripheral_classes.begin(), peripheral_classes.end());
  u.emplace_back(kNullClass);
  return u;
}

std::vector<std::string> MapSpec::config_classes() const {
  std::vector<std::string> out;
  for (const auto& e : config.edges) out.push_back(e.curve_class);
  return out;
}

const ConfigEdge* MapSpec::config_edge(std::string_view curve_class) const {
  for (const auto& e : config.edges)
    if (e.curve_class == curve_class) return &e;
  return nullptr;
}

const ConfigVertex* MapSpec::config_vertex(std::string_view id) const {
  for (const auto& v : config.vertices)
    if (v.id == id) return &v;
  return nullptr;
}

std::vector<ChildSlot> children_of(const MapSpec& spec, const std::string& essential_class) {
  std::vector<ChildSlot> out;
  auto it = spec.annular.find(essential_class);
  if (it == spec.annular.end()) return out;
  for (const auto& slot : it->second)
    if (const auto* c = std::get_if<ChildSlot>(&slot)) out.push_back(*c);
  return out;
}

std::optional<std::vector<CurveRef>> child_curves(const MapSpec& spec, const std::string& essential_class) {
  // Candidate curves: entries (d, γ) of pullback[β] for essential β, in entry order.
  std::map<std::pair<std::string, int>, std::vector<std::size_t>> pool;
  std::size_t total = 0;
  for (const auto& beta : spec.essential_classes) {
    auto it = spec.pullback.find(beta);
    if (it == spec.pullback.end()) continue;
    for (std::size_t i = 0; i < it->second.size(); ++i) {
      const auto& e = it->second[i];
      if (e.image_class != essential_class) continue;
      pool[{beta, e.local_degree}].push_back(i);
      ++total;
    }
  }
  std::vector<CurveRef> out;
  std::map<std::pair<std::string, int>, std::size_t> used;
  for (const auto& child : children_of(spec, essential_class)) {
    auto key = std::make_pair(child.target, child.local_degree);
    auto it = pool.find(key);
    std::size_t& k = used[key];
    if (it == pool.end() || k >= it->second.size()) return std::nullopt;
    out.push_back({child.target, it->second[k++]});
  }
  if (out.size() != total) return std::nullopt;
  return out;
}

bool Diagnostics::has_error(std::string_view needle) const {
  return std::any_of(errors.begin(), errors.end(),
                     [&](const Diagnostic& d) { return d.message.find(needle) != std::string::npos; });
}

namespace {

class Checker {
 public:
  explicit Checker(const MapSpec& spec) : s_(spec) {}

  Diagnostics run() {
    check_header();
    check_ids();
    check_pullback();
    check_annular();
    check_config();
    check_substitution();
    return std::move(d_);
  }

 private:
  void error(std::string loc, std::string msg) { d_.errors.push_back({std::move(loc), std::move(msg)}); }
  void warn(std::string loc, std::string msg) { d_.warnings.push_back({std::move(loc), std::move(msg)}); }

  void check_header() {
    if (s_.degree < 1) error("degree", "degree must be positive");
    if (s_.post_critical_count < 0) error("post_critical_count", "must be non-negative");
  }

  void check_ids() {
    std::set<std::string> seen;
    auto add = [&](const std::string& id, const std::string& loc) {
      if (id.empty()) error(loc, "empty class identifier");
      if (id == kNullClass) error(loc, "'null' is reserved for the null class");
      if (!seen.insert(id).second) error(loc, "duplicate class identifier '" + id + "'");
    };
    for (std::size_t i = 0; i < s_.essential_classes.size(); ++i)
      add(s_.essential_classes[i], "classes.essential[" + std::to_string(i) + "]");
    for (std::size_t i = 0; i < s_.peripheral_classes.size(); ++i)
      add(s_.peripheral_classes[i], "classes.peripheral[" + std::to_string(i) + "]");
    if (static_cast<int>(s_.peripheral_classes.size()) != s_.post_critical_count)
      error("classes.peripheral", "expected one peripheral class per post-critical point (" +
                                      std::to_string(s_.post_critical_count) + ")");
  }

  void check_pullback() {
    for (const auto& id : s_.universe())
      if (!s_.pullback.count(id)) error("pullback." + id, "missing pullback rule");
    for (const auto& [cls, rule] : s_.pullback) {
      std::string loc = "pullback." + cls;
      ClassKind kind = s_.kind_of(cls);
      if (kind == ClassKind::unknown) {
        error(loc, "pullback rule for unknown class '" + cls + "'");
        continue;
      }
      long sum = 0;
      for (std::size_t i = 0; i < rule.size(); ++i) {
        const auto& e = rule[i];
        std::string eloc = loc + "[" + std::to_string(i) + "]";
        sum += e.local_degree;
        if (e.local_degree < 1) error(eloc + ".degree", "local degree must be positive");
        ClassKind image = s_.kind_of(e.image_class);
        if (image == ClassKind::unknown) {
          error(eloc + ".class", "unknown image class '" + e.image_class + "'");
        } else if (kind == ClassKind::peripheral && image == ClassKind::essential) {
          error(eloc + ".class", "peripheral class pulls back to an essential class");
        } else if (kind == ClassKind::null && (image != ClassKind::null || e.local_degree != 1)) {
          error(eloc, "null must pull back to degree copies of null with local degree 1");
        }
      }
      if (sum != s_.degree)
        error(loc, "degree sum mismatch (" + std::to_string(sum) + " != " + std::to_string(s_.degree) + ")");
    }
  }

  void check_annular() {
    for (const auto& g : s_.essential_classes)
      if (!s_.annular.count(g)) error("annular." + g, "missing annular rule");
    for (const auto& [cls, rule] : s_.annular) {
      std::string loc = "annular." + cls;
      if (!s_.is_essential(cls)) {
        error(loc, "annular rule for non-essential class '" + cls + "'");
        continue;
      }
      if (rule.empty()) {
        error(loc, "annular rule needs at least one child");
        continue;
      }
      if (!std::holds_alternative<ChildSlot>(rule.front()) || !std::holds_alternative<ChildSlot>(rule.back()))
        error(loc, "first and last slots must be children (exactness)");
      for (std::size_t i = 0; i < rule.size(); ++i) {
        std::string sloc = loc + "[" + std::to_string(i) + "]";
        bool child = std::holds_alternative<ChildSlot>(rule[i]);
        if (i > 0 && child == std::holds_alternative<ChildSlot>(rule[i - 1]))
          error(sloc, "slots must alternate between children and gaps");
        if (const auto* c = std::get_if<ChildSlot>(&rule[i])) {
          if (!s_.is_essential(c->target)) error(sloc + ".target", "annular child must be essential");
          if (c->local_degree < 1) error(sloc + ".degree", "local degree must be positive");
          if (c->orientation != 1 && c->orientation != -1) error(sloc + ".orientation", "orientation must be +1 or -1");
        } else {
          const auto& g = std::get<GapSlot>(rule[i]);
          if (g.component && !s_.config_vertex(*g.component))
            error(sloc + ".gap", "gap component '" + *g.component + "' is not a level-0 vertex");
        }
      }
      if (!child_curves(s_, cls))
        error(loc, "annular children do not match the preimage curves homotopic to '" + cls + "'");
    }
  }

  void check_config() {
    const auto& cfg = s_.config;
    if (cfg.vertices.size() < 2) error("config.vertices", "level-0 configuration needs at least two vertices");
    std::set<std::string> ids;
    long marked = 0;
    for (std::size_t i = 0; i < cfg.vertices.size(); ++i) {
      const auto& v = cfg.vertices[i];
      std::string loc = "config.vertices[" + std::to_string(i) + "]";
      if (!ids.insert(v.id).second) error(loc + ".id", "duplicate vertex id '" + v.id + "'");
      if (v.marked < 0) error(loc + ".marked", "marked count must be non-negative");
      marked += v.marked;
    }
    if (marked != s_.post_critical_count)
      error("config.vertices", "marked points do not add up to post_critical_count");
    std::set<std::string> classes;
    bool refs_ok = true;
    for (std::size_t i = 0; i < cfg.edges.size(); ++i) {
      const auto& e = cfg.edges[i];
      std::string loc = "config.edges[" + std::to_string(i) + "]";
      if (!s_.is_essential(e.curve_class)) error(loc + ".class", "config edge class must be essential");
      if (!classes.insert(e.curve_class).second) error(loc + ".class", "class used by two config edges");
      if (!ids.count(e.from) || !ids.count(e.to) || e.from == e.to) {
        error(loc, "edge endpoints must be two distinct config vertices");
        refs_ok = false;
      }
    }
    if (!s_.essential_classes.empty() && s_.post_critical_count < 4)
      error("post_critical_count", "essential curve needs ≥2 points per side; at most 3 marked points admit none");
    if (!refs_ok || cfg.vertices.size() < 2 || ids.size() != cfg.vertices.size()) return;

    if (cfg.edges.size() + 1 != cfg.vertices.size() || !connected()) {
      error("config", "level-0 configuration is not a tree");
      return;
    }
    for (std::size_t i = 0; i < cfg.edges.size(); ++i) {
      int side = side_marked(i);
      int other = s_.post_critical_count - side;
      if (std::min(side, other) < 2)
        error("config.edges[" + std::to_string(i) + "]",
              "essential curve needs ≥2 points per side (class '" + cfg.edges[i].curve_class + "')");
    }
    tree_ok_ = true;
  }

  bool connected() const {
    const auto& cfg = s_.config;
    std::map<std::string, std::string> parent;
    for (const auto& v : cfg.vertices) parent[v.id] = v.id;
    std::function<std::string(const std::string&)> find = [&](const std::string& x) {
      return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (const auto& e : cfg.edges) parent[find(e.from)] = find(e.to);
    std::set<std::string> roots;
    for (const auto& v : cfg.vertices) roots.insert(find(v.id));
    return roots.size() == 1;
  }

  // Marked points on the `from` side of config edge i.
  int side_marked(std::size_t skip) const {
    const auto& cfg = s_.config;
    std::set<std::string> seen{cfg.edges[skip].from};
    std::vector<std::string> stack{cfg.edges[skip].from};
    int total = 0;
    while (!stack.empty()) {
      std::string v = stack.back();
      stack.pop_back();
      total += s_.config_vertex(v)->marked;
      for (std::size_t i = 0; i < cfg.edges.size(); ++i) {
        if (i == skip) continue;
        const auto& e = cfg.edges[i];
        for (const auto& [a, b] : {std::pair{e.from, e.to}, std::pair{e.to, e.from}})
          if (a == v && seen.insert(b).second) stack.push_back(b);
      }
    }
    return total;
  }

  void check_substitution() {
    if (s_.substitution.empty()) {
      warn("substitution", "no substitution rules; tower and census operations are unavailable");
      return;
    }
    if (!d_.errors.empty() || !tree_ok_) {
      warn("substitution", "not checked because of earlier errors");
      return;
    }
    bool refs_ok = true;
    for (const auto& v : s_.config.vertices)
      if (!s_.substitution.count(v.id)) {
        error("substitution." + v.id, "missing substitution rule for vertex '" + v.id + "'");
        refs_ok = false;
      }
    std::map<CurveRef, std::pair<int, int>> uses;  // (from-side, to-side) reference counts
    for (const auto& [vertex, pieces] : s_.substitution) {
      std::string loc = "substitution." + vertex;
      if (!s_.config_vertex(vertex)) {
        error(loc, "substitution rule for unknown vertex '" + vertex + "'");
        refs_ok = false;
        continue;
      }
      long total = 0;
      for (std::size_t i = 0; i < pieces.size(); ++i) {
        const auto& p = pieces[i];
        std::string ploc = loc + "[" + std::to_string(i) + "]";
        if (p.marked < 0) error(ploc + ".marked", "marked count must be non-negative");
        if (p.degree < 1) error(ploc + ".degree", "degree must be positive");
        total += p.degree;
        std::map<std::string, long> per_class;
        for (std::size_t k = 0; k < p.boundary.size(); ++k) {
          const auto& ref = p.boundary[k];
          std::string bloc = ploc + ".boundary[" + std::to_string(k) + "]";
          const ConfigEdge* edge = s_.config_edge(ref.curve_class);
          if (!edge) {
            error(bloc, "boundary curve class '" + ref.curve_class + "' is not a level-0 edge");
            refs_ok = false;
            continue;
          }
          if (edge->from != vertex && edge->to != vertex) {
            error(bloc, "class '" + ref.curve_class + "' does not bound vertex '" + vertex + "'");
            refs_ok = false;
            continue;
          }
          const auto& rule = s_.pullback.at(ref.curve_class);
          if (ref.entry >= rule.size()) {
            error(bloc, "entry index out of range");
            refs_ok = false;
            continue;
          }
          per_class[ref.curve_class] += rule[ref.entry].local_degree;
          auto& u = uses[ref];
          (edge->from == vertex ? u.first : u.second)++;
        }
        for (const auto& e : s_.config.edges) {
          if (e.from != vertex && e.to != vertex) continue;
          if (per_class[e.curve_class] != p.degree)
            error(ploc, "piece degree does not match its boundary over '" + e.curve_class + "'");
        }
      }
      if (total != s_.degree) error(loc, "piece degrees do not add up to the covering degree");
    }
    for (const auto& e : s_.config.edges) {
      const auto& rule = s_.pullback.at(e.curve_class);
      for (std::size_t i = 0; i < rule.size(); ++i) {
        auto u = uses[{e.curve_class, i}];
        if (u.first != 1 || u.second != 1)
          error("substitution", "preimage curve [" + e.curve_class + "," + std::to_string(i) +
                                    "] must bound exactly one piece on each side");
      }
    }
    if (!refs_ok || !d_.errors.empty()) return;
    glue_level1(s_, d_);
  }

  const MapSpec& s_;
  Diagnostics d_;
  bool tree_ok_ = false;
};

}  // namespace

Diagnostics validate(const MapSpec& spec) { return Checker(spec).run(); }

}  // namespace cantordyn
