#include "cantordyn/tree_tower.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace cantordyn {

namespace tower_detail {

struct Child {
  std::size_t parent = 0;
  std::size_t target = 0;
  std::size_t local = 0;  // position among the Γ-children of the parent
  int orientation = 1;
  int degree = 1;
};

// Γ = the level-0 edge classes; children restricted to Γ, indexed globally in
// class order then radial order (the linear-model numbering).
struct Combinatorics {
  std::vector<std::string> classes;
  std::vector<std::string> from, to;
  std::vector<Child> children;
  std::vector<std::vector<std::size_t>> by_parent;
  std::map<std::string, std::string> phi;  // complex component -> image
  std::map<std::string, int> marked;

  explicit Combinatorics(const MapSpec& spec) {
    if (!spec.has_substitution()) throw TowerError("tower operations need substitution rules");
    classes = spec.config_classes();
    for (const auto& c : classes) {
      const ConfigEdge* e = spec.config_edge(c);
      from.push_back(e->from);
      to.push_back(e->to);
    }
    by_parent.resize(classes.size());
    for (std::size_t i = 0; i < classes.size(); ++i) {
      for (const auto& slot : spec.annular.at(classes[i])) {
        const auto* c = std::get_if<ChildSlot>(&slot);
        if (!c) continue;
        auto t = std::find(classes.begin(), classes.end(), c->target);
        if (t == classes.end()) continue;
        by_parent[i].push_back(children.size());
        children.push_back({i, static_cast<std::size_t>(t - classes.begin()), by_parent[i].size() - 1,
                            c->orientation, c->local_degree});
      }
    }
    for (const auto& v : spec.config.vertices) {
      marked[v.id] = v.marked;
      for (const auto& piece : spec.substitution.at(v.id))
        if (piece.label) phi[*piece.label] = v.id;
    }
  }

  std::size_t root_of(const Word& w) const { return children.at(w.front()).parent; }
  std::size_t class_index(const std::string& id) const {
    return static_cast<std::size_t>(std::find(classes.begin(), classes.end(), id) - classes.begin());
  }
};

std::string address_text(const Word& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "." : "") + std::to_string(w[i]);
  return s;
}

struct ChainVertex {
  std::string core;  // non-empty for complex components
  std::size_t root = 0;
  Word prefix;
  std::size_t gap = 0;  // local index of the child left of the gap
};

std::string vertex_id(const Combinatorics& comb, const ChainVertex& v) {
  if (!v.core.empty()) return v.core;
  return comb.classes[v.root] + ":" + address_text(v.prefix) + "/" + std::to_string(v.gap);
}

ChainVertex tau_vertex(const Combinatorics& comb, const ChainVertex& v) {
  if (!v.core.empty()) return {comb.phi.at(v.core), 0, {}, 0};
  if (!v.prefix.empty()) {
    const Child& c = comb.children[v.prefix.front()];
    return {"", c.target, Word(v.prefix.begin() + 1, v.prefix.end()), v.gap};
  }
  // A level-1 gap lands on the component at the exit end of the child left of it.
  const Child& c = comb.children[comb.by_parent[v.root][v.gap]];
  return {c.orientation == 1 ? comb.to[c.target] : comb.from[c.target], 0, {}, 0};
}

struct Chain {
  std::vector<Word> edges;
  std::vector<ChainVertex> vertices;  // edges.size() + 1, from the `from` end
};

Chain chain(const Combinatorics& comb, std::size_t cls, unsigned n) {
  Chain out;
  out.vertices.push_back({comb.from[cls], 0, {}, 0});
  if (n == 0) {
    out.edges.push_back({});
  } else {
    const auto& kids = comb.by_parent[cls];
    for (std::size_t k = 0; k < kids.size(); ++k) {
      const Child& c = comb.children[kids[k]];
      Chain sub = chain(comb, c.target, n - 1);
      if (c.orientation == -1) {
        std::reverse(sub.edges.begin(), sub.edges.end());
        std::reverse(sub.vertices.begin(), sub.vertices.end());
      }
      for (std::size_t e = 0; e < sub.edges.size(); ++e) {
        Word w{kids[k]};
        w.insert(w.end(), sub.edges[e].begin(), sub.edges[e].end());
        out.edges.push_back(std::move(w));
        if (e + 1 < sub.edges.size()) {
          ChainVertex v = sub.vertices[e + 1];
          Word p{kids[k]};
          p.insert(p.end(), v.prefix.begin(), v.prefix.end());
          out.vertices.push_back({"", cls, std::move(p), v.gap});
        }
      }
      if (k + 1 < kids.size()) out.vertices.push_back({"", cls, {}, k});
    }
  }
  out.vertices.push_back({comb.to[cls], 0, {}, 0});
  return out;
}

}  // namespace tower_detail

using namespace tower_detail;

class TowerBuilder {
 public:
  TowerBuilder(const MapSpec& spec, const PerronMetric* metric) : spec_(spec), comb_(spec), metric_(metric) {}

  const Combinatorics& comb() const { return comb_; }

  std::pair<DualTree, std::vector<ChainVertex>> level(unsigned n) const {
    DualTree t;
    t.level = n;
    std::vector<ChainVertex> cv;
    auto add_vertex = [&](const ChainVertex& v) {
      std::string id = vertex_id(comb_, v);
      auto [it, inserted] = t.vertex_ids_.emplace(id, t.vertices.size());
      if (!inserted) return it->second;
      ChainVertex image = v;
      while (image.core.empty()) image = tau_vertex(comb_, image);
      bool core = !v.core.empty();
      t.vertices.push_back({id, image.core, core ? comb_.marked.at(v.core) : 0, core});
      cv.push_back(v);
      return t.vertices.size() - 1;
    };
    for (const auto& v : spec_.config.vertices) add_vertex({v.id, 0, {}, 0});
    for (std::size_t i = 0; i < comb_.classes.size(); ++i) {
      Chain ch = chain(comb_, i, n);
      Rational offset = 0;
      for (std::size_t e = 0; e < ch.edges.size(); ++e) {
        TreeEdge edge;
        edge.address = ch.edges[e];
        edge.curve_class = comb_.classes[i];
        edge.id = n == 0 ? edge.curve_class : edge.curve_class + ":" + address_text(edge.address);
        std::size_t covered = n == 0 ? i : comb_.children[edge.address.back()].target;
        edge.covered = comb_.classes[covered];
        for (auto c : edge.address) edge.degree *= comb_.children[c].degree;
        edge.from = add_vertex(ch.vertices[e]);
        edge.to = add_vertex(ch.vertices[e + 1]);
        edge.length = length(edge.address, i);
        edge.offset = offset;
        offset += edge.length;
        t.edge_ids_.emplace(edge.id, t.edges.size());
        t.edges.push_back(std::move(edge));
      }
    }
    return {std::move(t), std::move(cv)};
  }

  TreeMap tau(const DualTree& upper, const std::vector<ChainVertex>& cv, const DualTree& lower) const {
    TreeMap m;
    for (std::size_t i = 0; i < upper.vertices.size(); ++i) {
      std::string id = vertex_id(comb_, tau_vertex(comb_, cv[i]));
      auto idx = lower.vertex_index(id);
      if (!idx) throw TowerError("τ sends vertex " + upper.vertices[i].id + " to " + id + ", missing from T_" +
                                 std::to_string(lower.level));
      m.vertex_image.push_back(*idx);
    }
    for (const auto& e : upper.edges) {
      const Child& c = comb_.children[e.address.front()];
      Word rest(e.address.begin() + 1, e.address.end());
      std::string id = rest.empty() ? comb_.classes[c.target] : comb_.classes[c.target] + ":" + address_text(rest);
      auto idx = lower.edge_index(id);
      if (!idx) throw TowerError("τ sends edge " + e.id + " to " + id + ", missing from T_" + std::to_string(lower.level));
      m.edge_image.push_back(*idx);
    }
    return m;
  }

  Inclusion iota(const DualTree& lower, const DualTree& upper) const {
    Inclusion inc;
    for (const auto& v : lower.vertices) {
      auto idx = upper.vertex_index(v.id);
      if (!idx) throw TowerError("ι loses vertex " + v.id);
      inc.vertex_image.push_back(*idx);
    }
    std::map<Word, std::size_t> by_address;
    for (std::size_t i = 0; i < upper.edges.size(); ++i) by_address[upper.edges[i].address] = i;
    for (const auto& e : lower.edges) {
      std::size_t cls = comb_.class_index(e.curve_class);
      std::size_t last = e.address.empty() ? cls : comb_.children[e.address.back()].target;
      std::vector<std::size_t> images;
      for (auto c : comb_.by_parent[last]) {
        Word w = e.address;
        w.push_back(c);
        auto it = by_address.find(w);
        if (it == by_address.end()) throw TowerError("ι misses the extension " + address_text(w) + " of " + e.id);
        images.push_back(it->second);
      }
      std::sort(images.begin(), images.end(),
                [&](std::size_t a, std::size_t b) { return upper.edges[a].offset < upper.edges[b].offset; });
      inc.edge_image.push_back(std::move(images));
    }
    return inc;
  }

 private:
  Rational length(const Word& w, std::size_t cls) const {
    if (!metric_) return 1;
    if (w.empty()) return metric_->mv[cls];
    Rational len = metric_->v[comb_.children[w.back()].target];
    for (std::size_t k = 0; k + 1 < w.size(); ++k) {
      std::size_t t = comb_.children[w[k]].target;
      len *= metric_->v[t] / metric_->mv[t];
    }
    return len;
  }

  const MapSpec& spec_;
  Combinatorics comb_;
  const PerronMetric* metric_;
};

std::optional<std::size_t> DualTree::vertex_index(const std::string& id) const {
  auto it = vertex_ids_.find(id);
  if (it == vertex_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> DualTree::edge_index(const std::string& id) const {
  auto it = edge_ids_.find(id);
  if (it == edge_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> DualTree::edge_with_address(const Word& address) const {
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].address == address) return i;
  return std::nullopt;
}

bool DualTree::is_tree() const {
  if (edges.size() + 1 != vertices.size()) return false;
  std::vector<std::size_t> p(vertices.size());
  std::iota(p.begin(), p.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) { return p[x] == x ? x : p[x] = find(p[x]); };
  for (const auto& e : edges) {
    std::size_t a = find(e.from), b = find(e.to);
    if (a == b) return false;
    p[a] = b;
  }
  return true;
}

Rational DualTree::total_length() const {
  Rational s = 0;
  for (const auto& e : edges) s += e.length;
  return s;
}

int DualTree::total_marked() const {
  int s = 0;
  for (const auto& v : vertices) s += v.marked;
  return s;
}

namespace {

void require_tower_spec(const MapSpec& spec) {
  auto diag = validate(spec);
  if (!diag.ok()) throw TowerError("spec is not valid: " + diag.errors.front().location + ": " + diag.errors.front().message);
  if (!spec.has_substitution()) throw TowerError("tower operations need substitution rules");
}

}  // namespace

DualTree dual_tree_level0(const MapSpec& spec) {
  require_tower_spec(spec);
  return TowerBuilder(spec, nullptr).level(0).first;
}

std::pair<DualTree, TreeMap> pullback_tree(const MapSpec& spec, const DualTree& tn) {
  require_tower_spec(spec);
  TowerBuilder b(spec, nullptr);
  auto [upper, cv] = b.level(tn.level + 1);
  if (!upper.is_tree()) throw TowerError("substitution inconsistent: non-tree pullback");
  TreeMap m = b.tau(upper, cv, tn);
  return {std::move(upper), std::move(m)};
}

Inclusion inclusion(const MapSpec& spec, const DualTree& tn, const DualTree& tn1) {
  require_tower_spec(spec);
  return TowerBuilder(spec, nullptr).iota(tn, tn1);
}

PerronMetric perron_metric(const MapSpec& spec, const Multicurve& gamma) {
  auto m = reduced_matrix(spec, gamma).entries;
  PerronMetric pm;
  try {
    auto cert = perron_certificate(m);
    pm.lambda = cert.lambda;
    pm.v = cert.v;
    pm.iterations = cert.iterations;
  } catch (const MulticurveError& e) {
    throw TowerError(std::string("Γ is not Cantor: ") + e.what());
  }
  pm.mv = to_rational(m).apply(pm.v);
  pm.max_slope = 0;
  for (std::size_t i = 0; i < pm.v.size(); ++i) {
    if (!(pm.mv[i] > pm.lambda * pm.v[i])) throw std::logic_error("perron_metric: certificate does not hold");
    pm.max_slope = std::max(pm.max_slope, Rational(pm.mv[i] / pm.v[i]));
  }
  return pm;
}

namespace {

void fail(AxiomReport& r, bool& flag, const std::string& witness) {
  flag = false;
  if (r.witnesses.size() < 8) r.witnesses.push_back(witness);
}

}  // namespace

TreeTower tower_build(const MapSpec& spec, const Multicurve& gamma, unsigned depth, const TowerOptions& options) {
  require_tower_spec(spec);
  {
    auto cfg = spec.config_classes();
    std::set<std::string> a(cfg.begin(), cfg.end()), b(gamma.classes().begin(), gamma.classes().end());
    if (a != b) throw TowerError("the tower is built for Γ equal to the level-0 edge classes");
  }
  Multicurve g0 = config_multicurve(spec);
  TreeTower tower;
  tower.metric = perron_metric(spec, g0);
  TowerBuilder b(spec, &tower.metric);
  const auto& comb = b.comb();

  auto col = reduced_matrix(spec, g0).entries.column_sums();
  for (const auto& c : col) tower.tree_degree = std::max<std::size_t>(tower.tree_degree, c.get_ui());

  std::vector<std::vector<ChainVertex>> cvs;
  for (unsigned n = 0; n <= depth; ++n) {
    auto [t, cv] = b.level(n);
    if (!t.is_tree()) throw TowerError("substitution inconsistent: non-tree pullback at level " + std::to_string(n));
    tower.trees.push_back(std::move(t));
    cvs.push_back(std::move(cv));
  }
  for (unsigned n = 0; n < depth; ++n) {
    tower.tau.push_back(b.tau(tower.trees[n + 1], cvs[n + 1], tower.trees[n]));
    tower.iota.push_back(b.iota(tower.trees[n], tower.trees[n + 1]));
  }

  AxiomReport& r = tower.axioms;
  for (unsigned n = 0; n < depth; ++n) {
    const DualTree& lo = tower.trees[n];
    const DualTree& hi = tower.trees[n + 1];
    const TreeMap& tau = tower.tau[n];
    const Inclusion& iota = tower.iota[n];
    std::string at = " (n=" + std::to_string(n) + ")";

    // τ is a homeomorphism of each edge onto its image, orientation from the first child.
    for (std::size_t e = 0; e < hi.edges.size(); ++e) {
      const TreeEdge& up = hi.edges[e];
      const TreeEdge& down = lo.edges[tau.edge_image[e]];
      bool forward = comb.children[up.address.front()].orientation == 1;
      std::size_t a = tau.vertex_image[up.from], z = tau.vertex_image[up.to];
      bool ok = forward ? (a == down.from && z == down.to) : (a == down.to && z == down.from);
      if (!ok) fail(r, r.edges_homeomorphic, "τ does not carry the ends of " + up.id + " to the ends of " + down.id + at);
    }

    // (a): V_{n+1} = τ⁻¹(V_n) holds by construction of the vertex map; ι keeps vertices.
    std::set<std::size_t> vimg(iota.vertex_image.begin(), iota.vertex_image.end());
    if (vimg.size() != lo.vertices.size()) fail(r, r.inclusion_injective, "ι identifies two vertices" + at);

    std::vector<int> covered(hi.edges.size(), 0);
    for (std::size_t e = 0; e < lo.edges.size(); ++e) {
      const auto& img = iota.edge_image[e];
      Rational total = 0;
      for (auto k : img) {
        total += hi.edges[k].length;
        ++covered[k];
      }
      if (total != lo.edges[e].length) fail(r, r.inclusion_isometric, "ι is not isometric on " + lo.edges[e].id + at);
      // The image must be a path from ι(from) to ι(to).
      std::size_t here = iota.vertex_image[lo.edges[e].from];
      bool path = !img.empty();
      for (auto k : img) {
        if (hi.edges[k].from != here) path = false;
        here = hi.edges[k].to;
      }
      if (!path || here != iota.vertex_image[lo.edges[e].to])
        fail(r, r.vertices_preserved, "ι(" + lo.edges[e].id + ") is not a path between the images of its ends" + at);
    }
    for (std::size_t k = 0; k < hi.edges.size(); ++k)
      if (covered[k] > 1) fail(r, r.inclusion_injective, "edge " + hi.edges[k].id + " lies in two ι-images" + at);

    // (b): edges of T_{n+1} outside ι_n(T_n) must map outside ι_{n-1}(T_{n-1}).
    if (n >= 1) {
      std::vector<bool> old_lo(lo.edges.size(), false);
      for (const auto& img : tower.iota[n - 1].edge_image)
        for (auto k : img) old_lo[k] = true;
      for (std::size_t k = 0; k < hi.edges.size(); ++k)
        if (covered[k] == 0 && old_lo[tau.edge_image[k]])
          fail(r, r.new_edges_map_to_new, "new edge " + hi.edges[k].id + " maps into ι(T_" + std::to_string(n - 1) + ")");
    }

    // Fibres.
    std::vector<std::size_t> efib(lo.edges.size(), 0), vfib(lo.vertices.size(), 0);
    for (auto k : tau.edge_image) ++efib[k];
    for (auto k : tau.vertex_image) ++vfib[k];
    for (auto f : efib)
      if (f > static_cast<std::size_t>(spec.degree) || f > tower.tree_degree)
        fail(r, r.degree_bounded, "edge fibre of size " + std::to_string(f) + at);
    for (auto f : vfib)
      if (f > static_cast<std::size_t>(spec.degree)) fail(r, r.degree_bounded, "vertex fibre of size " + std::to_string(f) + at);
  }

  // (d): τ_{n+1} ∘ ι_{n+1} = ι_n ∘ τ_n on T_{n+1}.
  for (unsigned n = 0; n + 1 < depth; ++n) {
    const DualTree& mid = tower.trees[n + 1];
    std::string at = " (n=" + std::to_string(n) + ")";
    for (std::size_t e = 0; e < mid.edges.size(); ++e) {
      std::set<std::size_t> lhs, rhs;
      for (auto k : tower.iota[n + 1].edge_image[e]) lhs.insert(tower.tau[n + 1].edge_image[k]);
      for (auto k : tower.iota[n].edge_image[tower.tau[n].edge_image[e]]) rhs.insert(k);
      if (lhs != rhs) fail(r, r.diagram_commutes, "diagram fails on edge " + mid.edges[e].id + at);
    }
    for (std::size_t v = 0; v < mid.vertices.size(); ++v) {
      std::size_t lhs = tower.tau[n + 1].vertex_image[tower.iota[n + 1].vertex_image[v]];
      std::size_t rhs = tower.iota[n].vertex_image[tower.tau[n].vertex_image[v]];
      if (lhs != rhs) fail(r, r.diagram_commutes, "diagram fails on vertex " + mid.vertices[v].id + at);
    }
  }
  if (!r.ok()) throw TowerError("tower axiom violated: " + r.witnesses.front());

  Rational d(static_cast<long>(tower.tree_degree));
  Rational floor_cap = std::max(tower.metric.max_slope, d);
  if (options.lambda1) {
    if (!(*options.lambda1 > floor_cap) || !(*options.lambda1 > tower.metric.lambda))
      throw TowerError("slope cap λ₁ must exceed max{λ, d, slopes} = " + to_display(floor_cap));
    tower.lambda1 = *options.lambda1;
  } else {
    tower.lambda1 = floor_cap + 1;
  }
  return tower;
}

LengthBoundReport length_bound_check(const TreeTower& tower) {
  LengthBoundReport r;
  for (const auto& t : tower.trees) r.totals.push_back(t.total_length());
  Rational d(static_cast<long>(tower.tree_degree));
  const Rational& l1 = tower.lambda1;
  if (!(l1 > d)) throw TowerError("length bound needs λ₁ > d");
  r.closed_form = l1 / (l1 - d) * r.totals.front();
  for (std::size_t n = 0; n < r.totals.size(); ++n) {
    if (r.totals[n] > r.closed_form) r.closed_form_ok = false;
    if (n >= 2 && r.totals[n] > r.totals[n - 1] + d / l1 * (r.totals[n - 1] - r.totals[n - 2])) r.recursive_ok = false;
  }
  return r;
}

std::vector<EdgeBracket> coding_point(const TreeTower& tower, const Word& address) {
  std::vector<EdgeBracket> out;
  if (address.empty()) throw std::invalid_argument("coding_point: empty address");
  if (address.size() >= tower.trees.size())
    throw std::invalid_argument("coding_point: address is longer than the tower depth " +
                                std::to_string(tower.trees.size() - 1));
  for (std::size_t n = 1; n <= address.size(); ++n) {
    Word prefix(address.begin(), address.begin() + static_cast<long>(n));
    auto idx = tower.trees[n].edge_with_address(prefix);
    if (!idx) throw std::invalid_argument("coding_point: address " + address_text(prefix) + " is not an edge of T_" +
                                          std::to_string(n));
    const TreeEdge& e = tower.trees[n].edges[*idx];
    out.push_back({static_cast<unsigned>(n), e.id, e.offset, e.offset + e.length});
  }
  return out;
}

std::vector<std::string> vertex_orbit(const TreeTower& tower, const std::string& vertex_id) {
  std::size_t top = tower.trees.size() - 1;
  auto idx = tower.trees[top].vertex_index(vertex_id);
  if (!idx) throw std::invalid_argument("vertex_orbit: no vertex '" + vertex_id + "' in the top tree");
  std::vector<std::string> out{vertex_id};
  std::size_t v = *idx;
  for (std::size_t n = top; n-- > 0;) {
    v = tower.tau[n].vertex_image[v];
    out.push_back(tower.trees[n].vertices[v].id);
  }
  return out;
}

std::string to_dot(const DualTree& tree) {
  std::ostringstream os;
  os << "graph T" << tree.level << " {\n";
  for (const auto& v : tree.vertices)
    os << "  \"" << v.id << "\" [label=\"" << v.id << (v.marked ? " (" + std::to_string(v.marked) + ")" : "")
       << "\"" << (v.core ? ", shape=box" : ", shape=point") << "];\n";
  for (const auto& e : tree.edges)
    os << "  \"" << tree.vertices[e.from].id << "\" -- \"" << tree.vertices[e.to].id << "\" [label=\"" << e.id
       << "\", length=\"" << to_string(e.length) << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string metric_csv(const TreeTower& tower) {
  std::string out = "level,edge,class,covered,degree,length,offset\n";
  for (const auto& t : tower.trees)
    for (const auto& e : t.edges)
      out += std::to_string(t.level) + "," + e.id + "," + e.curve_class + "," + e.covered + "," + to_string(e.degree) +
             "," + to_string(e.length) + "," + to_string(e.offset) + "\n";
  return out;
}

}  // namespace cantordyn
