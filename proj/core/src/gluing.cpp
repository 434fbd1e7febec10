#include "cantordyn/gluing.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace cantordyn {

std::string to_string(PieceKind kind) {
  switch (kind) {
    case PieceKind::complex: return "complex";
    case PieceKind::disk: return "disk";
    case PieceKind::annular: return "annular";
    case PieceKind::trivial: return "trivial";
  }
  return "?";
}

PieceKind classify_piece(int k, int c) {
  if (k >= 2) return PieceKind::complex;
  if (k == 1) return c <= 1 ? PieceKind::disk : PieceKind::complex;
  if (c <= 1) return PieceKind::trivial;
  return c == 2 ? PieceKind::annular : PieceKind::complex;
}

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : p_(n) { std::iota(p_.begin(), p_.end(), 0); }
  std::size_t find(std::size_t x) { return p_[x] == x ? x : p_[x] = find(p_[x]); }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    p_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> p_;
};

std::string ref_text(const CurveRef& r) { return "[" + r.curve_class + "," + std::to_string(r.entry) + "]"; }

}  // namespace

std::size_t Level1Gluing::find_curve(const CurveRef& ref) const {
  for (std::size_t i = 0; i < curves.size(); ++i)
    if (curves[i].ref == ref) return i;
  return curves.size();
}

std::vector<std::size_t> Level1Gluing::contracted_groups() const {
  UnionFind uf(pieces.size());
  for (const auto& c : curves)
    if (!c.in_gamma) uf.unite(c.from_piece, c.to_piece);
  std::vector<std::size_t> group(pieces.size());
  for (std::size_t i = 0; i < pieces.size(); ++i) group[i] = uf.find(i);
  return group;
}

Level1Gluing glue_level1(const MapSpec& spec, Diagnostics& diag) {
  auto error = [&](std::string loc, std::string msg) { diag.errors.push_back({std::move(loc), std::move(msg)}); };
  Level1Gluing g;
  std::map<CurveRef, std::pair<std::size_t, std::size_t>> ends;
  for (const auto& v : spec.config.vertices) {
    const auto& pieces = spec.substitution.at(v.id);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      std::size_t idx = g.pieces.size();
      g.pieces.push_back({v.id, i, pieces[i], PieceKind::trivial, 0, {}});
      for (const auto& ref : pieces[i].boundary) {
        const ConfigEdge* e = spec.config_edge(ref.curve_class);
        (e->from == v.id ? ends[ref].first : ends[ref].second) = idx;
      }
    }
  }
  std::set<std::string> gamma;
  for (const auto& e : spec.config.edges) gamma.insert(e.curve_class);
  for (const auto& e : spec.config.edges) {
    const auto& rule = spec.pullback.at(e.curve_class);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      CurveRef ref{e.curve_class, i};
      GluedCurve c;
      c.ref = ref;
      c.image_class = rule[i].image_class;
      c.local_degree = rule[i].local_degree;
      c.from_piece = ends[ref].first;
      c.to_piece = ends[ref].second;
      c.in_gamma = gamma.count(c.image_class) > 0;
      g.curves.push_back(c);
    }
  }

  UnionFind uf(g.pieces.size());
  bool tree = g.curves.size() + 1 == g.pieces.size();
  for (const auto& c : g.curves) tree = uf.unite(c.from_piece, c.to_piece) && tree;
  if (!tree) {
    error("substitution", "substitution inconsistent: non-tree pullback");
    return g;
  }

  // Adjacency for side sums.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(g.pieces.size());
  for (std::size_t i = 0; i < g.curves.size(); ++i) {
    adj[g.curves[i].from_piece].push_back({g.curves[i].to_piece, i});
    adj[g.curves[i].to_piece].push_back({g.curves[i].from_piece, i});
  }
  auto side_sum = [&](std::size_t start, std::size_t skip_curve) {
    int total = 0;
    std::vector<bool> seen(g.pieces.size(), false);
    std::vector<std::size_t> stack{start};
    seen[start] = true;
    while (!stack.empty()) {
      std::size_t p = stack.back();
      stack.pop_back();
      total += g.pieces[p].piece.marked;
      for (auto [q, ci] : adj[p])
        if (ci != skip_curve && !seen[q]) {
          seen[q] = true;
          stack.push_back(q);
        }
    }
    return total;
  };

  int total_marked = 0;
  for (const auto& p : g.pieces) total_marked += p.piece.marked;
  if (total_marked != spec.post_critical_count)
    error("substitution", "piece marked counts do not add up to post_critical_count");

  std::map<std::string, std::pair<int, int>> config_split;
  for (const auto& e : spec.config.edges) {
    // Marked points on the from side of each level-0 edge.
    std::set<std::string> seen{e.from};
    std::vector<std::string> stack{e.from};
    int side = 0;
    while (!stack.empty()) {
      std::string v = stack.back();
      stack.pop_back();
      side += spec.config_vertex(v)->marked;
      for (const auto& f : spec.config.edges) {
        if (f.curve_class == e.curve_class) continue;
        if (f.from == v && seen.insert(f.to).second) stack.push_back(f.to);
        if (f.to == v && seen.insert(f.from).second) stack.push_back(f.from);
      }
    }
    config_split[e.curve_class] = {side, spec.post_critical_count - side};
  }

  for (std::size_t i = 0; i < g.curves.size(); ++i) {
    auto& c = g.curves[i];
    c.marked_from_side = side_sum(c.from_piece, i);
    c.marked_to_side = side_sum(c.to_piece, i);
    int low = std::min(c.marked_from_side, c.marked_to_side);
    ClassKind seen_kind = low == 0 ? ClassKind::null : low == 1 ? ClassKind::peripheral : ClassKind::essential;
    ClassKind declared = spec.kind_of(c.image_class);
    std::string loc = "substitution" + ref_text(c.ref);
    if (seen_kind != declared) {
      error(loc, "curve separates " + std::to_string(c.marked_from_side) + "|" + std::to_string(c.marked_to_side) +
                     " marked points, which contradicts its class '" + c.image_class + "'");
      continue;
    }
    if (auto it = config_split.find(c.image_class); it != config_split.end()) {
      auto [a, b] = it->second;
      bool same = (a == c.marked_from_side && b == c.marked_to_side) || (b == c.marked_from_side && a == c.marked_to_side);
      if (!same) error(loc, "curve does not split the marked points like its class '" + c.image_class + "'");
    }
  }

  std::map<std::string, std::size_t> labels;
  for (std::size_t i = 0; i < g.pieces.size(); ++i) {
    auto& gp = g.pieces[i];
    std::vector<std::size_t> marked_curves;
    for (auto [q, ci] : adj[i]) {
      const auto& c = g.curves[ci];
      int far = c.from_piece == i ? c.marked_to_side : c.marked_from_side;
      if (far > 0) marked_curves.push_back(ci);
    }
    gp.marked_components = static_cast<int>(marked_curves.size());
    gp.kind = classify_piece(gp.piece.marked, gp.marked_components);
    std::string loc = "substitution." + gp.source + "[" + std::to_string(gp.index) + "]";
    if (gp.kind == PieceKind::disk && marked_curves.size() == 1) {
      gp.core_class = g.curves[marked_curves[0]].image_class;
    } else if (gp.kind == PieceKind::annular) {
      const auto& a = g.curves[marked_curves[0]].image_class;
      const auto& b = g.curves[marked_curves[1]].image_class;
      if (a != b) error(loc, "annular piece is bounded by curves of different classes '" + a + "' and '" + b + "'");
      gp.core_class = a;
    }
    if (gp.kind == PieceKind::complex) {
      if (!gp.piece.label) {
        error(loc, "complex piece must carry a label");
      } else if (!spec.config_vertex(*gp.piece.label)) {
        error(loc, "label '" + *gp.piece.label + "' is not a level-0 vertex");
      } else if (!labels.emplace(*gp.piece.label, i).second) {
        error(loc, "label '" + *gp.piece.label + "' used by two complex pieces");
      }
    } else if (gp.piece.label) {
      error(loc, "labelled piece is " + to_string(gp.kind) + ", not complex");
    }
  }
  if (!diag.errors.empty()) return g;
  if (labels.size() != spec.config.vertices.size())
    error("substitution", "complex pieces must correspond one-to-one to level-0 vertices");
  if (!diag.errors.empty()) return g;

  // Contract curves outside Γ and compare the result with the annular rules.
  auto group = g.contracted_groups();
  std::map<std::size_t, std::string> core_of_group;
  for (const auto& [label, piece] : labels)
    if (!core_of_group.emplace(group[piece], label).second)
      error("substitution", "complex pieces '" + core_of_group[group[piece]] + "' and '" + label +
                                "' fall into one level-1 vertex");
  if (!diag.errors.empty()) return g;

  std::map<std::size_t, std::string> image_of_group;
  auto end_image = [&](std::size_t grp, const std::string& image, const std::string& loc) {
    auto [it, inserted] = image_of_group.emplace(grp, image);
    if (!inserted && it->second != image)
      error(loc, "level-1 vertex maps to both '" + it->second + "' and '" + image + "'");
  };

  for (const auto& edge : spec.config.edges) {
    const std::string& gam = edge.curve_class;
    std::string loc = "annular." + gam;
    auto refs = child_curves(spec, gam);
    auto kids = children_of(spec, gam);
    std::size_t here = group[labels.at(edge.from)];
    std::size_t kept = 0;
    for (std::size_t k = 0; k < kids.size(); ++k) {
      if (!gamma.count(kids[k].target)) continue;
      const auto& c = g.curves[g.find_curve((*refs)[k])];
      const ConfigEdge* target = spec.config_edge(kids[k].target);
      bool forward = kids[k].orientation == 1;
      std::size_t enter_piece = forward ? c.from_piece : c.to_piece;
      std::size_t exit_piece = forward ? c.to_piece : c.from_piece;
      std::string kloc = loc + " child " + std::to_string(k);
      if (group[enter_piece] != here) {
        error(kloc, "annular rule order or orientation disagrees with the glued level-1 tree");
        return g;
      }
      if (kept > 0 && core_of_group.count(here))
        error(kloc, "gap before this child is a complex component");
      end_image(group[enter_piece], forward ? target->from : target->to, kloc);
      end_image(group[exit_piece], forward ? target->to : target->from, kloc);
      here = group[exit_piece];
      ++kept;
    }
    if (kept == 0 || here != group[labels.at(edge.to)])
      error(loc, "children do not connect the two sides of '" + gam + "' in the glued level-1 tree");
  }
  for (const auto& [grp, label] : core_of_group) {
    auto it = image_of_group.find(grp);
    const std::string& source = g.pieces[labels.at(label)].source;
    if (it != image_of_group.end() && it->second != source)
      error("substitution", "complex piece '" + label + "' lies over '" + source + "' but its curves map to '" +
                                it->second + "'");
  }
  // Gap slots that name their image must agree with the tree.
  for (const auto& edge : spec.config.edges) {
    const auto& rule = spec.annular.at(edge.curve_class);
    for (std::size_t s = 1; s < rule.size(); ++s) {
      if (std::holds_alternative<ChildSlot>(rule[s])) continue;
      const auto& gap = std::get<GapSlot>(rule[s]);
      if (!gap.component) continue;
      const auto& prev = std::get<ChildSlot>(rule[s - 1]);
      const ConfigEdge* t = spec.config_edge(prev.target);
      if (!t) continue;
      const std::string& image = prev.orientation == 1 ? t->to : t->from;
      if (image != *gap.component)
        error("annular." + edge.curve_class + "[" + std::to_string(s) + "]",
              "gap maps to '" + image + "', not '" + *gap.component + "'");
    }
  }
  return g;
}

}  // namespace cantordyn
