#include <algorithm>
#include <set>

#include "cantordyn/gluing.hpp"
#include "cantordyn/tree_tower.hpp"

namespace cantordyn {

bool CensusReport::complex_count_constant(std::size_t expected) const {
  return std::all_of(depths.begin(), depths.end(),
                     [&](const CensusDepth& d) { return d.complex_components.size() == expected; });
}

std::string CensusReport::to_text() const {
  std::string out;
  for (const auto& d : depths) {
    out += "depth " + std::to_string(d.depth) + ": complex=" + std::to_string(d.complex_components.size()) + " [";
    for (std::size_t i = 0; i < d.complex_components.size(); ++i) out += (i ? "," : "") + d.complex_components[i];
    out += "] disk=" + to_string(d.disk) + " annular=" + to_string(d.annular) + " trivial=" + to_string(d.trivial) +
           "\n";
  }
  for (const auto& p : complex_dynamics)
    out += p.component + " -> " + return_map.at(p.component) + ": pre-period " + std::to_string(p.preperiod) +
           ", period " + std::to_string(p.period) + "\n";
  return out;
}

CensusReport decomposition_census(const MapSpec& spec, const Multicurve& gamma, unsigned depth) {
  Diagnostics diag = validate(spec);
  if (!diag.ok()) throw TowerError("spec is not valid: " + diag.errors.front().message);
  if (!spec.has_substitution()) throw TowerError("census needs substitution rules");
  {
    auto cfg = spec.config_classes();
    std::set<std::string> a(cfg.begin(), cfg.end()), b(gamma.classes().begin(), gamma.classes().end());
    if (a != b) throw TowerError("census is taken for Γ equal to the level-0 edge classes");
  }
  if (!is_stable(spec, gamma)) throw TowerError("census needs a stable Γ");
  Diagnostics scratch;
  Level1Gluing g = glue_level1(spec, scratch);

  // Components of the complement of Γ_n, simple ones counted by kind and class.
  std::map<std::string, BigInt> disk, annular;
  std::vector<std::string> complex;
  BigInt trivial = 0;
  for (const auto& v : spec.config.vertices) complex.push_back(v.id);

  CensusReport report;
  auto record = [&](unsigned n) {
    CensusDepth d;
    d.depth = n;
    d.complex_components = complex;
    for (const auto& [cls, k] : disk) d.disk += k;
    for (const auto& [cls, k] : annular) {
      d.annular += k;
      if (gamma.contains(cls)) d.annular_gamma += k;
    }
    d.trivial = trivial;
    report.depths.push_back(std::move(d));
  };
  record(0);

  for (unsigned n = 1; n <= depth; ++n) {
    std::map<std::string, BigInt> next_disk, next_annular;
    std::vector<std::string> next_complex;
    // Trivial components have no critical values inside, so each has `degree` preimages.
    BigInt next_trivial = trivial * spec.degree;
    for (const auto& x : complex)
      for (const auto& p : g.pieces) {
        if (p.source != x) continue;
        switch (p.kind) {
          case PieceKind::complex: next_complex.push_back(*p.piece.label); break;
          case PieceKind::disk: next_disk[p.core_class] += 1; break;
          case PieceKind::annular: next_annular[p.core_class] += 1; break;
          case PieceKind::trivial: next_trivial += 1; break;
        }
      }
    for (const auto& [cls, k] : disk)
      for (const auto& e : spec.pullback.at(cls)) {
        if (spec.kind_of(e.image_class) == ClassKind::peripheral) {
          next_disk[e.image_class] += k;
        } else {
          next_trivial += k;
        }
      }
    for (const auto& [cls, k] : annular)
      for (const auto& e : spec.pullback.at(cls)) {
        if (e.image_class == kNullClass) {
          next_trivial += k;
        } else {
          next_annular[e.image_class] += k;
        }
      }
    std::sort(next_complex.begin(), next_complex.end(), [&](const std::string& a, const std::string& b) {
      auto pos = [&](const std::string& id) {
        for (std::size_t i = 0; i < spec.config.vertices.size(); ++i)
          if (spec.config.vertices[i].id == id) return i;
        return spec.config.vertices.size();
      };
      return pos(a) < pos(b);
    });
    complex = std::move(next_complex);
    disk = std::move(next_disk);
    annular = std::move(next_annular);
    trivial = std::move(next_trivial);
    record(n);
  }

  for (const auto& p : g.pieces)
    if (p.kind == PieceKind::complex) report.return_map[*p.piece.label] = p.source;
  for (const auto& v : spec.config.vertices) {
    std::vector<std::string> orbit{v.id};
    for (;;) {
      std::string next = report.return_map.at(orbit.back());
      auto it = std::find(orbit.begin(), orbit.end(), next);
      if (it != orbit.end()) {
        auto pre = static_cast<unsigned>(it - orbit.begin());
        report.complex_dynamics.push_back({v.id, pre, static_cast<unsigned>(orbit.size()) - pre});
        break;
      }
      orbit.push_back(next);
    }
  }
  return report;
}

}  // namespace cantordyn
