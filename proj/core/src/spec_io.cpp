#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cantordyn/spec_model.hpp"

namespace cantordyn {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

SpecError::SpecError(Kind kind, std::string location, const std::string& message)
    : std::runtime_error(location.empty() ? message : location + ": " + message),
      kind_(kind),
      location_(std::move(location)) {}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path);
  return buf.str();
}

void write_text_file_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename into " + target.string());
  }
}

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& message) {
  throw SpecError(SpecError::Kind::schema, path, message);
}

void only_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (auto k : allowed) known = known || it.key() == k;
    if (!known) schema(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
  }
}

const json& member(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) schema(path.empty() ? key : path + "." + key, "missing required key");
  return *it;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const json& object(const json& v, const std::string& path) {
  if (!v.is_object()) schema(path, "expected an object");
  return v;
}

const json& array(const json& v, const std::string& path) {
  if (!v.is_array()) schema(path, "expected an array");
  return v;
}

int integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) schema(path, "expected an integer");
  auto x = v.get<long long>();
  if (x < -(1LL << 30) || x > (1LL << 30)) schema(path, "integer out of range");
  return static_cast<int>(x);
}

std::string string(const json& v, const std::string& path) {
  if (!v.is_string()) schema(path, "expected a string");
  return v.get<std::string>();
}

std::vector<std::string> string_list(const json& v, const std::string& path) {
  array(v, path);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(string(v[i], index(path, i)));
  return out;
}

std::pair<int, int> line_col(std::string_view text, std::size_t byte) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::vector<PullbackEntry> parse_pullback_rule(const json& v, const std::string& path) {
  array(v, path);
  std::vector<PullbackEntry> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::string p = index(path, i);
    const json& e = object(v[i], p);
    only_keys(e, p, {"degree", "class", "count"});
    PullbackEntry entry;
    entry.local_degree = integer(member(e, p, "degree"), join(p, "degree"));
    entry.image_class = string(member(e, p, "class"), join(p, "class"));
    int count = 1;
    if (e.contains("count")) count = integer(e["count"], join(p, "count"));
    if (count < 1) schema(join(p, "count"), "count must be positive");
    if (entry.local_degree < 1) schema(join(p, "degree"), "local degree must be positive");
    for (int k = 0; k < count; ++k) out.push_back(entry);
  }
  return out;
}

std::vector<AnnularSlot> parse_annular_rule(const json& v, const std::string& path) {
  array(v, path);
  std::vector<AnnularSlot> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::string p = index(path, i);
    const json& e = object(v[i], p);
    if (e.contains("gap")) {
      only_keys(e, p, {"gap"});
      GapSlot gap;
      if (!e["gap"].is_null()) gap.component = string(e["gap"], join(p, "gap"));
      out.emplace_back(gap);
    } else {
      only_keys(e, p, {"target", "degree", "orientation"});
      ChildSlot child;
      child.target = string(member(e, p, "target"), join(p, "target"));
      child.local_degree = integer(member(e, p, "degree"), join(p, "degree"));
      if (e.contains("orientation")) child.orientation = integer(e["orientation"], join(p, "orientation"));
      if (child.orientation != 1 && child.orientation != -1) schema(join(p, "orientation"), "orientation must be 1 or -1");
      out.emplace_back(child);
    }
  }
  return out;
}

Level0Config parse_config(const json& v, const std::string& path) {
  object(v, path);
  only_keys(v, path, {"vertices", "edges"});
  Level0Config cfg;
  const json& verts = array(member(v, path, "vertices"), join(path, "vertices"));
  for (std::size_t i = 0; i < verts.size(); ++i) {
    std::string p = index(join(path, "vertices"), i);
    only_keys(object(verts[i], p), p, {"id", "marked"});
    cfg.vertices.push_back({string(member(verts[i], p, "id"), join(p, "id")),
                            integer(member(verts[i], p, "marked"), join(p, "marked"))});
  }
  const json& edges = array(member(v, path, "edges"), join(path, "edges"));
  for (std::size_t i = 0; i < edges.size(); ++i) {
    std::string p = index(join(path, "edges"), i);
    only_keys(object(edges[i], p), p, {"class", "from", "to"});
    cfg.edges.push_back({string(member(edges[i], p, "class"), join(p, "class")),
                         string(member(edges[i], p, "from"), join(p, "from")),
                         string(member(edges[i], p, "to"), join(p, "to"))});
  }
  return cfg;
}

std::vector<PreimagePiece> parse_pieces(const json& v, const std::string& path) {
  array(v, path);
  std::vector<PreimagePiece> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::string p = index(path, i);
    const json& e = object(v[i], p);
    only_keys(e, p, {"label", "marked", "degree", "boundary"});
    PreimagePiece piece;
    if (e.contains("label") && !e["label"].is_null()) piece.label = string(e["label"], join(p, "label"));
    piece.marked = integer(member(e, p, "marked"), join(p, "marked"));
    piece.degree = integer(member(e, p, "degree"), join(p, "degree"));
    const json& b = array(member(e, p, "boundary"), join(p, "boundary"));
    for (std::size_t k = 0; k < b.size(); ++k) {
      std::string bp = index(join(p, "boundary"), k);
      if (!b[k].is_array() || b[k].size() != 2) schema(bp, "expected [class, entry index]");
      int entry = integer(b[k][1], index(bp, 1));
      if (entry < 0) schema(index(bp, 1), "entry index must be non-negative");
      piece.boundary.push_back({string(b[k][0], index(bp, 0)), static_cast<std::size_t>(entry)});
    }
    out.push_back(std::move(piece));
  }
  return out;
}

}  // namespace

MapSpec parse_map_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string what = e.what();
    // Drop nlohmann's "[json.exception...] parse error at line x, column y: " prefix.
    if (auto colon = what.find(": "); colon != std::string::npos) what = what.substr(colon + 2);
    throw SpecError(SpecError::Kind::syntax, "line " + std::to_string(line) + ", column " + std::to_string(col),
                    "syntax error: " + what);
  }
  object(doc, "<root>");
  only_keys(doc, "", {"degree", "post_critical_count", "classes", "pullback", "annular", "config", "substitution"});

  MapSpec spec;
  spec.degree = integer(member(doc, "", "degree"), "degree");
  spec.post_critical_count = integer(member(doc, "", "post_critical_count"), "post_critical_count");
  if (spec.degree < 1) schema("degree", "degree must be positive");
  if (spec.post_critical_count < 0) schema("post_critical_count", "must be non-negative");

  const json& classes = object(member(doc, "", "classes"), "classes");
  only_keys(classes, "classes", {"essential", "peripheral"});
  spec.essential_classes = string_list(member(classes, "classes", "essential"), "classes.essential");
  spec.peripheral_classes = string_list(member(classes, "classes", "peripheral"), "classes.peripheral");

  const json& pullback = object(member(doc, "", "pullback"), "pullback");
  for (auto it = pullback.begin(); it != pullback.end(); ++it) {
    std::string p = "pullback." + it.key();
    auto rule = parse_pullback_rule(it.value(), p);
    long sum = 0;
    for (const auto& e : rule) sum += e.local_degree;
    if (sum != spec.degree)
      schema(p, "degree sum mismatch (" + std::to_string(sum) + " != " + std::to_string(spec.degree) + ")");
    spec.pullback[it.key()] = std::move(rule);
  }

  const json& annular = object(member(doc, "", "annular"), "annular");
  for (auto it = annular.begin(); it != annular.end(); ++it)
    spec.annular[it.key()] = parse_annular_rule(it.value(), "annular." + it.key());

  spec.config = parse_config(member(doc, "", "config"), "config");

  if (doc.contains("substitution")) {
    const json& sub = object(doc["substitution"], "substitution");
    for (auto it = sub.begin(); it != sub.end(); ++it)
      spec.substitution[it.key()] = parse_pieces(it.value(), "substitution." + it.key());
  }
  return spec;
}

namespace {

ordered_json pullback_json(const std::vector<PullbackEntry>& rule) {
  ordered_json arr = ordered_json::array();
  for (std::size_t i = 0; i < rule.size();) {
    std::size_t j = i;
    while (j < rule.size() && rule[j] == rule[i]) ++j;
    ordered_json e;
    e["degree"] = rule[i].local_degree;
    e["class"] = rule[i].image_class;
    if (j - i > 1) e["count"] = j - i;
    arr.push_back(std::move(e));
    i = j;
  }
  return arr;
}

ordered_json annular_json(const std::vector<AnnularSlot>& rule) {
  ordered_json arr = ordered_json::array();
  for (const auto& slot : rule) {
    ordered_json e;
    if (const auto* c = std::get_if<ChildSlot>(&slot)) {
      e["target"] = c->target;
      e["degree"] = c->local_degree;
      e["orientation"] = c->orientation;
    } else {
      const auto& g = std::get<GapSlot>(slot);
      e["gap"] = g.component ? ordered_json(*g.component) : ordered_json(nullptr);
    }
    arr.push_back(std::move(e));
  }
  return arr;
}

// Keys in the given order first, then any leftovers alphabetically.
template <class Map, class Fn>
ordered_json keyed(const Map& map, const std::vector<std::string>& order, Fn&& fn) {
  ordered_json obj = ordered_json::object();
  std::set<std::string> done;
  for (const auto& k : order) {
    auto it = map.find(k);
    if (it == map.end() || done.count(k)) continue;
    obj[k] = fn(it->second);
    done.insert(k);
  }
  for (const auto& [k, v] : map)
    if (!done.count(k)) obj[k] = fn(v);
  return obj;
}

}  // namespace

std::string serialize_map_spec(const MapSpec& spec) {
  ordered_json doc;
  doc["degree"] = spec.degree;
  doc["post_critical_count"] = spec.post_critical_count;
  doc["classes"]["essential"] = spec.essential_classes;
  doc["classes"]["peripheral"] = spec.peripheral_classes;
  doc["pullback"] = keyed(spec.pullback, spec.universe(), pullback_json);
  doc["annular"] = keyed(spec.annular, spec.essential_classes, annular_json);

  ordered_json cfg;
  cfg["vertices"] = ordered_json::array();
  for (const auto& v : spec.config.vertices) {
    ordered_json e;
    e["id"] = v.id;
    e["marked"] = v.marked;
    cfg["vertices"].push_back(std::move(e));
  }
  cfg["edges"] = ordered_json::array();
  for (const auto& ed : spec.config.edges) {
    ordered_json e;
    e["class"] = ed.curve_class;
    e["from"] = ed.from;
    e["to"] = ed.to;
    cfg["edges"].push_back(std::move(e));
  }
  doc["config"] = std::move(cfg);

  if (!spec.substitution.empty()) {
    std::vector<std::string> order;
    for (const auto& v : spec.config.vertices) order.push_back(v.id);
    doc["substitution"] = keyed(spec.substitution, order, [](const std::vector<PreimagePiece>& pieces) {
      ordered_json arr = ordered_json::array();
      for (const auto& piece : pieces) {
        ordered_json e;
        if (piece.label) e["label"] = *piece.label;
        e["marked"] = piece.marked;
        e["degree"] = piece.degree;
        e["boundary"] = ordered_json::array();
        for (const auto& b : piece.boundary) e["boundary"].push_back(ordered_json::array({b.curve_class, b.entry}));
        arr.push_back(std::move(e));
      }
      return arr;
    });
  }
  return doc.dump(2) + "\n";
}

MapSpec load_map_spec(const std::string& path) { return parse_map_spec(read_text_file(path)); }

void require_valid(const MapSpec& spec) {
  Diagnostics d = validate(spec);
  if (d.ok()) return;
  std::string msg = "invalid spec:";
  for (std::size_t i = 0; i < d.errors.size() && i < 5; ++i)
    msg += " [" + d.errors[i].location + "] " + d.errors[i].message + ";";
  throw SpecError(SpecError::Kind::invalid, d.errors.front().location, msg);
}

MapSpec load_valid_map_spec(const std::string& path) {
  MapSpec spec = load_map_spec(path);
  require_valid(spec);
  return spec;
}

}  // namespace cantordyn
