#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cantordyn {

inline constexpr std::string_view kNullClass = "null";

enum class ClassKind { essential, peripheral, null, unknown };

struct PullbackEntry {
  int local_degree = 1;
  std::string image_class;

  friend bool operator==(const PullbackEntry&, const PullbackEntry&) = default;
};

struct ChildSlot {
  std::string target;
  int local_degree = 1;
  int orientation = 1;

  friend bool operator==(const ChildSlot&, const ChildSlot&) = default;
};

// The annulus between two consecutive children; `component` optionally names
// the level-0 vertex it maps to.
struct GapSlot {
  std::optional<std::string> component;

  friend bool operator==(const GapSlot&, const GapSlot&) = default;
};

using AnnularSlot = std::variant<ChildSlot, GapSlot>;

struct ConfigVertex {
  std::string id;
  int marked = 0;

  friend bool operator==(const ConfigVertex&, const ConfigVertex&) = default;
};

struct ConfigEdge {
  std::string curve_class;
  std::string from;
  std::string to;

  friend bool operator==(const ConfigEdge&, const ConfigEdge&) = default;
};

struct Level0Config {
  std::vector<ConfigVertex> vertices;
  std::vector<ConfigEdge> edges;

  friend bool operator==(const Level0Config&, const Level0Config&) = default;
};

// A boundary curve of a preimage piece: entry `entry` of pullback[curve_class].
struct CurveRef {
  std::string curve_class;
  std::size_t entry = 0;

  friend bool operator==(const CurveRef&, const CurveRef&) = default;
  friend auto operator<=>(const CurveRef&, const CurveRef&) = default;
};

struct PreimagePiece {
  std::optional<std::string> label;
  int marked = 0;
  int degree = 1;
  std::vector<CurveRef> boundary;

  friend bool operator==(const PreimagePiece&, const PreimagePiece&) = default;
};

struct MapSpec {
  int degree = 1;
  int post_critical_count = 0;
  std::vector<std::string> essential_classes;
  std::vector<std::string> peripheral_classes;
  std::map<std::string, std::vector<PullbackEntry>> pullback;
  std::map<std::string, std::vector<AnnularSlot>> annular;
  Level0Config config;
  std::map<std::string, std::vector<PreimagePiece>> substitution;

  ClassKind kind_of(std::string_view id) const;
  bool is_essential(std::string_view id) const { return kind_of(id) == ClassKind::essential; }
  // Essential classes, then peripheral ones, then null.
  std::vector<std::string> universe() const;
  std::vector<std::string> config_classes() const;
  const ConfigEdge* config_edge(std::string_view curve_class) const;
  const ConfigVertex* config_vertex(std::string_view id) const;
  bool has_substitution() const { return !substitution.empty(); }

  friend bool operator==(const MapSpec&, const MapSpec&) = default;
};

// Children of an annular rule in radial order, without the gap slots.
std::vector<ChildSlot> children_of(const MapSpec& spec, const std::string& essential_class);

// Pairs each child of annular[γ] with the pullback entry it stands for:
// the k-th child with (target β, degree d) is the k-th entry (d, γ) of pullback[β].
// Returns nullopt if the multisets disagree.
std::optional<std::vector<CurveRef>> child_curves(const MapSpec& spec, const std::string& essential_class);

struct Diagnostic {
  std::string location;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct Diagnostics {
  std::vector<Diagnostic> errors;
  std::vector<Diagnostic> warnings;

  bool ok() const { return errors.empty(); }
  bool has_error(std::string_view needle) const;
};

Diagnostics validate(const MapSpec& spec);

class SpecError : public std::runtime_error {
 public:
  enum class Kind { syntax, schema, invalid };
  SpecError(Kind kind, std::string location, const std::string& message);

  Kind kind() const { return kind_; }
  const std::string& location() const { return location_; }

 private:
  Kind kind_;
  std::string location_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text_file(const std::string& path);
// Writes through a temporary sibling and renames, so readers never see partial files.
void write_text_file_atomic(const std::string& path, std::string_view content);

MapSpec parse_map_spec(std::string_view text);
std::string serialize_map_spec(const MapSpec& spec);

MapSpec load_map_spec(const std::string& path);

// Parses and validates; throws SpecError(invalid) listing the first errors.
MapSpec load_valid_map_spec(const std::string& path);
void require_valid(const MapSpec& spec);

}  // namespace cantordyn
