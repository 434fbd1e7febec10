// cantordyn: command-line frontend.
//
// Exit codes: 0 ok, 1 domain failure, 2 usage or I/O.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cantordyn/folding.hpp"
#include "cantordyn/linear_model.hpp"
#include "cantordyn/multicurve.hpp"
#include "cantordyn/spec_model.hpp"
#include "cantordyn/tree_tower.hpp"

namespace fs = std::filesystem;
using namespace cantordyn;

namespace {

constexpr int kOk = 0;
constexpr int kDomain = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string spec_path;
  std::string gamma;
  unsigned depth = 3;
  unsigned horizon = 40;
  std::string shrink = "4/5";
  std::string bracket_width;
  std::vector<std::string> formats;
  std::string out;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, sep);)
    if (!item.empty()) parts.push_back(item);
  return parts;
}

Rational rational_flag(const std::string& name, const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const std::exception&) {
    throw UsageError(name + ": not a rational number: " + text);
  }
}

Rational bracket_width(const RunConfig& rc) {
  if (rc.bracket_width.empty()) return default_bracket_width();
  Rational w = rational_flag("--bracket-width", rc.bracket_width);
  if (w <= 0) throw UsageError("--bracket-width must be positive");
  return w;
}

bool wants(const RunConfig& rc, const std::string& format) {
  return rc.formats.empty() || std::find(rc.formats.begin(), rc.formats.end(), format) != rc.formats.end();
}

Multicurve gamma_of(const MapSpec& spec, const RunConfig& rc) {
  if (rc.gamma.empty()) return config_multicurve(spec);
  return Multicurve(spec, split(rc.gamma, ','));
}

// With --out the artifact goes to DIR/name, otherwise to stdout.
void emit(const RunConfig& rc, const std::string& name, const std::string& content) {
  if (rc.out.empty()) {
    std::cout << content;
    return;
  }
  std::error_code ec;
  fs::create_directories(rc.out, ec);
  if (ec) throw IoError("cannot create " + rc.out + ": " + ec.message());
  write_text_file_atomic((fs::path(rc.out) / name).string(), content);
}

int cmd_validate(const RunConfig& rc) {
  MapSpec spec = load_map_spec(rc.spec_path);
  Diagnostics d = validate(spec);
  for (const auto& e : d.errors) std::cerr << "error: " << e.location << ": " << e.message << "\n";
  for (const auto& w : d.warnings) std::cerr << "warning: " << w.location << ": " << w.message << "\n";
  if (!d.ok()) return kDomain;
  std::cout << rc.spec_path << ": ok\n";
  return kOk;
}

int cmd_analyze(const RunConfig& rc) {
  MapSpec spec = load_valid_map_spec(rc.spec_path);
  Multicurve gamma = gamma_of(spec, rc);
  AnalysisReport r = analyze(spec, gamma, bracket_width(rc), rc.depth);
  if (wants(rc, "report")) emit(rc, "analysis.txt", r.summary() + "\n");
  if (!rc.formats.empty() && wants(rc, "json")) emit(rc, "analysis.json", r.to_json().dump(2) + "\n");
  if (!rc.formats.empty() && wants(rc, "csv")) emit(rc, "kappa.csv", kappa_csv(gamma, r.kappa));
  return kOk;
}

Itinerary parse_itinerary(const std::string& text) {
  if (text == "thue-morse") return thue_morse();
  auto bar = text.find('|');
  auto symbols = [](const std::string& s) {
    Word w;
    for (const auto& t : split(s, ',')) w.push_back(std::stoul(t));
    return w;
  };
  try {
    if (bar == std::string::npos) return Itinerary::finite(symbols(text));
    return Itinerary::eventually_periodic(symbols(text.substr(0, bar)), symbols(text.substr(bar + 1)));
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--itinerary: ") + e.what());
  }
}

int cmd_simulate(const RunConfig& rc, const std::string& itinerary, unsigned window) {
  MapSpec spec = load_valid_map_spec(rc.spec_path);
  Multicurve gamma = gamma_of(spec, rc);
  LinearModelParams params;
  params.shrink = rational_flag("--shrink", rc.shrink);
  IntervalSystem sys = from_annular_rules(spec, gamma, params);

  std::vector<RefinementLevel> levels;
  for (unsigned k = 0; k <= rc.depth; ++k) levels.push_back(refine(sys, k));
  if (wants(rc, "csv")) emit(rc, "refinement.csv", refinement_csv({levels.back()}));
  if (!rc.formats.empty() && wants(rc, "svg")) emit(rc, "refinement.svg", refinement_svg(sys, levels));

  if (wants(rc, "report")) {
    std::string text;
    ExpansionReport ex = expansion_report(sys, rc.horizon);
    text += "l1 = " + to_display(ex.l1) + "\n";
    text += ex.first_k ? "expansion: L_" + std::to_string(*ex.first_k) + " = " +
                             to_display(ex.L[*ex.first_k - 1]) + " < l1\n"
                       : "expansion: none within horizon " + std::to_string(rc.horizon) + "\n";
    if (!itinerary.empty()) {
      Itinerary it = parse_itinerary(itinerary);
      text += "itinerary: " + to_string(classify(it)) + "\n";
      if (it.cycle() || it.has_generator()) {
        auto omega = omega_limit_approx(sys, it, 4096, window);
        text += "omega depth " + std::to_string(window) + ": " + std::to_string(omega.size()) + " addresses\n";
        for (const auto& w : omega) {
          std::string a;
          for (std::size_t i = 0; i < w.size(); ++i) a += (i ? "." : "") + std::to_string(w[i]);
          text += "  " + a + "\n";
        }
      }
    }
    emit(rc, "simulate.txt", text);
  }
  return kOk;
}

int cmd_tower(const RunConfig& rc, const std::string& lambda1) {
  MapSpec spec = load_valid_map_spec(rc.spec_path);
  Multicurve gamma = gamma_of(spec, rc);
  TowerOptions options;
  if (!lambda1.empty()) options.lambda1 = rational_flag("--lambda1", lambda1);
  TreeTower tower = tower_build(spec, gamma, rc.depth, options);

  if (wants(rc, "dot"))
    for (std::size_t n = 0; n < tower.trees.size(); ++n) emit(rc, "tree_" + std::to_string(n) + ".dot", to_dot(tower.trees[n]));
  if (wants(rc, "csv")) emit(rc, "metric.csv", metric_csv(tower));
  if (wants(rc, "report")) {
    LengthBoundReport lb = length_bound_check(tower);
    std::string text = "lambda = " + to_display(tower.metric.lambda) + ", lambda1 = " + to_display(tower.lambda1) +
                       ", tree degree = " + std::to_string(tower.tree_degree) + "\n";
    for (std::size_t n = 0; n < tower.trees.size(); ++n)
      text += "T" + std::to_string(n) + ": " + std::to_string(tower.trees[n].edges.size()) + " edges, length " +
              to_display(lb.totals[n]) + "\n";
    text += "length bound " + to_display(lb.closed_form) + (lb.ok() ? " holds" : " FAILS") + "\n";
    text += decomposition_census(spec, gamma, rc.depth).to_text();
    emit(rc, "census.txt", text);
    if (!lb.ok()) return kDomain;
  }
  return kOk;
}

struct PlanArgs {
  bool apply1 = false, apply1_pair = false, apply2 = false, apply2_pair = false;
  int deg_g = 2;
  int deg_g2 = 0;
  int degree = 0;
  int post_critical = 8;
  int inner = 3;
};

int cmd_folding_plan(const RunConfig& rc, const PlanArgs& a) {
  int chosen = a.apply1 + a.apply1_pair + a.apply2 + a.apply2_pair;
  if (chosen != 1) throw UsageError("choose exactly one of --apply1, --apply1-pair, --apply2, --apply2-pair");
  RecipeInput in;
  in.recipe = a.apply1 ? Recipe::apply1 : a.apply1_pair ? Recipe::apply1_pair : a.apply2 ? Recipe::apply2 : Recipe::apply2_pair;
  in.deg_g1 = a.deg_g;
  in.deg_g2 = a.deg_g2;
  in.degree = a.degree;
  in.post_critical_count = a.post_critical;
  in.inner_marked = a.inner;
  FoldingPlan plan = plan_from_recipe(in);
  if (rc.out.empty()) {
    std::cout << serialize_plan(plan);
  } else {
    write_text_file_atomic(rc.out, serialize_plan(plan));
  }
  return kOk;
}

// The obstruction search runs on the emitted spec unless a richer spec with
// more candidate classes is supplied.
int cmd_folding_check(const std::string& plan_path, const std::string& spec_path, bool require_no_obstruction) {
  FoldingPlan plan = load_plan(plan_path);
  std::cout << check_thm_no1(plan).to_text();
  if (plan.witness) std::cout << check_thm_no2(plan).to_text();
  MapSpec spec = spec_path.empty() ? emit_map_spec(plan) : load_valid_map_spec(spec_path);
  Certificate found = find_obstruction(spec);
  std::cout << found.to_text();
  return require_no_obstruction && found.accepted ? kDomain : kOk;
}

int cmd_folding_emit(const std::string& plan_path, const std::string& out) {
  MapSpec spec = emit_map_spec(load_plan(plan_path));
  require_valid(spec);
  if (out.empty()) {
    std::cout << serialize_map_spec(spec);
  } else {
    write_text_file_atomic(out, serialize_map_spec(spec));
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cantordyn: multicurves, linear models, dual-tree towers and folding plans"};
  app.require_subcommand(1);
  RunConfig rc;

  auto add_common = [&](CLI::App* sub, bool with_gamma) {
    sub->add_option("spec", rc.spec_path, "map-spec file")->required();
    if (with_gamma) sub->add_option("--gamma", rc.gamma, "comma-separated classes (default: level-0 edges)");
    sub->add_option("--out", rc.out, "output directory (default: stdout)");
    sub->add_option("--format", rc.formats, "csv, svg, dot, report, json")->delimiter(',');
  };

  auto* validate_cmd = app.add_subcommand("validate", "check a map spec");
  validate_cmd->add_option("spec", rc.spec_path, "map-spec file")->required();

  auto* analyze_cmd = app.add_subcommand("analyze", "transition matrices, eigenvalues, obstruction flags");
  add_common(analyze_cmd, true);
  analyze_cmd->add_option("--depth", rc.depth, "kappa table depth")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--bracket-width", rc.bracket_width, "eigenvalue bracket width (rational)");

  std::string itinerary;
  unsigned window = 3;
  auto* simulate_cmd = app.add_subcommand("simulate", "refine the linear interval model");
  add_common(simulate_cmd, true);
  simulate_cmd->add_option("--depth", rc.depth, "refinement depth");
  simulate_cmd->add_option("--horizon", rc.horizon, "expansion search horizon")->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--shrink", rc.shrink, "shrink factor s in (0,1)");
  simulate_cmd->add_option("--itinerary", itinerary, "thue-morse, HEAD|CYCLE or a finite word, symbols comma-separated");
  simulate_cmd->add_option("--window", window, "address depth for the omega report")->check(CLI::PositiveNumber);

  std::string lambda1;
  auto* tower_cmd = app.add_subcommand("tower", "build the dual-tree tower and the decomposition census");
  add_common(tower_cmd, true);
  tower_cmd->add_option("--depth", rc.depth, "number of pullback levels");
  tower_cmd->add_option("--lambda1", lambda1, "slope cap on new edges (rational)");

  auto* folding_cmd = app.add_subcommand("folding", "folding-surgery plans");
  folding_cmd->require_subcommand(1);
  PlanArgs plan_args;
  auto* plan_cmd = folding_cmd->add_subcommand("plan", "degree plan from a recipe");
  plan_cmd->add_flag("--apply1", plan_args.apply1);
  plan_cmd->add_flag("--apply1-pair", plan_args.apply1_pair);
  plan_cmd->add_flag("--apply2", plan_args.apply2);
  plan_cmd->add_flag("--apply2-pair", plan_args.apply2_pair);
  plan_cmd->add_option("--deg-g", plan_args.deg_g, "degree of g (or g1)")->check(CLI::Range(2, 1000));
  plan_cmd->add_option("--deg-g2", plan_args.deg_g2, "degree of g2 for pair recipes");
  plan_cmd->add_option("--degree", plan_args.degree, "total degree d (default: the recipe bound)");
  plan_cmd->add_option("--post-critical", plan_args.post_critical, "number of marked points");
  plan_cmd->add_option("--inner", plan_args.inner, "marked points inside beta");
  plan_cmd->add_option("--out", rc.out, "plan file (default: stdout)");

  std::string plan_path, emit_out;
  bool require_no_obstruction = false;
  auto* check_cmd = folding_cmd->add_subcommand("check", "no-obstruction certificates for a plan");
  check_cmd->add_option("plan", plan_path, "plan file")->required();
  check_cmd->add_option("--spec", rc.spec_path, "search this spec for obstructions instead of the emitted one");
  check_cmd->add_flag("--require-no-obstruction", require_no_obstruction, "exit 1 if an obstruction is found");
  auto* emit_cmd = folding_cmd->add_subcommand("emit", "write the map spec of a plan");
  emit_cmd->add_option("plan", plan_path, "plan file")->required();
  emit_cmd->add_option("--out", emit_out, "spec file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate_cmd) return cmd_validate(rc);
    if (*analyze_cmd) return cmd_analyze(rc);
    if (*simulate_cmd) return cmd_simulate(rc, itinerary, window);
    if (*tower_cmd) return cmd_tower(rc, lambda1);
    if (*plan_cmd) return cmd_folding_plan(rc, plan_args);
    if (*check_cmd) return cmd_folding_check(plan_path, rc.spec_path, require_no_obstruction);
    if (*emit_cmd) return cmd_folding_emit(plan_path, emit_out);
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "io: " << e.what() << "\n";
    return kUsage;
  } catch (const SpecError& e) {
    std::cerr << "spec: " << e.what() << "\n";
    return e.kind() == SpecError::Kind::invalid ? kDomain : kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomain;
  }
  return kUsage;
}
