// atgen: attack-tree generation from attack sets or transition systems.
//
// Exit codes: 0 success, 1 check failure, 2 input error, 3 generation infeasible.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "atgen/expression.hpp"
#include "atgen/pipeline.hpp"
#include "atgen/render.hpp"
#include "atgen/serialization.hpp"
#include "atgen/synth.hpp"

namespace {

using namespace atgen;

constexpr int exit_ok = 0;
constexpr int exit_check_failed = 1;
constexpr int exit_input = 2;
constexpr int exit_infeasible = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  try {
    return parse_json(read_file(path));
  } catch (const parse_error& e) {
    throw parse_error(path + ": " + e.what());
  }
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw parse_error("cannot write " + out_path);
  out << text;
}

SplitStrategy parse_split(const std::string& s) { return s == "lex" ? SplitStrategy::lex : SplitStrategy::full; }

struct Options {
  std::string spec, attacks, goals, tree, out, expr, format = "text", split = "full";
  std::size_t max_depth = 3, max_paths = 10000;
  bool keep_redundant = false, prune = false, commutative = false;

  ExplorationOptions exploration() const { return {max_depth, max_paths, keep_redundant}; }
};

int cmd_paths(const Options& o) {
  const auto sys = system_from_json(read_json(o.spec));
  auto paths = enumerate_paths(sys, o.max_depth, o.max_paths);
  if (o.prune) paths = prune_redundant_paths(paths);
  std::cout << to_json(paths).dump(2) << '\n';
  return exit_ok;
}

int cmd_generate(const Options& o) {
  const SynthOptions synth{parse_split(o.split)};
  json tree;
  if (!o.spec.empty()) {
    tree = to_json(generate_from_system(system_from_json(read_json(o.spec)), o.exploration(), synth));
  } else {
    const auto rel = relation_from_json(read_json(o.goals));
    const auto s = attacks_from_json<std::string>(read_json(o.attacks));
    if (s.empty()) throw parse_error("attack file holds no attacks");
    tree = to_json(tree_generation(rel, s, synth));
  }
  write_output(tree.dump(2) + "\n", o.out);
  return exit_ok;
}

int cmd_factor(const Options& o) {
  const auto mode = o.commutative ? ProductMode::commutative : ProductMode::non_commutative;
  const auto e = parse_expression(o.expr, mode);
  std::cout << format_factorisation(exp_factorise(e, parse_split(o.split))) << '\n';
  return exit_ok;
}

template <class Label, GoalRelation R>
int check_tree(const AttackTree<Label>& t, const R& rel, const SPGraphSet<Label>& attacks) {
  bool ok = true;
  const auto sem = semantics(t);

  std::optional<std::string> sound_failure;
  for (const auto& g : sem)
    if (!attacks.contains(g)) {
      sound_failure = "unsound: the tree admits " + graph_text(g) + ", which is not an attack";
      break;
    }
  if (!sound_failure)
    for (const auto& g : attacks)
      if (!sem.contains(g)) {
        sound_failure = "unsound: the tree misses the attack " + graph_text(g);
        break;
      }
  std::cout << "semantics: " << (sound_failure ? "FAIL " + *sound_failure : std::string("PASS")) << '\n';
  ok &= !sound_failure;

  const auto correct = is_correctly_labelled(t, rel);
  if (correct) {
    std::cout << "correctly labelled: PASS\n";
  } else {
    const auto& v = correct.violations.front();
    std::cout << "correctly labelled: FAIL node '" << label_text(v.subtree.label()) << "', witness "
              << graph_text(v.witness) << " does not achieve it\n";
    std::cout << "optimally labelled: SKIPPED (requires a correctly labelled tree)\n";
    return exit_check_failed;
  }

  const auto optimal = is_optimally_labelled(t, rel);
  if (optimal) {
    std::cout << "optimally labelled: PASS\n";
  } else {
    const auto& v = optimal.violations.front();
    std::cout << "optimally labelled: FAIL node '" << label_text(v.subtree.label()) << "' misses " << v.missed
              << " attack(s), '" << label_text(v.better) << "' misses " << v.better_missed << '\n';
    ok = false;
  }
  return ok ? exit_ok : exit_check_failed;
}

int cmd_check(const Options& o) {
  const auto doc = read_json(o.tree);
  if (!o.spec.empty()) {
    const auto set = explore(system_from_json(read_json(o.spec)), o.exploration());
    return check_tree(tree_from_json<StepDelta>(doc), set.relation, set.attacks);
  }
  const auto rel = relation_from_json(read_json(o.goals));
  return check_tree(tree_from_json<std::string>(doc), rel, attacks_from_json<std::string>(read_json(o.attacks)));
}

int cmd_render(const Options& o) {
  const auto doc = read_json(o.tree);
  auto render = [&](const auto& t) { return o.format == "dot" ? to_dot(t) : to_outline(t); };
  std::cout << (has_delta_labels(doc) ? render(tree_from_json<StepDelta>(doc))
                                      : render(tree_from_json<std::string>(doc)));
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate, check and render SAND attack trees"};
  app.require_subcommand(1);
  Options o;

  auto add_bounds = [&o](CLI::App* cmd) {
    cmd->add_option("--max-depth", o.max_depth, "Longest path explored")->capture_default_str();
    cmd->add_option("--max-paths", o.max_paths, "Stop after this many paths")->capture_default_str();
  };

  auto* paths = app.add_subcommand("paths", "Enumerate breach paths of a transition system as JSON");
  paths->add_option("spec", o.spec, "System spec file")->required();
  add_bounds(paths);
  paths->add_flag("--prune", o.prune, "Drop paths whose actions contain another path's actions");

  auto* generate = app.add_subcommand("generate", "Generate an optimally labelled attack tree");
  auto* gen_spec = generate->add_option("--spec", o.spec, "System spec file");
  auto* gen_attacks = generate->add_option("--attacks", o.attacks, "Attack set file");
  auto* gen_goals = generate->add_option("--goals", o.goals, "Goal relation file");
  gen_attacks->needs(gen_goals);
  gen_goals->needs(gen_attacks);
  gen_spec->excludes(gen_attacks)->excludes(gen_goals);
  generate->add_option("--out", o.out, "Write the tree here instead of stdout");
  add_bounds(generate);
  generate->add_flag("--keep-redundant", o.keep_redundant, "Keep paths whose actions contain another path's actions");
  generate->add_option("--split-strategy", o.split, "Cube splitting for parallel sets")
      ->check(CLI::IsMember({"full", "lex"}))
      ->capture_default_str();

  auto* factor = app.add_subcommand("factor", "Factorise a sum-of-products expression");
  factor->add_option("--expr", o.expr, "Expression such as 'a.b + a.c'")->required();
  factor->add_flag("--commutative", o.commutative, "Treat '.' as commutative");
  factor->add_option("--split-strategy", o.split, "Cube splitting in commutative mode")
      ->check(CLI::IsMember({"full", "lex"}))
      ->capture_default_str();

  auto* check = app.add_subcommand("check", "Check semantics and labelling of a tree");
  check->add_option("--tree", o.tree, "Tree file")->required();
  auto* chk_spec = check->add_option("--spec", o.spec, "System spec file");
  auto* chk_attacks = check->add_option("--attacks", o.attacks, "Attack set file");
  auto* chk_goals = check->add_option("--goals", o.goals, "Goal relation file");
  chk_attacks->needs(chk_goals);
  chk_goals->needs(chk_attacks);
  chk_spec->excludes(chk_attacks)->excludes(chk_goals);
  add_bounds(check);
  check->add_flag("--keep-redundant", o.keep_redundant, "Keep paths whose actions contain another path's actions");

  auto* render = app.add_subcommand("render", "Render a tree as DOT or an indented outline");
  render->add_option("--tree", o.tree, "Tree file")->required();
  render->add_option("--format", o.format, "dot or text")->check(CLI::IsMember({"dot", "text"}))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_input;
  }

  try {
    if (*generate && o.spec.empty() && o.attacks.empty()) throw parse_error("generate needs --spec or --attacks/--goals");
    if (*check && o.spec.empty() && o.attacks.empty()) throw parse_error("check needs --spec or --attacks/--goals");
    if (*paths) return cmd_paths(o);
    if (*generate) return cmd_generate(o);
    if (*factor) return cmd_factor(o);
    if (*check) return cmd_check(o);
    return cmd_render(o);
  } catch (const no_common_goal& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_infeasible;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_input;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_input;
  }
}
