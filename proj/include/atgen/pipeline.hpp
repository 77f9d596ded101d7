#pragma once

// Transition system to attack tree: enumerate breach paths, turn them into SP
// graphs, and generate over the delta goal relation.

#include <cstddef>
#include <optional>
#include <vector>

#include "atgen/error.hpp"
#include "atgen/kripke.hpp"
#include "atgen/synth.hpp"

namespace atgen {

struct ExplorationOptions {
  std::size_t max_depth = 3;
  std::size_t max_paths = 10000;
  bool keep_redundant = false;  // keep paths whose actions contain another path's actions
};

struct LtsAttackSet {
  std::vector<Path> paths;
  LtsRelation relation;
  LtsGraphSet attacks;  // one graph per path with at least one step
};

inline LtsAttackSet explore(const KripkeSystem& sys, const ExplorationOptions& opts = {}) {
  auto paths = enumerate_paths(sys, opts.max_depth, opts.max_paths);
  if (!opts.keep_redundant) paths = prune_redundant_paths(paths);
  std::erase_if(paths, [](const Path& p) { return p.steps.empty(); });
  if (paths.empty()) throw no_common_goal("no attack path reaches the breach condition within the bounds");

  LtsGraphSet attacks;
  for (const auto& p : paths) attacks.insert(path_to_spgraph(p));
  auto relation = lts_goal_relation(paths);
  return {std::move(paths), std::move(relation), std::move(attacks)};
}

inline AttackTree<StepDelta> generate_from_system(const KripkeSystem& sys, const ExplorationOptions& opts = {},
                                                   const SynthOptions& synth = {}) {
  const auto set = explore(sys, opts);
  return tree_generation(set.relation, set.attacks, synth);
}

}  // namespace atgen
