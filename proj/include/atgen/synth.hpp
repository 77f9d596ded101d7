#pragma once

// Attack-tree generation: homogeneous partitioning, factorisation of
// homogeneous sets through the sum-of-products encoding, and single-graph
// tree construction.

#include <cstddef>
#include <utility>
#include <vector>

#include "atgen/attack_tree.hpp"
#include "atgen/error.hpp"
#include "atgen/factor.hpp"
#include "atgen/goals.hpp"
#include "atgen/sp_graph.hpp"

namespace atgen {

struct SynthOptions {
  SplitStrategy split = SplitStrategy::full;
};

template <class Label>
using Partition = std::vector<SPGraphSet<Label>>;

/// Greedy partition into homogeneous blocks with a common goal. Each block
/// starts from the smallest remaining graph and absorbs, in canonical order,
/// every graph that keeps it homogeneous and goal-compatible.
template <GoalRelation R>
Partition<typename R::label_type> partition(const R& rel, const SPGraphSet<typename R::label_type>& s) {
  using Label = typename R::label_type;
  if (s.empty()) throw error("empty attack set");

  Partition<Label> blocks;
  auto remaining = s;
  while (!remaining.empty()) {
    SPGraphSet<Label> block;
    for (const auto& g : remaining) {
      auto candidate = block;
      candidate.insert(g);
      if (is_homogeneous(candidate) && has_common_goal(rel, candidate)) block = std::move(candidate);
    }
    if (block.empty()) throw no_common_goal("an attack satisfies no goal");
    for (const auto& g : block) remaining.erase(g);
    blocks.push_back(std::move(block));
  }
  return blocks;
}

/// Tree with semantics {g}: a leaf for a simple graph, otherwise AND/SAND over
/// the maximal factors of g.
template <GoalRelation R>
AttackTree<typename R::label_type> build_tree(const R& rel, const SPGraph<typename R::label_type>& g) {
  using Label = typename R::label_type;
  // A leaf denotes the edge carrying its own label, so the label is fixed.
  if (g.is_simple()) return AttackTree<Label>::leaf(g.label());

  auto b = find_optimal_label(rel, SPGraphSet<Label>{g});
  std::vector<AttackTree<Label>> children;
  for (const auto& f : decompose(g).factors) children.push_back(build_tree(rel, f));
  return AttackTree<Label>::node(std::move(b), g.kind() == Composition::parallel ? Op::AND : Op::SAND,
                                 std::move(children));
}

/// b ▷ OR(build_tree(g) for g in s); the baseline the generator must not exceed.
template <GoalRelation R>
AttackTree<typename R::label_type> flat_tree(const R& rel, const SPGraphSet<typename R::label_type>& s) {
  using Label = typename R::label_type;
  std::vector<AttackTree<Label>> children;
  for (const auto& g : s) children.push_back(build_tree(rel, g));
  return AttackTree<Label>::node(find_optimal_label(rel, s), Op::OR, std::move(children));
}

template <GoalRelation R>
AttackTree<typename R::label_type> tree_generation(const R& rel, const SPGraphSet<typename R::label_type>& s,
                                                   const SynthOptions& opts = {});

namespace detail {

template <class Label>
SPGraphSet<Label> graphs_of(Composition kind, const SopExpression<SPGraph<Label>>& e) {
  SPGraphSet<Label> out;
  for (const auto& cube : e.cubes()) out.insert(SPGraph<Label>::compose(kind, cube));
  return out;
}

}  // namespace detail

/// Factorises a homogeneous set. Falls back to the flat OR of build_tree when
/// no product of at least two factors is found, or when one of the factor
/// sets has no common goal.
template <GoalRelation R>
AttackTree<typename R::label_type> tree_factorisation(const R& rel, const SPGraphSet<typename R::label_type>& s,
                                                      const SynthOptions& opts = {}) {
  using Label = typename R::label_type;
  using Graph = SPGraph<Label>;
  if (s.empty()) throw error("empty attack set");
  if (!is_homogeneous(s)) throw error("tree factorisation requires a homogeneous attack set");

  auto b = find_optimal_label(rel, s);
  if (s.size() == 1) return build_tree(rel, *s.begin());

  const auto kind = homogeneous_kind(s);
  const auto mode = kind == Composition::parallel ? ProductMode::commutative : ProductMode::non_commutative;

  std::vector<Cube<Graph>> cubes;
  for (const auto& g : s) {
    if (g.kind() == kind)
      cubes.push_back(decompose(g).factors);
    else
      cubes.push_back({g});
  }
  const SopExpression<Graph> e(mode, std::move(cubes));
  const auto fac = exp_factorise(e, opts.split);

  auto flat = [&] {
    std::vector<AttackTree<Label>> children;
    for (const auto& g : s) children.push_back(build_tree(rel, g));
    return AttackTree<Label>::node(b, Op::OR, std::move(children));
  };

  if (fac.factors.size() < 2) return flat();

  std::vector<SPGraphSet<Label>> factor_sets;
  for (const auto& f : fac.factors) factor_sets.push_back(detail::graphs_of<Label>(kind, f));
  for (const auto& fs : factor_sets)
    if (!has_common_goal(rel, fs)) return flat();

  if (!fac.remainder) {
    std::vector<AttackTree<Label>> children;
    for (const auto& fs : factor_sets) children.push_back(tree_generation(rel, fs, opts));
    return AttackTree<Label>::node(b, kind == Composition::parallel ? Op::AND : Op::SAND, std::move(children));
  }

  // Partial factorisation: one branch for the product, one for the remainder.
  const auto product_set = detail::graphs_of<Label>(kind, expand(Factorisation<Graph>{fac.factors, std::nullopt}));
  const auto remainder_set = detail::graphs_of<Label>(kind, *fac.remainder);
  if (!has_common_goal(rel, product_set) || !has_common_goal(rel, remainder_set)) return flat();

  auto left = tree_generation(rel, product_set, opts);
  auto right = tree_generation(rel, remainder_set, opts);
  std::vector<AttackTree<Label>> children{std::move(left)};
  if (right.op() == Op::OR)
    children.insert(children.end(), right.children().begin(), right.children().end());
  else
    children.push_back(std::move(right));
  return AttackTree<Label>::node(std::move(b), Op::OR, std::move(children));
}

/// Entry point: a tree whose semantics is exactly `s`, labelled with optimal
/// goals. Throws no_common_goal when `s` shares no goal.
template <GoalRelation R>
AttackTree<typename R::label_type> tree_generation(const R& rel, const SPGraphSet<typename R::label_type>& s,
                                                   const SynthOptions& opts) {
  using Label = typename R::label_type;
  if (s.empty()) throw error("empty attack set");
  auto b = find_optimal_label(rel, s);
  auto t = [&] {
    if (is_homogeneous(s)) return tree_factorisation(rel, s, opts);
    std::vector<AttackTree<Label>> children;
    for (const auto& block : partition(rel, s)) children.push_back(tree_generation(rel, block, opts));
    return AttackTree<Label>::node(std::move(b), Op::OR, std::move(children));
  }();
  // Partition blocks and factor branches each add an inner node, so the
  // heuristic can lose to the flat OR. Keep whichever is smaller.
  auto flat = flat_tree(rel, s);
  return size(t) <= size(flat) ? t : flat;
}

}  // namespace atgen
