#pragma once

// Goal relations between attacks (SP graphs) and goals (labels), and the
// labelling checks built on top of them.

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "atgen/attack_tree.hpp"
#include "atgen/error.hpp"
#include "atgen/sp_graph.hpp"

namespace atgen {

/// A relation g ⊢ γ over a finite attack universe. `optimal_label(s)` returns
/// a goal satisfied by every member of `s` with the fewest attacks, or nothing
/// when `s` has no common goal.
template <class R>
concept GoalRelation = requires(const R& r, const SPGraph<typename R::label_type>& g,
                                const typename R::label_type& goal,
                                const SPGraphSet<typename R::label_type>& s) {
  { r.satisfies(g, goal) } -> std::same_as<bool>;
  { r.universe() } -> std::same_as<const SPGraphSet<typename R::label_type>&>;
  { r.optimal_label(s) } -> std::same_as<std::optional<typename R::label_type>>;
};

/// Relations whose goal alphabet is finite and can be listed.
template <class R>
concept EnumerableGoalRelation = GoalRelation<R> && requires(const R& r) {
  { r.goals() } -> std::same_as<const std::set<typename R::label_type>&>;
};

/// Table-driven relation: an explicit goal alphabet, universe and list of
/// satisfied (graph, goal) pairs.
template <class Label>
class TableRelation {
public:
  using label_type = Label;
  using Graph = SPGraph<Label>;

  TableRelation(std::set<Label> goals, std::vector<Graph> universe,
                const std::vector<std::pair<std::size_t, Label>>& sat)
      : goals_(std::move(goals)), indexed_(std::move(universe)) {
    for (const auto& g : indexed_) universe_.insert(g);
    for (const auto& goal : goals_) attacks_[goal];
    for (const auto& [index, goal] : sat) {
      if (index >= indexed_.size()) throw error("sat entry refers to graph index " + std::to_string(index) +
                                                " outside the universe");
      if (!goals_.contains(goal)) throw error("sat entry refers to an undeclared goal");
      table_[indexed_[index]].insert(goal);
      attacks_[goal].insert(indexed_[index]);
    }
    for (const auto& g : universe_)
      if (!table_.contains(g)) throw error("goal relation is not total: a universe graph satisfies no goal");
  }

  const std::set<Label>& goals() const { return goals_; }
  const SPGraphSet<Label>& universe() const { return universe_; }
  const std::vector<Graph>& indexed_universe() const { return indexed_; }

  bool satisfies(const Graph& g, const Label& goal) const {
    auto it = table_.find(g);
    return it != table_.end() && it->second.contains(goal);
  }

  const SPGraphSet<Label>& attacks_of(const Label& goal) const {
    auto it = attacks_.find(goal);
    if (it == attacks_.end()) throw error("unknown goal");
    return it->second;
  }

  /// Exhaustive search over the goal alphabet; ties go to the smallest goal.
  std::optional<Label> optimal_label(const SPGraphSet<Label>& s) const {
    std::optional<Label> best;
    std::size_t best_count = 0;
    for (const auto& [goal, members] : attacks_) {
      if (!std::includes(members.begin(), members.end(), s.begin(), s.end())) continue;
      if (!best || members.size() < best_count) {
        best = goal;
        best_count = members.size();
      }
    }
    return best;
  }

private:
  std::set<Label> goals_;
  std::vector<Graph> indexed_;
  SPGraphSet<Label> universe_;
  std::map<Graph, std::set<Label>> table_;
  std::map<Label, SPGraphSet<Label>> attacks_;
};

/// { g ∈ universe | g ⊢ goal }.
template <GoalRelation R>
SPGraphSet<typename R::label_type> attacks(const R& rel, const typename R::label_type& goal) {
  if constexpr (EnumerableGoalRelation<R>) {
    if (!rel.goals().contains(goal)) throw error("unknown goal");
  }
  SPGraphSet<typename R::label_type> out;
  for (const auto& g : rel.universe())
    if (rel.satisfies(g, goal)) out.insert(out.end(), g);
  return out;
}

template <GoalRelation R>
bool has_common_goal(const R& rel, const SPGraphSet<typename R::label_type>& s) {
  return rel.optimal_label(s).has_value();
}

/// Goal b with s ⊆ attacks(b) and |attacks(b)| minimal.
template <GoalRelation R>
typename R::label_type find_optimal_label(const R& rel, const SPGraphSet<typename R::label_type>& s) {
  auto b = rel.optimal_label(s);
  if (!b) throw no_common_goal();
  return *b;
}

template <class Label>
struct LabelViolation {
  AttackTree<Label> subtree;
  SPGraph<Label> witness;  // an attack of the subtree that does not satisfy its label
};

template <class Label>
struct CorrectnessReport {
  std::vector<LabelViolation<Label>> violations;
  bool ok() const { return violations.empty(); }
  explicit operator bool() const { return ok(); }
};

/// Every subtree t' satisfies: α ∈ ⟦t'⟧ ⇒ α ⊢ top(t').
template <GoalRelation R>
CorrectnessReport<typename R::label_type> is_correctly_labelled(const AttackTree<typename R::label_type>& t,
                                                                const R& rel) {
  CorrectnessReport<typename R::label_type> report;
  for (const auto& st : subtrees(t)) {
    for (const auto& g : semantics(st)) {
      if (!rel.satisfies(g, st.label())) {
        report.violations.push_back({st, g});
        break;
      }
    }
  }
  return report;
}

template <GoalRelation R>
std::size_t missed_attacks_for(const R& rel, const typename R::label_type& goal,
                               const SPGraphSet<typename R::label_type>& sem) {
  std::size_t n = 0;
  for (const auto& g : rel.universe())
    if (rel.satisfies(g, goal) && !sem.contains(g)) ++n;
  return n;
}

/// |attacks(top(t)) \ ⟦t⟧|.
template <GoalRelation R>
std::size_t missed_attacks(const AttackTree<typename R::label_type>& t, const R& rel) {
  return missed_attacks_for(rel, t.label(), semantics(t));
}

template <class Label>
struct SuboptimalLabel {
  AttackTree<Label> subtree;
  Label better;
  std::size_t missed;
  std::size_t better_missed;
};

template <class Label>
struct OptimalityReport {
  std::vector<SuboptimalLabel<Label>> violations;
  bool ok() const { return violations.empty(); }
  explicit operator bool() const { return ok(); }
};

/// Checks that no refinement node can be relabelled (children fixed) into a
/// correct tree with fewer missed attacks. Leaves only need to be correct.
/// Throws when `t` is not correctly labelled.
template <GoalRelation R>
OptimalityReport<typename R::label_type> is_optimally_labelled(const AttackTree<typename R::label_type>& t,
                                                               const R& rel) {
  using Label = typename R::label_type;
  if (!is_correctly_labelled(t, rel)) throw error("tree is not correctly labelled");

  OptimalityReport<Label> report;
  for (const auto& st : subtrees(t)) {
    if (st.is_leaf()) continue;
    const auto sem = semantics(st);
    const std::size_t mu = missed_attacks_for(rel, st.label(), sem);

    auto correct_for = [&](const Label& goal) {
      return std::all_of(sem.begin(), sem.end(), [&](const auto& g) { return rel.satisfies(g, goal); });
    };

    std::optional<std::pair<Label, std::size_t>> best;
    auto consider = [&](const Label& goal) {
      if (!correct_for(goal)) return;
      std::size_t m = missed_attacks_for(rel, goal, sem);
      if (!best || m < best->second) best = {goal, m};
    };

    if constexpr (EnumerableGoalRelation<R>) {
      for (const auto& goal : rel.goals()) consider(goal);
    } else {
      if (auto goal = rel.optimal_label(sem)) consider(*goal);
    }

    if (best && best->second < mu) report.violations.push_back({st, best->first, mu, best->second});
  }
  return report;
}

}  // namespace atgen
