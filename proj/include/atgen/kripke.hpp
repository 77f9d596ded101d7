#pragma once

// Mixed Kripke structures: predicate-set states evolved by guarded rules.
// Paths to breach states become sequential SP graphs whose edge labels are
// the per-step state deltas (removed, added); the same deltas serve as goals.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "atgen/error.hpp"
#include "atgen/sp_graph.hpp"

namespace atgen {

/// name(args...). Arguments starting with '?' are variables; states only hold
/// ground predicates.
struct Predicate {
  std::string name;
  std::vector<std::string> args;

  friend auto operator<=>(const Predicate&, const Predicate&) = default;
  friend bool operator==(const Predicate&, const Predicate&) = default;
};

inline bool is_variable(const std::string& term) { return !term.empty() && term.front() == '?'; }

inline bool is_ground(const Predicate& p) {
  return std::none_of(p.args.begin(), p.args.end(), [](const auto& a) { return is_variable(a); });
}

inline std::string to_string(const Predicate& p) {
  if (p.args.empty()) return p.name;
  std::string out = p.name + "(";
  for (std::size_t i = 0; i < p.args.size(); ++i) {
    if (i) out += ",";
    out += p.args[i];
  }
  return out + ")";
}

using PredicateSet = std::set<Predicate>;

struct State {
  PredicateSet facts;

  bool contains(const Predicate& p) const { return facts.contains(p); }

  friend auto operator<=>(const State&, const State&) = default;
  friend bool operator==(const State&, const State&) = default;
};

inline PredicateSet set_minus(const PredicateSet& a, const PredicateSet& b) {
  PredicateSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

inline PredicateSet set_intersection(const PredicateSet& a, const PredicateSet& b) {
  PredicateSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

/// (P⁻, P⁺): what a transition or subpath removed from and added to the state.
struct StepDelta {
  PredicateSet removed;
  PredicateSet added;

  friend auto operator<=>(const StepDelta&, const StepDelta&) = default;
  friend bool operator==(const StepDelta&, const StepDelta&) = default;
};

inline StepDelta delta_between(const State& from, const State& to) {
  return {set_minus(from.facts, to.facts), set_minus(to.facts, from.facts)};
}

inline std::string to_string(const PredicateSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& p : s) {
    if (!first) out += ", ";
    first = false;
    out += to_string(p);
  }
  return out + "}";
}

inline std::string to_string(const StepDelta& d) {
  return "(" + to_string(d.removed) + ", " + to_string(d.added) + ")";
}

template <>
struct label_traits<StepDelta> {
  using endpoint_type = State;
};

using LtsGraph = SPGraph<StepDelta>;
using LtsGraphSet = SPGraphSet<StepDelta>;

struct TransitionRule {
  std::string name;
  std::map<std::string, std::string> vars;  // variable -> sort
  std::vector<Predicate> premises;
  Predicate action;
  std::vector<Predicate> additions;
  std::vector<Predicate> removals;
};

struct KripkeSystem {
  std::map<std::string, std::vector<std::string>> sorts;
  std::vector<TransitionRule> rules;
  State initial;
  std::vector<Predicate> breach;
};

/// Structural checks: ground initial state over declared constants, rule
/// variables bound by premises or sorts, known sorts.
inline void validate(const KripkeSystem& sys) {
  std::set<std::string> constants;
  for (const auto& [sort, values] : sys.sorts) constants.insert(values.begin(), values.end());

  for (const auto& p : sys.initial.facts) {
    if (!is_ground(p)) throw error("initial state predicate " + to_string(p) + " is not ground");
    for (const auto& a : p.args)
      if (!constants.contains(a)) throw error("initial state uses undeclared constant " + a);
  }
  for (const auto& rule : sys.rules) {
    std::set<std::string> bound;
    for (const auto& [var, sort] : rule.vars) {
      if (!is_variable(var)) throw error("rule " + rule.name + ": variable " + var + " must start with '?'");
      if (!sys.sorts.contains(sort)) throw error("rule " + rule.name + " uses undeclared sort " + sort);
      bound.insert(var);
    }
    for (const auto& p : rule.premises)
      for (const auto& a : p.args)
        if (is_variable(a)) bound.insert(a);
    auto check = [&](const Predicate& p) {
      for (const auto& a : p.args)
        if (is_variable(a) && !bound.contains(a))
          throw error("rule " + rule.name + ": variable " + a + " appears in neither premises nor sorts");
    };
    check(rule.action);
    for (const auto& p : rule.additions) check(p);
    for (const auto& p : rule.removals) check(p);
  }
}

using Bindings = std::map<std::string, std::string>;

inline Predicate substitute(const Predicate& pattern, const Bindings& b) {
  Predicate out{pattern.name, {}};
  out.args.reserve(pattern.args.size());
  for (const auto& a : pattern.args) {
    if (!is_variable(a)) {
      out.args.push_back(a);
      continue;
    }
    auto it = b.find(a);
    if (it == b.end()) throw error("unbound variable " + a + " in " + to_string(pattern));
    out.args.push_back(it->second);
  }
  return out;
}

namespace detail {

inline bool in_sort(const KripkeSystem& sys, const std::map<std::string, std::string>& vars, const std::string& var,
                    const std::string& value) {
  auto v = vars.find(var);
  if (v == vars.end()) return true;
  auto s = sys.sorts.find(v->second);
  if (s == sys.sorts.end()) return false;
  return std::find(s->second.begin(), s->second.end(), value) != s->second.end();
}

// Extends `b` so that pattern instantiates to fact; false on a clash.
inline bool unify(const KripkeSystem& sys, const std::map<std::string, std::string>& vars, const Predicate& pattern,
                  const Predicate& fact, Bindings& b) {
  if (pattern.name != fact.name || pattern.args.size() != fact.args.size()) return false;
  for (std::size_t i = 0; i < pattern.args.size(); ++i) {
    const auto& p = pattern.args[i];
    const auto& f = fact.args[i];
    if (!is_variable(p)) {
      if (p != f) return false;
      continue;
    }
    if (auto it = b.find(p); it != b.end()) {
      if (it->second != f) return false;
    } else {
      if (!in_sort(sys, vars, p, f)) return false;
      b.emplace(p, f);
    }
  }
  return true;
}

// Calls `emit` once per binding under which every pattern is present in `s`.
inline void match_all(const KripkeSystem& sys, const std::map<std::string, std::string>& vars,
                      const std::vector<Predicate>& patterns, std::size_t index, const State& s, Bindings& b,
                      const std::function<void(const Bindings&)>& emit) {
  if (index == patterns.size()) {
    emit(b);
    return;
  }
  for (const auto& fact : s.facts) {
    Bindings next = b;
    if (unify(sys, vars, patterns[index], fact, next)) match_all(sys, vars, patterns, index + 1, s, next, emit);
  }
}

// Enumerates the declared variables left unbound over their sort domains.
inline void ground_remaining(const KripkeSystem& sys, const TransitionRule& rule,
                             std::map<std::string, std::string>::const_iterator it, Bindings& b,
                             const std::function<void(const Bindings&)>& emit) {
  if (it == rule.vars.end()) {
    emit(b);
    return;
  }
  auto next = std::next(it);
  if (b.contains(it->first)) {
    ground_remaining(sys, rule, next, b, emit);
    return;
  }
  auto sort = sys.sorts.find(it->second);
  if (sort == sys.sorts.end()) throw error("rule " + rule.name + " uses undeclared sort " + it->second);
  for (const auto& value : sort->second) {
    b[it->first] = value;
    ground_remaining(sys, rule, next, b, emit);
  }
  b.erase(it->first);
}

}  // namespace detail

struct Successor {
  std::string action;
  State next;

  friend auto operator<=>(const Successor&, const Successor&) = default;
  friend bool operator==(const Successor&, const Successor&) = default;
};

/// Every enabled ground rule instance in `s`, sorted by (action, next state).
/// Instances that leave the state unchanged are dropped.
inline std::vector<Successor> apply_rules(const KripkeSystem& sys, const State& s) {
  std::set<Successor> out;
  for (const auto& rule : sys.rules) {
    Bindings start;
    detail::match_all(sys, rule.vars, rule.premises, 0, s, start, [&](const Bindings& matched) {
      Bindings b = matched;
      detail::ground_remaining(sys, rule, rule.vars.begin(), b, [&](const Bindings& full) {
        State next = s;
        for (const auto& r : rule.removals) next.facts.erase(substitute(r, full));
        for (const auto& a : rule.additions) next.facts.insert(substitute(a, full));
        if (next == s) return;
        out.insert({to_string(substitute(rule.action, full)), std::move(next)});
      });
    });
  }
  return {out.begin(), out.end()};
}

inline bool is_breach(const KripkeSystem& sys, const State& s) {
  bool found = false;
  Bindings b;
  detail::match_all(sys, {}, sys.breach, 0, s, b, [&](const Bindings&) { found = true; });
  return found;
}

struct PathStep {
  std::string action;
  StepDelta delta;

  friend bool operator==(const PathStep&, const PathStep&) = default;
};

/// s0 -a0-> s1 ... -> sn with `states.size() == steps.size() + 1`.
struct Path {
  std::vector<State> states;
  std::vector<PathStep> steps;

  friend bool operator==(const Path&, const Path&) = default;
};

/// Breadth-first enumeration of paths from the initial state to the first
/// breach state along each path. A path never revisits a state. Results are
/// ordered by length, then by the order of their prefixes and actions.
inline std::vector<Path> enumerate_paths(const KripkeSystem& sys, std::size_t max_depth, std::size_t max_paths) {
  std::vector<Path> results;
  if (max_paths == 0) return results;
  if (is_breach(sys, sys.initial)) {
    results.push_back({{sys.initial}, {}});
    return results;
  }

  std::map<State, std::vector<Successor>> successors;
  std::vector<Path> frontier{{{sys.initial}, {}}};
  for (std::size_t depth = 1; depth <= max_depth && !frontier.empty(); ++depth) {
    std::vector<Path> next_frontier;
    for (const auto& p : frontier) {
      const auto& here = p.states.back();
      auto it = successors.find(here);
      if (it == successors.end()) it = successors.emplace(here, apply_rules(sys, here)).first;

      for (const auto& succ : it->second) {
        if (std::find(p.states.begin(), p.states.end(), succ.next) != p.states.end()) continue;
        Path q = p;
        q.steps.push_back({succ.action, delta_between(here, succ.next)});
        q.states.push_back(succ.next);
        if (is_breach(sys, succ.next)) {
          results.push_back(std::move(q));
          if (results.size() == max_paths) return results;
        } else if (depth < max_depth) {
          next_frontier.push_back(std::move(q));
        }
      }
    }
    frontier = std::move(next_frontier);
  }
  return results;
}

/// Drops every path whose action sequence has another enumerated path's
/// action sequence as a proper subsequence.
inline std::vector<Path> prune_redundant_paths(const std::vector<Path>& paths) {
  auto actions = [](const Path& p) {
    std::vector<std::string> out;
    for (const auto& s : p.steps) out.push_back(s.action);
    return out;
  };
  auto is_subsequence = [](const std::vector<std::string>& small, const std::vector<std::string>& big) {
    std::size_t i = 0;
    for (const auto& a : big)
      if (i < small.size() && small[i] == a) ++i;
    return i == small.size();
  };

  std::vector<std::vector<std::string>> seqs;
  for (const auto& p : paths) seqs.push_back(actions(p));

  std::vector<Path> out;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < paths.size() && !redundant; ++j)
      redundant = seqs[j].size() < seqs[i].size() && is_subsequence(seqs[j], seqs[i]);
    if (!redundant) out.push_back(paths[i]);
  }
  return out;
}

/// Graph of steps [first, last) of `p`, carrying its endpoint states.
inline LtsGraph subpath_graph(const Path& p, std::size_t first, std::size_t last) {
  if (first >= last || last > p.steps.size()) throw error("empty path");
  std::vector<LtsGraph> edges;
  for (std::size_t i = first; i < last; ++i)
    edges.push_back(LtsGraph::leaf(p.steps[i].delta, LtsGraph::Endpoints{p.states[i], p.states[i + 1]}));
  return seq_compose(std::move(edges));
}

inline LtsGraph path_to_spgraph(const Path& p) { return subpath_graph(p, 0, p.steps.size()); }

/// All contiguous subpath graphs (n(n+1)/2 for n steps, before deduplication).
inline std::vector<LtsGraph> subpath_graphs(const Path& p) {
  std::vector<LtsGraph> out;
  for (std::size_t i = 0; i < p.steps.size(); ++i)
    for (std::size_t j = i + 1; j <= p.steps.size(); ++j) out.push_back(subpath_graph(p, i, j));
  return out;
}

/// (s_i \ s_j, s_j \ s_i) read off the endpoint metadata.
inline StepDelta endpoint_delta(const LtsGraph& g) {
  if (!g.endpoints()) throw error("SP graph carries no endpoint states");
  return delta_between(g.endpoints()->first, g.endpoints()->second);
}

/// The same net delta reconstructed from the edge labels alone. A predicate
/// first seen as removed was present at the start; its last appearance tells
/// whether it is present at the end.
inline StepDelta net_delta(const LtsGraph& g) {
  if (g.kind() == Composition::parallel) throw error("transition-system graphs are sequential");
  std::map<Predicate, std::pair<bool, bool>> presence;  // (at start, at end)
  auto apply = [&presence](const StepDelta& d) {
    for (const auto& p : d.removed) {
      auto [it, fresh] = presence.try_emplace(p, true, false);
      if (!fresh) it->second.second = false;
    }
    for (const auto& p : d.added) {
      auto [it, fresh] = presence.try_emplace(p, false, true);
      if (!fresh) it->second.second = true;
    }
  };
  if (g.is_simple()) {
    apply(g.label());
  } else {
    for (const auto& c : g.children()) {
      if (!c.is_simple()) throw error("transition-system graphs are sequential");
      apply(c.label());
    }
  }
  StepDelta out;
  for (const auto& [p, flags] : presence) {
    if (flags.first && !flags.second) out.removed.insert(p);
    if (!flags.first && flags.second) out.added.insert(p);
  }
  return out;
}

inline bool delta_satisfies(const StepDelta& achieved, const StepDelta& goal) {
  return std::includes(achieved.removed.begin(), achieved.removed.end(), goal.removed.begin(), goal.removed.end()) &&
         std::includes(achieved.added.begin(), achieved.added.end(), goal.added.begin(), goal.added.end());
}

/// g ⊢ (P⁻, P⁺) iff P⁻ ⊆ s_i \ s_j and P⁺ ⊆ s_j \ s_i for g's endpoints.
inline bool lts_satisfies(const LtsGraph& g, const StepDelta& goal) { return delta_satisfies(endpoint_delta(g), goal); }

/// Closed-form optimal common goal: intersect the removed sets and the added
/// sets of the endpoint deltas.
inline StepDelta lts_optimal_label(const LtsGraphSet& graphs) {
  if (graphs.empty()) throw error("empty attack set");
  std::optional<StepDelta> acc;
  for (const auto& g : graphs) {
    auto d = endpoint_delta(g);
    if (!acc) {
      acc = std::move(d);
    } else {
      acc->removed = set_intersection(acc->removed, d.removed);
      acc->added = set_intersection(acc->added, d.added);
    }
  }
  return *acc;
}

/// Goal relation of a transition system over the subpaths of a set of paths.
/// Satisfaction is evaluated on the net delta of the edge labels, so graphs
/// assembled during generation (without trustworthy endpoints) are judged
/// exactly as their originating subpaths.
class LtsRelation {
public:
  using label_type = StepDelta;

  explicit LtsRelation(const std::vector<Path>& paths) {
    for (const auto& p : paths)
      for (auto& g : subpath_graphs(p)) universe_.insert(std::move(g));
  }

  const LtsGraphSet& universe() const { return universe_; }

  bool satisfies(const LtsGraph& g, const StepDelta& goal) const { return delta_satisfies(net_delta(g), goal); }

  std::optional<StepDelta> optimal_label(const LtsGraphSet& s) const {
    if (s.empty()) return std::nullopt;
    std::optional<StepDelta> acc;
    for (const auto& g : s) {
      auto d = net_delta(g);
      if (!acc) {
        acc = std::move(d);
      } else {
        acc->removed = set_intersection(acc->removed, d.removed);
        acc->added = set_intersection(acc->added, d.added);
      }
    }
    return acc;
  }

private:
  LtsGraphSet universe_;
};

inline LtsRelation lts_goal_relation(const std::vector<Path>& paths) {
  if (paths.empty()) throw error("no paths to build a goal relation from");
  return LtsRelation(paths);
}

}  // namespace atgen
