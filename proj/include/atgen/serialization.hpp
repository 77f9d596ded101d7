#pragma once

// JSON forms of graphs, trees, goal relations, transition systems and paths.
//
//   graph     {"leaf": <label>} | {"seq": [...]} | {"par": [...]},
//             optionally "endpoints": [<state>, <state>]
//   tree      {"label": <goal>} | {"label": <goal>, "op": "OR"|"AND"|"SAND", "children": [...]}
//   relation  {"goals": [...], "universe": [<graph>...], "sat": [[<index>, <goal>], ...]}
//   predicate {"p": "knows", "args": ["alice", "pa"]}   (variables start with '?')
//   delta     {"removed": [<predicate>...], "added": [<predicate>...]}

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "atgen/attack_tree.hpp"
#include "atgen/error.hpp"
#include "atgen/goals.hpp"
#include "atgen/kripke.hpp"
#include "atgen/sp_graph.hpp"

namespace atgen {

using json = nlohmann::ordered_json;

/// Parses JSON text, reporting syntax errors with a line and column.
inline json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw parse_error("malformed JSON", line, column);
  }
}

// Predicates, states, deltas

inline json to_json(const Predicate& p) { return {{"p", p.name}, {"args", p.args}}; }

/// Accepts the object form or the term text "name(a,b)".
inline Predicate predicate_from_json(const json& j) {
  if (j.is_string()) {
    const auto text = j.get<std::string>();
    const auto open = text.find('(');
    if (open == std::string::npos) return {text, {}};
    if (text.back() != ')') throw parse_error("malformed term '" + text + "'");
    Predicate p{text.substr(0, open), {}};
    std::string arg;
    for (char c : text.substr(open + 1, text.size() - open - 2)) {
      if (c == ',') {
        p.args.push_back(arg);
        arg.clear();
      } else if (c != ' ') {
        arg += c;
      }
    }
    if (!arg.empty() || !p.args.empty()) p.args.push_back(arg);
    return p;
  }
  if (!j.is_object() || !j.contains("p")) throw parse_error("predicate must be an object with a \"p\" field");
  Predicate p{j.at("p").get<std::string>(), {}};
  if (j.contains("args")) p.args = j.at("args").get<std::vector<std::string>>();
  return p;
}

inline json to_json(const PredicateSet& s) {
  json out = json::array();
  for (const auto& p : s) out.push_back(to_json(p));
  return out;
}

inline PredicateSet predicate_set_from_json(const json& j) {
  if (!j.is_array()) throw parse_error("expected an array of predicates");
  PredicateSet out;
  for (const auto& e : j) out.insert(predicate_from_json(e));
  return out;
}

inline json to_json(const State& s) { return to_json(s.facts); }
inline State state_from_json(const json& j) { return {predicate_set_from_json(j)}; }

inline json to_json(const StepDelta& d) { return {{"removed", to_json(d.removed)}, {"added", to_json(d.added)}}; }

inline StepDelta delta_from_json(const json& j) {
  if (!j.is_object()) throw parse_error("delta must be an object with \"removed\" and \"added\"");
  StepDelta d;
  if (j.contains("removed")) d.removed = predicate_set_from_json(j.at("removed"));
  if (j.contains("added")) d.added = predicate_set_from_json(j.at("added"));
  return d;
}

// Labels

template <class Label>
struct label_codec;

template <>
struct label_codec<std::string> {
  static json encode(const std::string& s) { return s; }
  static std::string decode(const json& j) {
    if (!j.is_string()) throw parse_error("expected a string label");
    return j.get<std::string>();
  }
};

template <>
struct label_codec<StepDelta> {
  static json encode(const StepDelta& d) { return to_json(d); }
  static StepDelta decode(const json& j) { return delta_from_json(j); }
};

namespace detail {

template <class E>
json endpoint_to_json(const E& e) {
  if constexpr (std::is_same_v<E, State>) {
    return to_json(e);
  } else {
    return nullptr;
  }
}

}  // namespace detail

// Graphs

template <class Label>
json to_json(const SPGraph<Label>& g) {
  json out;
  if (g.is_simple()) {
    out["leaf"] = label_codec<Label>::encode(g.label());
  } else {
    json children = json::array();
    for (const auto& c : g.children()) children.push_back(to_json(c));
    out[g.kind() == Composition::sequential ? "seq" : "par"] = std::move(children);
  }
  if constexpr (std::is_same_v<endpoint_t<Label>, State>) {
    if (g.endpoints()) out["endpoints"] = json::array({to_json(g.endpoints()->first), to_json(g.endpoints()->second)});
  }
  return out;
}

template <class Label>
SPGraph<Label> graph_from_json(const json& j) {
  using Graph = SPGraph<Label>;
  if (!j.is_object()) throw parse_error("SP graph must be an object");

  std::optional<typename Graph::Endpoints> endpoints;
  if constexpr (std::is_same_v<endpoint_t<Label>, State>) {
    if (j.contains("endpoints")) {
      const auto& e = j.at("endpoints");
      if (!e.is_array() || e.size() != 2) throw parse_error("endpoints must be a pair of states");
      endpoints = typename Graph::Endpoints{state_from_json(e[0]), state_from_json(e[1])};
    }
  }

  if (j.contains("leaf")) return Graph::leaf(label_codec<Label>::decode(j.at("leaf")), std::move(endpoints));

  for (auto [key, kind] : {std::pair{"seq", Composition::sequential}, std::pair{"par", Composition::parallel}}) {
    if (!j.contains(key)) continue;
    const auto& arr = j.at(key);
    if (!arr.is_array() || arr.empty()) throw parse_error(std::string("\"") + key + "\" needs a non-empty array");
    std::vector<Graph> parts;
    for (const auto& c : arr) parts.push_back(graph_from_json<Label>(c));
    auto g = Graph::compose(kind, std::move(parts));
    return endpoints ? g.with_endpoints(std::move(endpoints)) : g;
  }
  throw parse_error("SP graph needs one of \"leaf\", \"seq\", \"par\"");
}

template <class Label>
json to_json(const SPGraphSet<Label>& s) {
  json out = json::array();
  for (const auto& g : s) out.push_back(to_json(g));
  return out;
}

/// A bare array of graphs or {"attacks": [...]}.
template <class Label>
SPGraphSet<Label> attacks_from_json(const json& j) {
  const json& arr = j.is_object() && j.contains("attacks") ? j.at("attacks") : j;
  if (!arr.is_array()) throw parse_error("attacks must be an array of SP graphs");
  SPGraphSet<Label> out;
  for (const auto& g : arr) out.insert(graph_from_json<Label>(g));
  return out;
}

// Trees

template <class Label>
json to_json(const AttackTree<Label>& t) {
  json out;
  out["label"] = label_codec<Label>::encode(t.label());
  if (!t.is_leaf()) {
    out["op"] = std::string(to_string(*t.op()));
    json children = json::array();
    for (const auto& c : t.children()) children.push_back(to_json(c));
    out["children"] = std::move(children);
  }
  return out;
}

template <class Label>
AttackTree<Label> tree_from_json(const json& j) {
  if (!j.is_object() || !j.contains("label")) throw parse_error("tree node must be an object with a \"label\"");
  auto label = label_codec<Label>::decode(j.at("label"));
  if (!j.contains("op")) {
    if (j.contains("children")) throw parse_error("tree node with children needs an \"op\"");
    return AttackTree<Label>::leaf(std::move(label));
  }
  auto op = parse_op(j.at("op").get<std::string>());
  if (!op) throw parse_error("unknown operator " + j.at("op").dump());
  if (!j.contains("children") || !j.at("children").is_array() || j.at("children").empty())
    throw parse_error("refinement node needs a non-empty \"children\" array");
  std::vector<AttackTree<Label>> children;
  for (const auto& c : j.at("children")) children.push_back(tree_from_json<Label>(c));
  return AttackTree<Label>::node(std::move(label), *op, std::move(children));
}

/// True when a tree document carries transition-system (delta) labels.
inline bool has_delta_labels(const json& tree) {
  return tree.is_object() && tree.contains("label") && tree.at("label").is_object();
}

// Table relations

inline TableRelation<std::string> relation_from_json(const json& j) {
  if (!j.is_object() || !j.contains("goals") || !j.contains("universe") || !j.contains("sat"))
    throw parse_error("goal relation needs \"goals\", \"universe\" and \"sat\"");
  std::set<std::string> goals;
  for (const auto& g : j.at("goals")) goals.insert(label_codec<std::string>::decode(g));
  std::vector<SPGraph<std::string>> universe;
  for (const auto& g : j.at("universe")) universe.push_back(graph_from_json<std::string>(g));
  std::vector<std::pair<std::size_t, std::string>> sat;
  for (const auto& e : j.at("sat")) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned())
      throw parse_error("sat entries must be [<graph-index>, <goal>]");
    sat.emplace_back(e[0].get<std::size_t>(), label_codec<std::string>::decode(e[1]));
  }
  return {std::move(goals), std::move(universe), sat};
}

inline json to_json(const TableRelation<std::string>& rel) {
  json out;
  out["goals"] = json(std::vector<std::string>(rel.goals().begin(), rel.goals().end()));
  json universe = json::array();
  json sat = json::array();
  const auto& graphs = rel.indexed_universe();
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    universe.push_back(to_json(graphs[i]));
    for (const auto& goal : rel.goals())
      if (rel.satisfies(graphs[i], goal)) sat.push_back(json::array({i, goal}));
  }
  out["universe"] = std::move(universe);
  out["sat"] = std::move(sat);
  return out;
}

// Transition systems

inline json to_json(const TransitionRule& r) {
  json out;
  out["name"] = r.name;
  out["vars"] = r.vars;
  json premises = json::array();
  for (const auto& p : r.premises) premises.push_back(to_json(p));
  out["premises"] = std::move(premises);
  out["action"] = to_string(r.action);
  json add = json::array(), remove = json::array();
  for (const auto& p : r.additions) add.push_back(to_json(p));
  for (const auto& p : r.removals) remove.push_back(to_json(p));
  out["add"] = std::move(add);
  out["remove"] = std::move(remove);
  return out;
}

inline TransitionRule rule_from_json(const json& j) {
  if (!j.is_object() || !j.contains("name") || !j.contains("action"))
    throw parse_error("rule needs \"name\" and \"action\"");
  TransitionRule r;
  r.name = j.at("name").get<std::string>();
  // Variables may be declared with or without the leading '?'.
  if (j.contains("vars"))
    for (const auto& [var, sort] : j.at("vars").get<std::map<std::string, std::string>>())
      r.vars[is_variable(var) ? var : "?" + var] = sort;
  auto list = [&j](const char* key) {
    std::vector<Predicate> out;
    if (j.contains(key))
      for (const auto& p : j.at(key)) out.push_back(predicate_from_json(p));
    return out;
  };
  r.premises = list("premises");
  r.action = predicate_from_json(j.at("action"));
  r.additions = list("add");
  r.removals = list("remove");
  return r;
}

inline json to_json(const KripkeSystem& sys) {
  json out;
  out["sorts"] = sys.sorts;
  out["initial"] = to_json(sys.initial);
  json rules = json::array();
  for (const auto& r : sys.rules) rules.push_back(to_json(r));
  out["rules"] = std::move(rules);
  json breach = json::array();
  for (const auto& p : sys.breach) breach.push_back(to_json(p));
  out["breach"] = std::move(breach);
  return out;
}

inline KripkeSystem system_from_json(const json& j) {
  if (!j.is_object()) throw parse_error("system spec must be an object");
  for (const char* key : {"sorts", "initial", "rules", "breach"})
    if (!j.contains(key)) throw parse_error(std::string("system spec is missing \"") + key + "\"");
  KripkeSystem sys;
  sys.sorts = j.at("sorts").get<std::map<std::string, std::vector<std::string>>>();
  sys.initial = state_from_json(j.at("initial"));
  for (const auto& r : j.at("rules")) sys.rules.push_back(rule_from_json(r));
  for (const auto& p : j.at("breach")) sys.breach.push_back(predicate_from_json(p));
  try {
    validate(sys);
  } catch (const parse_error&) {
    throw;
  } catch (const error& e) {
    throw parse_error(e.what());
  }
  return sys;
}

inline json to_json(const Path& p) {
  json states = json::array();
  for (const auto& s : p.states) states.push_back(to_json(s));
  json steps = json::array();
  for (const auto& s : p.steps) steps.push_back({{"action", s.action}, {"delta", to_json(s.delta)}});
  return {{"states", std::move(states)}, {"steps", std::move(steps)}};
}

inline json to_json(const std::vector<Path>& paths) {
  json out = json::array();
  for (const auto& p : paths) out.push_back(to_json(p));
  return out;
}

inline Path path_from_json(const json& j) {
  if (!j.is_object() || !j.contains("states") || !j.contains("steps"))
    throw parse_error("path needs \"states\" and \"steps\"");
  Path p;
  for (const auto& s : j.at("states")) p.states.push_back(state_from_json(s));
  for (const auto& s : j.at("steps")) p.steps.push_back({s.at("action").get<std::string>(), delta_from_json(s.at("delta"))});
  if (p.states.size() != p.steps.size() + 1) throw parse_error("path needs exactly one more state than steps");
  return p;
}

}  // namespace atgen
