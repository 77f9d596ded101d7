#pragma once

// Shared fixtures for the unit and acceptance suites: the running example,
// the network system, random instance generators and independent oracles.

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "atgen/attack_tree.hpp"
#include "atgen/factor.hpp"
#include "atgen/goals.hpp"
#include "atgen/kripke.hpp"
#include "atgen/serialization.hpp"
#include "atgen/sp_graph.hpp"

#ifndef ATGEN_DATA_DIR
#define ATGEN_DATA_DIR "data"
#endif

namespace fixtures {

using namespace atgen;
using G = SPGraph<std::string>;
using GSet = SPGraphSet<std::string>;
using T = AttackTree<std::string>;

inline G e(const std::string& label) { return G::leaf(label); }
inline G seq(std::vector<G> parts) { return seq_compose(std::move(parts)); }
inline G par(std::vector<G> parts) { return par_compose(std::move(parts)); }
inline T leaf(const std::string& label) { return T::leaf(label); }
inline T node(const std::string& label, Op op, std::vector<T> children) {
  return T::node(label, op, std::move(children));
}

inline std::string read_data(const std::string& name) {
  std::ifstream in(std::string(ATGEN_DATA_DIR) + "/" + name, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// The running example: access ▷ SAND(credential ▷ OR(eu ▷ SAND(w, ec), b, x), l).
inline T access_tree() {
  return node("access", Op::SAND,
              {node("credential", Op::OR, {node("eu", Op::SAND, {leaf("w"), leaf("ec")}), leaf("b"), leaf("x")}),
               leaf("l")});
}

inline GSet access_attacks() {
  return {seq({e("w"), e("ec"), e("l")}), seq({e("b"), e("l")}), seq({e("x"), e("l")})};
}

// Built in code, independently of the JSON fixture, from the relation bullets.
inline TableRelation<std::string> access_relation() {
  std::vector<G> universe{e("w"), e("ec"), e("b"), e("x"), e("l"), seq({e("w"), e("ec")}),
                          seq({e("w"), e("ec"), e("l")}), seq({e("b"), e("l")}), seq({e("x"), e("l")})};
  std::vector<std::pair<std::size_t, std::string>> sat{
      {0, "w"}, {1, "ec"}, {2, "b"}, {3, "x"}, {4, "l"}, {5, "eu"}, {5, "credential"},
      {2, "credential"}, {3, "credential"}, {6, "access"}, {7, "access"}, {8, "access"}};
  return {{"access", "credential", "eu", "w", "ec", "b", "x", "l"}, universe, sat};
}

inline KripkeSystem network_system() { return system_from_json(parse_json(read_data("network.json"))); }

inline Predicate pred(std::string name, std::vector<std::string> args) { return {std::move(name), std::move(args)}; }

inline StepDelta added(std::vector<Predicate> ps) {
  StepDelta d;
  d.added.insert(ps.begin(), ps.end());
  return d;
}

// Oracle: canonical text of an SP graph, flattened and sorted without the
// library's own normal form.
inline std::string oracle_text(const G& g);

namespace oracle {

struct Term {
  char kind;  // 'e', 'S', 'P'
  std::string label;
  std::vector<Term> parts;
};

inline Term normal(Term t) {
  if (t.kind == 'e') return t;
  std::vector<Term> flat;
  for (auto& p : t.parts) {
    auto n = normal(std::move(p));
    if (n.kind == t.kind) {
      for (auto& q : n.parts) flat.push_back(std::move(q));
    } else {
      flat.push_back(std::move(n));
    }
  }
  if (flat.size() == 1) return flat.front();
  t.parts = std::move(flat);
  return t;
}

inline std::string text(const Term& t) {
  if (t.kind == 'e') return t.label;
  std::vector<std::string> parts;
  for (const auto& p : t.parts) parts.push_back(text(p));
  if (t.kind == 'P') std::sort(parts.begin(), parts.end());
  std::string out(1, t.kind);
  out += '(';
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
  return out + ')';
}

inline Term term_of(const G& g) {
  if (g.is_simple()) return {'e', g.label(), {}};
  Term t{g.kind() == Composition::sequential ? 'S' : 'P', {}, {}};
  for (const auto& c : g.children()) t.parts.push_back(term_of(c));
  return t;
}

// Semantics by brute force over terms, independent of the library's set lifting.
inline std::vector<Term> semantics(const T& t) {
  if (t.is_leaf()) return {{'e', t.label(), {}}};
  std::vector<std::vector<Term>> kids;
  for (const auto& c : t.children()) kids.push_back(semantics(c));
  if (*t.op() == Op::OR) {
    std::vector<Term> out;
    for (auto& k : kids) out.insert(out.end(), k.begin(), k.end());
    return out;
  }
  const char kind = *t.op() == Op::AND ? 'P' : 'S';
  std::vector<Term> acc{{kind, {}, {}}};
  for (const auto& k : kids) {
    std::vector<Term> next;
    for (const auto& a : acc)
      for (const auto& b : k) {
        auto c = a;
        c.parts.push_back(b);
        next.push_back(std::move(c));
      }
    acc = std::move(next);
  }
  return acc;
}

}  // namespace oracle

inline std::string oracle_text(const G& g) { return oracle::text(oracle::normal(oracle::term_of(g))); }

inline std::set<std::string> oracle_texts(const GSet& s) {
  std::set<std::string> out;
  for (const auto& g : s) out.insert(oracle_text(g));
  return out;
}

inline std::set<std::string> oracle_semantics(const T& t) {
  std::set<std::string> out;
  for (auto& term : oracle::semantics(t)) out.insert(oracle::text(oracle::normal(std::move(term))));
  return out;
}

// Random SP graph with exactly `edges` edges over labels drawn from `alphabet`.
inline G random_graph(std::mt19937& rng, std::size_t edges, const std::vector<std::string>& alphabet) {
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  if (edges == 1) return e(alphabet[pick(rng)]);
  std::uniform_int_distribution<std::size_t> cut(1, edges - 1);
  const auto left = cut(rng);
  const auto kind = std::bernoulli_distribution(0.5)(rng) ? Composition::sequential : Composition::parallel;
  return G::compose(kind, {random_graph(rng, left, alphabet), random_graph(rng, edges - left, alphabet)});
}

// Every graph obtainable by composing a contiguous run of a sequence's
// factors or a sub-multiset of a parallel graph's factors, recursively.
inline void subgraphs(const G& g, GSet& out) {
  if (!out.insert(g).second) return;
  if (g.is_simple()) return;
  const auto d = decompose(g);
  const auto n = d.factors.size();
  for (const auto& f : d.factors) subgraphs(f, out);
  if (d.kind == Composition::sequential) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j <= n; ++j)
        subgraphs(G::compose(d.kind, std::vector<G>(d.factors.begin() + i, d.factors.begin() + j)), out);
  } else {
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
      std::vector<G> parts;
      for (std::size_t k = 0; k < n; ++k)
        if (mask >> k & 1) parts.push_back(d.factors[k]);
      subgraphs(G::compose(d.kind, parts), out);
    }
  }
}

struct GenericInstance {
  TableRelation<std::string> relation;
  GSet attacks;
};

// Up to 5 attacks with up to 4 edges each over {a, b, c, d}. Goals: the four
// edge labels, "top" (every universe graph) and up to three random goals, so at
// most 8 goals. The universe is closed under subgraphs.
inline GenericInstance random_generic_instance(std::mt19937& rng) {
  const std::vector<std::string> alphabet{"a", "b", "c", "d"};
  std::uniform_int_distribution<std::size_t> n_attacks(1, 5), n_edges(1, 4), n_extra(0, 3);
  GSet attacks;
  const auto target = n_attacks(rng);
  while (attacks.size() < target) attacks.insert(random_graph(rng, n_edges(rng), alphabet));

  GSet closure;
  for (const auto& g : attacks) subgraphs(g, closure);
  for (const auto& a : alphabet) closure.insert(e(a));
  std::vector<G> universe(closure.begin(), closure.end());

  std::set<std::string> goals(alphabet.begin(), alphabet.end());
  goals.insert("top");
  std::vector<std::pair<std::size_t, std::string>> sat;
  for (std::size_t i = 0; i < universe.size(); ++i) {
    sat.emplace_back(i, "top");
    if (universe[i].is_simple()) sat.emplace_back(i, universe[i].label());
  }
  const auto extra = n_extra(rng);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t k = 0; k < extra; ++k) {
    const std::string goal = "g" + std::to_string(k);
    goals.insert(goal);
    for (std::size_t i = 0; i < universe.size(); ++i)
      if (coin(rng)) sat.emplace_back(i, goal);
  }
  return {TableRelation<std::string>(goals, universe, sat), attacks};
}

// Random SoP expression over {a, b, c, d}: up to 6 cubes of length 1 to 4.
template <class Rng>
SopExpression<std::string> random_sop(Rng& rng, ProductMode mode) {
  const std::vector<std::string> alphabet{"a", "b", "c", "d"};
  std::uniform_int_distribution<std::size_t> n_cubes(1, 6), len(1, 4), pick(0, alphabet.size() - 1);
  std::vector<Cube<std::string>> cubes;
  const auto n = n_cubes(rng);
  for (std::size_t i = 0; i < n; ++i) {
    Cube<std::string> c;
    const auto l = len(rng);
    for (std::size_t k = 0; k < l; ++k) c.push_back(alphabet[pick(rng)]);
    cubes.push_back(std::move(c));
  }
  return {mode, std::move(cubes)};
}

// Oracle: distributes a factor chain by hand and returns the cube set.
inline std::set<std::vector<std::string>> oracle_expand(const Factorisation<std::string>& fac, ProductMode mode) {
  std::set<std::vector<std::string>> acc;
  bool first = true;
  for (const auto& f : fac.factors) {
    std::set<std::vector<std::string>> next;
    for (const auto& y : f.cubes()) {
      if (first) {
        next.insert(y);
        continue;
      }
      for (const auto& x : acc) {
        auto c = x;
        c.insert(c.end(), y.begin(), y.end());
        if (mode == ProductMode::commutative) std::sort(c.begin(), c.end());
        next.insert(std::move(c));
      }
    }
    acc = std::move(next);
    first = false;
  }
  if (fac.remainder) acc.insert(fac.remainder->cubes().begin(), fac.remainder->cubes().end());
  return acc;
}

// Random ground transition system over nullary predicates q0..q{n-1}, n <= 8.
// Rules may remove predicates. Returns nothing useful when no path exists;
// callers retry.
inline KripkeSystem random_system(std::mt19937& rng) {
  std::uniform_int_distribution<std::size_t> n_preds(3, 8), n_rules(2, 6), n_small(0, 2), n_pos(1, 2);
  const auto n = n_preds(rng);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  auto q = [](std::size_t i) { return Predicate{"q" + std::to_string(i), {}}; };

  KripkeSystem sys;
  for (std::size_t i = 0, k = n_pos(rng); i < k; ++i) sys.initial.facts.insert(q(pick(rng)));
  const auto rules = n_rules(rng);
  for (std::size_t r = 0; r < rules; ++r) {
    TransitionRule rule;
    rule.name = "r" + std::to_string(r);
    rule.action = {rule.name, {}};
    for (std::size_t i = 0, k = n_small(rng); i < k; ++i) rule.premises.push_back(q(pick(rng)));
    for (std::size_t i = 0, k = n_pos(rng); i < k; ++i) rule.additions.push_back(q(pick(rng)));
    for (std::size_t i = 0, k = n_small(rng) / 2; i <= k && std::bernoulli_distribution(0.4)(rng); ++i)
      rule.removals.push_back(q(pick(rng)));
    sys.rules.push_back(std::move(rule));
  }
  sys.breach.push_back(q(pick(rng)));
  return sys;
}

}  // namespace fixtures
