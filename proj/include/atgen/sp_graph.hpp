#pragma once

// Series-parallel graphs over an ordered edge-label type.
//
// Graphs are kept in associativity normal form: a sequential node never has a
// sequential child and a parallel node never has a parallel child. Parallel
// children are sorted, so structural equality coincides with SP equality.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "atgen/error.hpp"

namespace atgen {

enum class Composition { simple, sequential, parallel };

/// Per-label customisation point. `endpoint_type` is the metadata attached to
/// graphs derived from transition-system subpaths; the default carries nothing.
template <class Label>
struct label_traits {
  using endpoint_type = std::monostate;
};

template <class Label>
using endpoint_t = typename label_traits<Label>::endpoint_type;

template <class Label>
class SPGraph {
public:
  using label_type = Label;
  using endpoint_type = endpoint_t<Label>;
  using Endpoints = std::pair<endpoint_type, endpoint_type>;

  static SPGraph leaf(Label label, std::optional<Endpoints> endpoints = std::nullopt) {
    SPGraph g;
    g.node_ = std::make_shared<const Node>(Node{Composition::simple, std::move(label), {}});
    g.endpoints_ = std::move(endpoints);
    return g;
  }

  /// Flattened composition of `parts`. A single part is returned unchanged.
  static SPGraph compose(Composition kind, std::vector<SPGraph> parts) {
    if (parts.empty()) throw error("empty composition");
    if (kind == Composition::simple) throw error("cannot compose with the simple kind");
    if (parts.size() == 1) return std::move(parts.front());

    std::optional<Endpoints> endpoints;
    if (kind == Composition::sequential) endpoints = chained_endpoints(parts);

    std::vector<SPGraph> children;
    for (auto& p : parts) {
      if (p.kind() == kind) {
        children.insert(children.end(), p.node_->children.begin(), p.node_->children.end());
      } else {
        children.push_back(std::move(p));
      }
    }
    if (kind == Composition::parallel) std::sort(children.begin(), children.end());

    SPGraph g;
    g.node_ = std::make_shared<const Node>(Node{kind, std::nullopt, std::move(children)});
    g.endpoints_ = std::move(endpoints);
    return g;
  }

  Composition kind() const { return node_->kind; }
  bool is_simple() const { return node_->kind == Composition::simple; }

  const Label& label() const {
    if (!is_simple()) throw error("label() called on a composite SP graph");
    return *node_->label;
  }

  std::span<const SPGraph> children() const { return node_->children; }

  const std::optional<Endpoints>& endpoints() const { return endpoints_; }

  SPGraph with_endpoints(std::optional<Endpoints> endpoints) const {
    SPGraph g = *this;
    g.endpoints_ = std::move(endpoints);
    return g;
  }

  std::size_t edge_count() const {
    if (is_simple()) return 1;
    std::size_t n = 0;
    for (const auto& c : node_->children) n += c.edge_count();
    return n;
  }

  // Endpoint metadata does not take part in equality or ordering.
  friend bool operator==(const SPGraph& a, const SPGraph& b) { return compare(a, b) == 0; }
  friend std::strong_ordering operator<=>(const SPGraph& a, const SPGraph& b) { return compare(a, b); }

private:
  struct Node {
    Composition kind;
    std::optional<Label> label;
    std::vector<SPGraph> children;
  };

  SPGraph() = default;

  static std::strong_ordering compare(const SPGraph& a, const SPGraph& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = a.kind() <=> b.kind(); c != 0) return c;
    if (a.is_simple()) return *a.node_->label <=> *b.node_->label;
    const auto& x = a.node_->children;
    const auto& y = b.node_->children;
    return std::lexicographical_compare_three_way(x.begin(), x.end(), y.begin(), y.end(), compare);
  }

  static std::optional<Endpoints> chained_endpoints(const std::vector<SPGraph>& parts) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (!parts[i].endpoints_) return std::nullopt;
      if (i > 0 && !(parts[i - 1].endpoints_->second == parts[i].endpoints_->first)) return std::nullopt;
    }
    return Endpoints{parts.front().endpoints_->first, parts.back().endpoints_->second};
  }

  std::shared_ptr<const Node> node_;
  std::optional<Endpoints> endpoints_;
};

template <class Label>
using SPGraphSet = std::set<SPGraph<Label>>;

template <class Label>
SPGraph<Label> seq_compose(std::vector<SPGraph<Label>> parts) {
  return SPGraph<Label>::compose(Composition::sequential, std::move(parts));
}

template <class Label>
SPGraph<Label> par_compose(std::vector<SPGraph<Label>> parts) {
  return SPGraph<Label>::compose(Composition::parallel, std::move(parts));
}

template <class Label>
struct Decomposition {
  Composition kind;
  std::vector<SPGraph<Label>> factors;
};

/// Maximal top-level decomposition. Simple graphs decompose into themselves.
template <class Label>
Decomposition<Label> decompose(const SPGraph<Label>& g) {
  if (g.is_simple()) return {Composition::simple, {g}};
  auto cs = g.children();
  return {g.kind(), std::vector<SPGraph<Label>>(cs.begin(), cs.end())};
}

/// True unless the set mixes parallel-rooted and sequential-rooted graphs.
/// Simple graphs are compatible with both kinds.
template <class Label>
bool is_homogeneous(const SPGraphSet<Label>& s) {
  if (s.empty()) throw error("empty attack set");
  bool has_seq = false;
  bool has_par = false;
  for (const auto& g : s) {
    has_seq |= g.kind() == Composition::sequential;
    has_par |= g.kind() == Composition::parallel;
  }
  return !(has_seq && has_par);
}

/// Composition kind used to factorise a homogeneous set: parallel iff some
/// member is parallel-rooted.
template <class Label>
Composition homogeneous_kind(const SPGraphSet<Label>& s) {
  for (const auto& g : s)
    if (g.kind() == Composition::parallel) return Composition::parallel;
  return Composition::sequential;
}

/// Set-lifted composition over the Cartesian product of `sets`.
template <class Label>
SPGraphSet<Label> set_lift_compose(Composition kind, const std::vector<SPGraphSet<Label>>& sets) {
  if (sets.empty()) throw error("empty composition");
  for (const auto& s : sets)
    if (s.empty()) throw error("set-lifted composition of an empty set");

  std::vector<std::vector<SPGraph<Label>>> partial{{}};
  for (const auto& s : sets) {
    std::vector<std::vector<SPGraph<Label>>> next;
    next.reserve(partial.size() * s.size());
    for (const auto& prefix : partial) {
      for (const auto& g : s) {
        next.push_back(prefix);
        next.back().push_back(g);
      }
    }
    partial = std::move(next);
  }

  SPGraphSet<Label> out;
  for (auto& parts : partial) out.insert(SPGraph<Label>::compose(kind, std::move(parts)));
  return out;
}

}  // namespace atgen
