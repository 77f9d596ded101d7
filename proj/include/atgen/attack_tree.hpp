#pragma once

// SAND attack trees: every node carries a goal label; inner nodes refine it
// with OR, AND (parallel) or SAND (sequential) over their children.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "atgen/error.hpp"
#include "atgen/sp_graph.hpp"

namespace atgen {

enum class Op { OR, AND, SAND };

inline std::string_view to_string(Op op) {
  switch (op) {
    case Op::OR: return "OR";
    case Op::AND: return "AND";
    case Op::SAND: return "SAND";
  }
  return "?";
}

inline std::optional<Op> parse_op(std::string_view s) {
  if (s == "OR") return Op::OR;
  if (s == "AND") return Op::AND;
  if (s == "SAND") return Op::SAND;
  return std::nullopt;
}

template <class Label>
class AttackTree {
public:
  using label_type = Label;

  static AttackTree leaf(Label label) { return AttackTree(std::move(label), std::nullopt, {}); }

  static AttackTree node(Label label, Op op, std::vector<AttackTree> children) {
    if (children.empty()) throw error("refinement node without children");
    return AttackTree(std::move(label), op, std::move(children));
  }

  const Label& label() const { return label_; }
  bool is_leaf() const { return !op_.has_value(); }
  const std::optional<Op>& op() const { return op_; }
  const std::vector<AttackTree>& children() const { return children_; }

  AttackTree relabelled(Label label) const {
    AttackTree t = *this;
    t.label_ = std::move(label);
    return t;
  }

  /// OR and AND children compare as multisets, SAND children as sequences.
  friend bool operator==(const AttackTree& a, const AttackTree& b) {
    return canonical_compare(a.canonical(), b.canonical()) == 0;
  }

  /// Copy with OR/AND children sorted recursively; a normal form for ==.
  AttackTree canonical() const {
    AttackTree t = *this;
    for (auto& c : t.children_) c = c.canonical();
    if (op_ && *op_ != Op::SAND)
      std::sort(t.children_.begin(), t.children_.end(),
                [](const AttackTree& x, const AttackTree& y) { return canonical_compare(x, y) < 0; });
    return t;
  }

private:
  AttackTree(Label label, std::optional<Op> op, std::vector<AttackTree> children)
      : label_(std::move(label)), op_(op), children_(std::move(children)) {}

  static std::strong_ordering canonical_compare(const AttackTree& a, const AttackTree& b) {
    if (auto c = a.label_ <=> b.label_; c != 0) return c;
    if (a.op_.has_value() != b.op_.has_value()) return a.op_.has_value() ? std::strong_ordering::greater
                                                                        : std::strong_ordering::less;
    if (a.op_) {
      if (auto c = *a.op_ <=> *b.op_; c != 0) return c;
    }
    return std::lexicographical_compare_three_way(a.children_.begin(), a.children_.end(), b.children_.begin(),
                                                  b.children_.end(), canonical_compare);
  }

  Label label_;
  std::optional<Op> op_;
  std::vector<AttackTree> children_;
};

template <class Label>
const Label& top(const AttackTree<Label>& t) {
  return t.label();
}

/// Number of nodes.
template <class Label>
std::size_t size(const AttackTree<Label>& t) {
  std::size_t n = 1;
  for (const auto& c : t.children()) n += size(c);
  return n;
}

/// All subtrees in pre-order, starting with `t` itself.
template <class Label>
std::vector<AttackTree<Label>> subtrees(const AttackTree<Label>& t) {
  std::vector<AttackTree<Label>> out;
  auto visit = [&out](const auto& self, const AttackTree<Label>& node) -> void {
    out.push_back(node);
    for (const auto& c : node.children()) self(self, c);
  };
  visit(visit, t);
  return out;
}

/// SP semantics: a leaf denotes its single-edge graph, OR is union, AND and
/// SAND are the set-lifted parallel and sequential compositions.
template <class Label>
SPGraphSet<Label> semantics(const AttackTree<Label>& t) {
  if (t.is_leaf()) return {SPGraph<Label>::leaf(t.label())};

  std::vector<SPGraphSet<Label>> parts;
  parts.reserve(t.children().size());
  for (const auto& c : t.children()) parts.push_back(semantics(c));

  switch (*t.op()) {
    case Op::OR: {
      SPGraphSet<Label> out;
      for (auto& p : parts) out.merge(p);
      return out;
    }
    case Op::AND: return set_lift_compose(Composition::parallel, parts);
    case Op::SAND: return set_lift_compose(Composition::sequential, parts);
  }
  return {};
}

template <class Label>
bool semantically_equal(const AttackTree<Label>& a, const AttackTree<Label>& b) {
  return semantics(a) == semantics(b);
}

}  // namespace atgen
