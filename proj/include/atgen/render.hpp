#pragma once

// Graphviz and plain-text renderings of attack trees.

#include <cstddef>
#include <sstream>
#include <string>

#include "atgen/attack_tree.hpp"
#include "atgen/kripke.hpp"
#include "atgen/sp_graph.hpp"

namespace atgen {

inline std::string label_text(const std::string& s) { return s; }
inline std::string label_text(const StepDelta& d) { return to_string(d); }

/// Infix text of an SP graph: "·" for sequence, " ∥ " for parallel.
template <class Label>
std::string graph_text(const SPGraph<Label>& g) {
  if (g.is_simple()) return label_text(g.label());
  const bool par = g.kind() == Composition::parallel;
  std::string out;
  for (const auto& c : g.children()) {
    if (!out.empty()) out += par ? " ∥ " : "·";
    const bool wrap = !c.is_simple();
    out += wrap ? "(" + graph_text(c) + ")" : graph_text(c);
  }
  return out;
}

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

inline const char* dot_shape(const std::optional<Op>& op) {
  if (!op) return "box";
  switch (*op) {
    case Op::OR: return "ellipse";
    case Op::AND: return "trapezium";
    case Op::SAND: return "cds";
  }
  return "box";
}

template <class Label>
std::size_t emit_dot(const AttackTree<Label>& t, std::size_t& next_id, std::ostringstream& out) {
  const auto id = next_id++;
  out << "  n" << id << " [label=\"" << dot_escape(label_text(t.label())) << "\", shape=" << dot_shape(t.op())
      << ", comment=\"" << (t.op() ? to_string(*t.op()) : std::string_view("leaf")) << "\"];\n";
  std::size_t position = 0;
  for (const auto& c : t.children()) {
    const auto child = emit_dot(c, next_id, out);
    out << "  n" << id << " -> n" << child;
    switch (*t.op()) {
      case Op::OR: out << " [arrowhead=none];\n"; break;
      case Op::AND: out << " [arrowhead=none, style=bold, comment=\"arc\"];\n"; break;
      case Op::SAND:
        out << " [arrowhead=normal, style=bold, taillabel=\"" << ++position << "\", comment=\"arrow\"];\n";
        break;
    }
  }
  return id;
}

template <class Label>
void emit_outline(const AttackTree<Label>& t, std::size_t depth, std::ostringstream& out) {
  out << std::string(2 * depth, ' ') << label_text(t.label());
  if (t.op()) out << " [" << to_string(*t.op()) << "]";
  out << '\n';
  for (const auto& c : t.children()) emit_outline(c, depth + 1, out);
}

}  // namespace detail

/// DOT digraph. Nodes are numbered in pre-order; children keep their order.
template <class Label>
std::string to_dot(const AttackTree<Label>& t) {
  std::ostringstream out;
  out << "digraph attack_tree {\n  ordering=out;\n  node [fontname=\"Helvetica\"];\n";
  std::size_t next_id = 0;
  detail::emit_dot(t, next_id, out);
  out << "}\n";
  return out.str();
}

/// Indented outline, two spaces per level, operator in brackets.
template <class Label>
std::string to_outline(const AttackTree<Label>& t) {
  std::ostringstream out;
  detail::emit_outline(t, 0, out);
  return out.str();
}

}  // namespace atgen
