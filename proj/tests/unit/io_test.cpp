#include <gtest/gtest.h>

#include <random>
#include <regex>

#include "atgen/expression.hpp"
#include "atgen/pipeline.hpp"
#include "atgen/render.hpp"
#include "atgen/serialization.hpp"
#include "support/fixtures.hpp"

using namespace atgen;
using namespace fixtures;

namespace {

std::size_t count_matches(const std::string& text, const std::string& pattern) {
  const std::regex re(pattern);
  return static_cast<std::size_t>(std::distance(std::sregex_iterator(text.begin(), text.end(), re), std::sregex_iterator()));
}

}  // namespace

TEST(Json, ParseErrorsCarryPosition) {
  try {
    (void)parse_json("{\n  \"a\": 1,\n  \"b\": ]\n}");
    FAIL() << "expected a parse error";
  } catch (const parse_error& ex) {
    EXPECT_EQ(ex.line(), 3u);
    EXPECT_EQ(ex.column(), 8u);
  }
}

TEST(Json, GraphRoundTrip) {
  std::mt19937 rng(3);
  const std::vector<std::string> alphabet{"a", "b", "c"};
  for (int i = 0; i < 200; ++i) {
    const auto g = random_graph(rng, 1 + i % 5, alphabet);
    EXPECT_EQ(graph_from_json<std::string>(parse_json(to_json(g).dump())), g);
  }
  EXPECT_THROW((void)graph_from_json<std::string>(parse_json(R"({"seq": []})")), parse_error);
  EXPECT_THROW((void)graph_from_json<std::string>(parse_json(R"({"loop": 1})")), parse_error);
}

TEST(Json, LtsGraphKeepsEndpoints) {
  const auto set = explore(network_system());
  for (const auto& g : set.relation.universe()) {
    const auto back = graph_from_json<StepDelta>(parse_json(to_json(g).dump()));
    EXPECT_EQ(back, g);
    EXPECT_EQ(back.endpoints(), g.endpoints());
  }
}

TEST(Json, TreeRoundTrip) {
  const auto t = access_tree();
  EXPECT_EQ(tree_from_json<std::string>(to_json(t)), t);
  EXPECT_EQ(tree_from_json<std::string>(parse_json(read_data("access_tree.json"))), t);
  const auto lts = generate_from_system(network_system());
  EXPECT_EQ(tree_from_json<StepDelta>(parse_json(to_json(lts).dump())), lts);
  EXPECT_THROW((void)tree_from_json<std::string>(parse_json(R"({"label": "a", "op": "XOR", "children": [{"label": "b"}]})")),
               parse_error);
  EXPECT_THROW((void)tree_from_json<std::string>(parse_json(R"({"label": "a", "op": "OR", "children": []})")),
               parse_error);
}

TEST(Json, RelationFixtureMatchesHandBuiltRelation) {
  const auto from_file = relation_from_json(parse_json(read_data("access_goals.json")));
  const auto by_hand = access_relation();
  EXPECT_EQ(from_file.goals(), by_hand.goals());
  EXPECT_EQ(from_file.universe(), by_hand.universe());
  for (const auto& goal : by_hand.goals()) EXPECT_EQ(attacks(from_file, goal), attacks(by_hand, goal));
  EXPECT_EQ(attacks_from_json<std::string>(parse_json(read_data("access_attacks.json"))), access_attacks());

  const auto again = relation_from_json(to_json(by_hand));
  for (const auto& goal : by_hand.goals()) EXPECT_EQ(attacks(again, goal), attacks(by_hand, goal));
}

TEST(Json, SystemRoundTrip) {
  const auto sys = network_system();
  const auto back = system_from_json(parse_json(to_json(sys).dump()));
  EXPECT_EQ(back.sorts, sys.sorts);
  EXPECT_EQ(back.initial, sys.initial);
  EXPECT_EQ(back.breach, sys.breach);
  ASSERT_EQ(back.rules.size(), sys.rules.size());
  for (std::size_t i = 0; i < sys.rules.size(); ++i) {
    EXPECT_EQ(back.rules[i].name, sys.rules[i].name);
    EXPECT_EQ(back.rules[i].vars, sys.rules[i].vars);
    EXPECT_EQ(back.rules[i].premises, sys.rules[i].premises);
    EXPECT_EQ(back.rules[i].action, sys.rules[i].action);
    EXPECT_EQ(back.rules[i].additions, sys.rules[i].additions);
    EXPECT_EQ(back.rules[i].removals, sys.rules[i].removals);
  }
}

TEST(Json, SystemAcceptsBareVariableNames) {
  const auto sys = system_from_json(parse_json(R"json({
    "sorts": {"Users": ["u"]}, "initial": [],
    "rules": [{"name": "r", "vars": {"x": "Users"}, "premises": [], "action": "r(?x)", "add": [{"p": "seen", "args": ["?x"]}]}],
    "breach": [{"p": "seen", "args": ["u"]}]})json"));
  EXPECT_EQ(sys.rules.front().vars.count("?x"), 1u);
  EXPECT_EQ(enumerate_paths(sys, 2, 10).size(), 1u);
}

TEST(Json, SystemRejectsUndeclaredConstants) {
  EXPECT_THROW((void)system_from_json(parse_json(R"({"sorts": {}, "initial": [{"p": "k", "args": ["zed"]}],
                                                     "rules": [], "breach": []})")),
               parse_error);
  EXPECT_THROW((void)system_from_json(parse_json(R"({"sorts": {}})")), parse_error);
}

TEST(Json, PathsRoundTrip) {
  for (const auto& p : enumerate_paths(network_system(), 3, 100)) {
    const auto back = path_from_json(parse_json(to_json(p).dump()));
    EXPECT_EQ(back.states, p.states);
    ASSERT_EQ(back.steps.size(), p.steps.size());
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
      EXPECT_EQ(back.steps[i].action, p.steps[i].action);
      EXPECT_EQ(back.steps[i].delta, p.steps[i].delta);
    }
  }
}

TEST(Json, Deterministic) {
  EXPECT_EQ(to_json(generate_from_system(network_system())).dump(2),
            to_json(generate_from_system(network_system())).dump(2));
}

TEST(Expression, ParseAndFormat) {
  const auto e = parse_expression("a.a.a + b.a.a + a.b.b + b.b.b", ProductMode::non_commutative);
  EXPECT_EQ(e.size(), 4u);
  EXPECT_EQ(format_factorisation(exp_factorise(e)), "(a + b).(a.a + b.b)");
  EXPECT_EQ(format_factorisation(exp_factorise(parse_expression("a.a.a + b.a.a + a.b.b + b.b.b",
                                                                ProductMode::commutative))),
            "(a + b).(a + b).(a + b)");
  EXPECT_EQ(format_factorisation(exp_factorise(parse_expression("a", ProductMode::commutative))), "a");
  EXPECT_EQ(parse_expression("(a + b).c", ProductMode::non_commutative),
            parse_expression("a.c + b.c", ProductMode::non_commutative));
}

TEST(Expression, ParseErrors) {
  for (const char* bad : {"", "a +", "a . . b", "(a + b", "a b", "a + #"}) {
    EXPECT_THROW((void)parse_expression(bad, ProductMode::commutative), parse_error) << bad;
  }
  try {
    (void)parse_expression("a + +b", ProductMode::commutative);
  } catch (const parse_error& ex) {
    EXPECT_EQ(ex.column(), 5u);
  }
}

TEST(Expression, OutputReparses) {
  std::mt19937 rng(21);
  for (auto mode : {ProductMode::commutative, ProductMode::non_commutative}) {
    for (int i = 0; i < 300; ++i) {
      const auto f = random_sop(rng, mode);
      EXPECT_EQ(parse_expression(format_expression(f), mode), f);
      EXPECT_EQ(parse_expression(format_factorisation(exp_factorise(f)), mode), f);
    }
  }
}

TEST(Render, RunningExampleDot) {
  const auto dot = to_dot(access_tree());
  EXPECT_EQ(count_matches(dot, R"(\n  n\d+ \[label=)"), 8u);
  EXPECT_EQ(count_matches(dot, R"(comment="SAND")"), 2u);
  EXPECT_EQ(count_matches(dot, R"(comment="OR")"), 1u);
  EXPECT_NE(dot.find(R"(n0 [label="access", shape=cds, comment="SAND"])"), std::string::npos);
  EXPECT_NE(dot.find(R"(n1 [label="credential", shape=ellipse, comment="OR"])"), std::string::npos);
  EXPECT_NE(dot.find(R"(n2 [label="eu", shape=cds, comment="SAND"])"), std::string::npos);
  EXPECT_EQ(count_matches(dot, R"(comment="arrow")"), 4u);
  EXPECT_EQ(count_matches(dot, R"(comment="arc")"), 0u);
}

TEST(Render, AndUsesArcs) {
  const auto dot = to_dot(node("g", Op::AND, {leaf("a"), leaf("b")}));
  EXPECT_EQ(count_matches(dot, R"(comment="arc")"), 2u);
}

TEST(Render, LeafIsSingleNode) {
  const auto dot = to_dot(leaf("a"));
  EXPECT_EQ(count_matches(dot, R"(\n  n\d+ \[label=)"), 1u);
  EXPECT_EQ(dot.find("->"), std::string::npos);
}

TEST(Render, NetworkTreeNodeCount) {
  const auto dot = to_dot(generate_from_system(network_system()));
  EXPECT_EQ(count_matches(dot, R"(\n  n\d+ \[label=)"), 8u);
  EXPECT_NE(dot.find(R"x(label="({}, {located(mallory,server)})")x"), std::string::npos);
}

TEST(Render, Outline) {
  EXPECT_EQ(to_outline(access_tree()),
            "access [SAND]\n"
            "  credential [OR]\n"
            "    eu [SAND]\n"
            "      w\n"
            "      ec\n"
            "    b\n"
            "    x\n"
            "  l\n");
}

TEST(Render, GraphText) {
  EXPECT_EQ(graph_text(seq({e("b"), e("l")})), "b·l");
  EXPECT_EQ(graph_text(par({seq({e("a"), e("b")}), e("c")})), "c ∥ (a·b)");
  EXPECT_EQ(to_dot(leaf("say \"hi\"")).find(R"(label="say \"hi\"")") != std::string::npos, true);
}
