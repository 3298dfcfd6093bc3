#include <abemin/formula.hpp>
#include <abemin/parser.hpp>

#include <gtest/gtest.h>

#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <unordered_map>

using namespace abemin;

namespace {

NodePtr L(const char* name) { return Node::leaf(name); }

} // namespace

TEST(Formula, LeafHasUnitCost) {
  const Formula f = Formula::leaf("A");
  EXPECT_EQ(f.cost(), 1U);
  EXPECT_EQ(f.node_count(), 1U);
  EXPECT_EQ(to_string(f), "A");
}

TEST(Formula, EmptyAttributeRejected) { EXPECT_THROW(Node::leaf(""), std::invalid_argument); }

TEST(Formula, GateFlattensSameKindChildren) {
  const NodePtr inner = Node::gate(NodeKind::And, {L("A"), L("B")});
  const NodePtr outer = Node::gate(NodeKind::And, {inner, L("C")});
  EXPECT_EQ(outer->children().size(), 3U);
  EXPECT_EQ(outer->cost(), 3U);
}

TEST(Formula, GateRemovesDuplicateChildren) {
  const NodePtr g = Node::gate(NodeKind::Or, {L("A"), L("A"), L("B")});
  EXPECT_EQ(g->cost(), 2U);
}

TEST(Formula, SingleChildGateCollapses) {
  const NodePtr g = Node::gate(NodeKind::Or, {L("A"), L("A")});
  EXPECT_TRUE(g->is_leaf());
  EXPECT_EQ(g->attribute(), "A");
}

TEST(Formula, EqualityIgnoresOrderAndGrouping) {
  const Formula a = parse_formula("(A & B) | (C & (D | E))");
  const Formula b = parse_formula("((E | D) & C) | (B & A)");
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.hash(), b.hash());
  const Formula c = parse_formula("A & (B & C)");
  const Formula d = parse_formula("(A & B) & C");
  EXPECT_EQ(c, d);
}

TEST(Formula, DifferentStructuresDiffer) {
  EXPECT_FALSE(parse_formula("A & (B | C)") == parse_formula("(A & B) | C"));
  EXPECT_FALSE(parse_formula("A & B") == parse_formula("A | B"));
}

TEST(Formula, CostCountsLiteralOccurrences) {
  const Formula f = parse_formula("(In1 & In2) | (In2 & In3)");
  EXPECT_EQ(f.cost(), 4U);
  EXPECT_EQ(cost(f), 4U);
  const auto counts = literal_counts(f);
  EXPECT_EQ(counts.at("In1"), 1U);
  EXPECT_EQ(counts.at("In2"), 2U);
  EXPECT_EQ(counts.at("In3"), 1U);
}

TEST(Formula, PrintsLeavesBeforeGates) {
  EXPECT_EQ(to_string(parse_formula("In2 & (In1 | In3)")), "(In2 & (In1 | In3))");
  EXPECT_EQ(to_string(parse_formula("(In1 | In3) & In2")), "(In2 & (In1 | In3))");
  EXPECT_EQ(to_string(parse_formula("(B & C) | A")), "(A | (B & C))");
}

TEST(Formula, AttributesAreSortedAndDistinct) {
  const auto u = parse_formula("(b & a) | (c & a)").attributes();
  ASSERT_EQ(u.size(), 3U);
  EXPECT_EQ(u.names()[0], "a");
  EXPECT_EQ(u.names()[2], "c");
  EXPECT_EQ(u.index_of("b"), 1U);
  EXPECT_FALSE(u.contains("d"));
}

TEST(Formula, EvaluateFollowsTruthTables) {
  const Formula f = parse_formula("A & (B | C)");
  EXPECT_TRUE(evaluate(f, {{"A", true}, {"B", false}, {"C", true}}));
  EXPECT_FALSE(evaluate(f, {{"A", false}, {"B", true}, {"C", true}}));
  EXPECT_FALSE(evaluate(f, {{"A", true}, {"B", false}, {"C", false}}));
}

TEST(Formula, EvaluateRequiresEveryAttribute) {
  const Formula f = parse_formula("A | B");
  EXPECT_THROW(evaluate(f, {{"A", true}}), MissingAttributeError);
  try {
    evaluate(f, {{"A", true}});
  } catch (const MissingAttributeError& e) {
    EXPECT_EQ(e.attribute(), "B");
  }
}

TEST(Formula, EvaluateIsMonotone) {
  Rng rng(11);
  for (int n = 0; n < 200; ++n) {
    const Formula f = support::random_formula(rng, 5);
    const auto u = f.attributes();
    const std::vector<std::string> names(u.names().begin(), u.names().end());
    std::vector<bool> table;
    support::for_each_assignment(names, [&](const Assignment& a) {
      table.push_back(evaluate(f, a));
      return true;
    });
    for (std::size_t bits = 0; bits < table.size(); ++bits) {
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (table[bits] && !table[bits | (std::size_t{1} << i)]) {
          FAIL() << "raising " << names[i] << " lowered " << to_string(f);
        }
      }
    }
  }
}

TEST(Formula, CostEqualsLeafCountOfTree) {
  Rng rng(12);
  for (int n = 0; n < 500; ++n) {
    const Formula f = support::random_formula(rng, 8, 5, 4);
    std::uint64_t total = 0;
    for (const auto& [name, count] : literal_counts(f)) {
      total += count;
    }
    EXPECT_EQ(total, f.cost());
  }
}

TEST(Formula, NormalizationInvariantsHold) {
  Rng rng(13);
  for (int n = 0; n < 500; ++n) {
    const Formula f = support::random_formula(rng, 6, 5, 4);
    std::vector<const Node*> gates;
    support::collect_gates(f.root(), gates);
    for (const Node* g : gates) {
      ASSERT_GE(g->children().size(), 2U);
      for (std::size_t i = 0; i < g->children().size(); ++i) {
        EXPECT_NE(g->child(i).kind(), g->kind());
        if (i > 0) {
          EXPECT_LT(compare(g->child(i - 1), g->child(i)), 0);
        }
      }
    }
  }
}

TEST(Formula, HashCollisionCensus) {
  Rng rng(14);
  std::unordered_map<std::uint64_t, NodePtr> seen;
  std::size_t collisions = 0;
  for (int n = 0; n < 100000; ++n) {
    const Formula f = support::random_formula(rng, 8, 4, 4);
    const auto [it, inserted] = seen.emplace(f.hash(), f.root_ptr());
    if (!inserted && !structurally_equal(*it->second, f.root())) {
      ++collisions;
    }
  }
  EXPECT_EQ(collisions, 0U);
  EXPECT_GT(seen.size(), 10000U);
}
