#include <gtest/gtest.h>

#include "anycsp/cvgraph.hpp"
#include "fixtures.hpp"

using namespace anycsp;

TEST(Build, ExampleInstanceCounts) {
    const CspInstance inst = fixtures::example_instance();
    const CvGraph g = build_graph(inst);
    EXPECT_EQ(g.num_values, 7);
    EXPECT_EQ(g.value_var.size(), 7u);            // one variable edge per value
    EXPECT_EQ(g.edge_value.size(), 9u);           // 5 + 4 constraint edges
    EXPECT_EQ(g.cons_edge_offset[1] - g.cons_edge_offset[0], 5);
    EXPECT_EQ(g.cons_edge_offset[2] - g.cons_edge_offset[1], 4);
}

TEST(Build, NoConstraints) {
    CspInstance inst;
    inst.vars = {{"a", {0, 1, 2, 3}}};
    const CvGraph g = build_graph(inst);
    EXPECT_EQ(g.num_values, 4);
    EXPECT_EQ(g.edge_value.size(), 0u);
}

TEST(Build, TernaryConstraintEdgeCount) {
    CspInstance inst;
    inst.vars = {{"a", {0, 1}}, {"b", {0, 1}}, {"c", {0, 1}}};
    Constraint c;
    c.scope = {0, 1, 2};
    c.kind = ConstraintKind::AllDifferent;
    inst.constraints = {c};
    const CvGraph g = build_graph(inst);
    EXPECT_EQ(g.edge_value.size(), 6u);  // sum of scope domain sizes
}

TEST(Relabel, ExampleInstanceLabels) {
    const CspInstance inst = fixtures::example_instance();
    CvGraph g = build_graph(inst);
    relabel(g, inst, {1, 0, 1});  // alpha = (2, 1, 2)
    const std::vector<uint8_t> lv(g.label_value.begin(), g.label_value.end());
    EXPECT_EQ(lv, (std::vector<uint8_t>{0, 1, 0, 1, 0, 0, 1}));
    const std::vector<uint8_t> le(g.label_edge.begin(), g.label_edge.end());
    // C1 over (X,1),(X,2),(X,3),(Y,1),(Y,2) then C2 over (Y,1),(Y,2),(Z,1),(Z,2)
    EXPECT_EQ(le, (std::vector<uint8_t>{1, 0, 0, 0, 1, 1, 0, 0, 1}));
}

TEST(Relabel, ExtensionalEncodingMatches) {
    const CspInstance a = fixtures::example_instance();
    const CspInstance b = fixtures::example_instance_extensional();
    CvGraph ga = build_graph(a);
    CvGraph gb = build_graph(b);
    for (const auto& asg : fixtures::all_assignments(a)) {
        relabel(ga, a, asg);
        relabel(gb, b, asg);
        EXPECT_EQ(ga.label_edge, gb.label_edge);
    }
}

TEST(Relabel, UnaryConstraintIndependentOfAssignment) {
    CspInstance inst;
    inst.vars = {{"a", {0, 1, 2}}, {"b", {0, 1}}};
    Constraint c;
    c.scope = {0};
    c.kind = ConstraintKind::ExtensionAllowed;
    c.tuples = {{0}, {2}};
    inst.constraints = {c};
    CvGraph g = build_graph(inst);
    for (const auto& a : fixtures::all_assignments(inst)) {
        relabel(g, inst, a);
        EXPECT_EQ(g.label_edge, (std::vector<uint8_t>{1, 0, 1}));
    }
}

TEST(Relabel, MatchesOracleOnRandomInstances) {
    Rng rng(101);
    for (int rep = 0; rep < 1000; ++rep) {
        const CspInstance inst = fixtures::random_instance(rng);
        CvGraph g = build_graph(inst);
        const Assignment a = uniform_assignment(inst, rng);
        relabel(g, inst, a);
        EXPECT_EQ(g.label_edge, fixtures::oracle_edge_labels(inst, g, a))
            << "instance rep " << rep;
    }
}

TEST(Relabel, VertexLabelSums) {
    Rng rng(55);
    for (int rep = 0; rep < 50; ++rep) {
        const CspInstance inst = fixtures::random_instance(rng);
        CvGraph g = build_graph(inst);
        relabel(g, inst, uniform_assignment(inst, rng));
        int total = 0;
        for (uint8_t l : g.label_value) total += l;
        EXPECT_EQ(total, inst.num_vars());
        for (int x = 0; x < g.num_vars; ++x) {
            int per_var = 0;
            for (int i = g.var_offset[x]; i < g.var_offset[x + 1]; ++i)
                per_var += g.label_value[i];
            EXPECT_EQ(per_var, 1);
        }
    }
}

TEST(Relabel, IdempotentAndStateless) {
    Rng rng(77);
    const CspInstance inst = fixtures::random_instance(rng);
    CvGraph g1 = build_graph(inst);
    CvGraph g2 = build_graph(inst);
    const Assignment a = uniform_assignment(inst, rng);
    const Assignment b = uniform_assignment(inst, rng);
    relabel(g1, inst, b);  // stale state
    relabel(g1, inst, a);
    relabel(g1, inst, a);
    relabel(g2, inst, a);
    EXPECT_EQ(g1.label_edge, g2.label_edge);
    EXPECT_EQ(g1.label_value, g2.label_value);
}

// A constraint is satisfied iff every scope variable's assigned value carries
// edge label 1.
TEST(Relabel, SatisfiedIffAssignedEdgesLabeled) {
    Rng rng(91);
    for (int rep = 0; rep < 200; ++rep) {
        const CspInstance inst = fixtures::random_instance(rng);
        CvGraph g = build_graph(inst);
        const Assignment a = uniform_assignment(inst, rng);
        relabel(g, inst, a);
        for (int ci = 0; ci < inst.num_constraints(); ++ci) {
            bool all_on = true;
            for (int e = g.cons_edge_offset[ci]; e < g.cons_edge_offset[ci + 1]; ++e) {
                const int v = g.edge_value[e];
                if (g.label_value[v] && !g.label_edge[e]) all_on = false;
            }
            EXPECT_EQ(all_on, satisfies(inst, inst.constraints[ci], a));
        }
    }
}

TEST(EquivalentEncodings, ExhaustiveSmallInstance) {
    Rng rng(13);
    CspInstance inst;
    inst.vars = {{"a", {0, 1}}, {"b", {0, 1, 2}}};
    Constraint c;
    c.scope = {0, 1};
    c.kind = ConstraintKind::ExtensionAllowed;
    c.tuples = {{0, 0}, {1, 2}};
    inst.constraints = {c};
    EXPECT_TRUE(equivalent_encodings_check(inst, 64, rng));
}

TEST(EquivalentEncodings, EmptyRelation) {
    Rng rng(14);
    CspInstance inst;
    inst.vars = {{"a", {0, 1}}, {"b", {0, 1}}};
    Constraint c;
    c.scope = {0, 1};
    c.kind = ConstraintKind::ExtensionAllowed;
    inst.constraints = {c};
    EXPECT_TRUE(equivalent_encodings_check(inst, 16, rng));
}

TEST(EquivalentEncodings, SatClauseBothEncodings) {
    Rng rng(15);
    for (int k = 1; k <= 4; ++k) {
        CspInstance inst;
        for (int x = 0; x < k; ++x)
            inst.vars.push_back({"x" + std::to_string(x), {0, 1}});
        Constraint c;
        c.kind = ConstraintKind::ExtensionForbidden;
        for (int x = 0; x < k; ++x) c.scope.push_back(x);
        c.tuples.push_back(std::vector<int>(k, 0));
        inst.constraints = {c};
        EXPECT_TRUE(equivalent_encodings_check(inst, 1 << k, rng));
    }
}
