#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "anycsp/instances.hpp"
#include "fixtures.hpp"

using namespace anycsp;

namespace {

// Direct clause evaluation, independent of the CSP reduction.
int unsat_clauses(const Cnf& cnf, const std::vector<int>& assign /* 0/1 per var, 0-based */) {
    int bad = 0;
    for (const auto& cl : cnf.clauses) {
        bool sat = false;
        for (int l : cl) {
            const int v = std::abs(l) - 1;
            if ((l > 0 && assign[v] == 1) || (l < 0 && assign[v] == 0)) sat = true;
        }
        bad += !sat;
    }
    return bad;
}

Graph triangle() {
    Graph g;
    g.n = 3;
    g.edges = {{0, 1}, {0, 2}, {1, 2}};
    return g;
}

Graph petersen() {
    Graph g;
    g.n = 10;
    // outer 5-cycle, inner pentagram, spokes
    g.edges = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4},
               {5, 7}, {7, 9}, {6, 9}, {6, 8}, {5, 8},
               {0, 5}, {1, 6}, {2, 7}, {3, 8}, {4, 9}};
    return g;
}

}  // namespace

TEST(Generators, ErdosRenyiEdgeProbability) {
    Rng rng(1);
    const int n = 40;
    const int pairs = n * (n - 1) / 2;
    double total = 0.0;
    const int reps = 50;
    for (int i = 0; i < reps; ++i) {
        Graph g = gen_erdos_renyi(n, 0.3, rng);
        EXPECT_EQ(g.n, n);
        std::set<std::pair<int, int>> seen;
        for (auto [u, v] : g.edges) {
            EXPECT_LT(u, v);
            EXPECT_GE(u, 0);
            EXPECT_LT(v, n);
            EXPECT_TRUE(seen.insert({u, v}).second);
        }
        total += static_cast<double>(g.edges.size());
    }
    // mean density close to p (loose 4-sigma-ish bound)
    EXPECT_NEAR(total / (reps * pairs), 0.3, 0.02);
}

TEST(Generators, BarabasiAlbertShape) {
    Rng rng(2);
    Graph g = gen_barabasi_albert(50, 3, rng);
    EXPECT_EQ(g.n, 50);
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : g.edges) {
        EXPECT_LT(u, v);
        EXPECT_TRUE(seen.insert({u, v}).second);
    }
    // every vertex beyond the seed attaches with m edges
    EXPECT_GE(g.edges.size(), static_cast<size_t>(3 * (50 - 4)));
    auto adj = g.adjacency();
    for (int v = 0; v < g.n; ++v) EXPECT_GE(adj[v].size(), 1u);
}

TEST(Generators, GeometricRespectsRadius) {
    Rng rng(3);
    Graph g = gen_geometric(60, 0.25, rng);
    EXPECT_EQ(g.n, 60);
    for (auto [u, v] : g.edges) EXPECT_LT(u, v);
    // a radius-1.5 disk graph on the unit square is complete
    Graph full = gen_geometric(20, 1.5, rng);
    EXPECT_EQ(full.edges.size(), static_cast<size_t>(20 * 19 / 2));
}

TEST(ModelRb, ParameterFormulas) {
    RbParams p;
    p.k = 2;
    p.n = 30;
    p.alpha = 0.8;
    p.r = 1.6;
    p.p = 0.25;
    EXPECT_EQ(p.domain_size(), static_cast<int>(std::lround(std::pow(30.0, 0.8))));
    EXPECT_EQ(p.constraint_count(), static_cast<int>(std::lround(1.6 * 30 * std::log(30.0))));
    EXPECT_EQ(p.forbidden_count(),
              std::llround(0.25 * std::pow(static_cast<double>(p.domain_size()), 2)));
    EXPECT_NEAR(p.critical_p(), 1.0 - std::exp(-0.5), 1e-12);
    EXPECT_NEAR(p.critical_p(), 0.3934693402873666, 1e-12);
}

TEST(ModelRb, StructuralInvariants) {
    Rng rng(4);
    RbParams p;
    p.k = 2;
    p.n = 12;
    p.alpha = 0.7;
    p.r = 1.2;
    p.p = 0.2;
    const int d = p.domain_size();
    for (int rep = 0; rep < 100; ++rep) {
        CspInstance inst = gen_model_rb(p, rng);
        inst.validate();
        ASSERT_EQ(inst.num_vars(), 12);
        ASSERT_EQ(inst.num_constraints(), p.constraint_count());
        for (const auto& v : inst.vars) EXPECT_EQ(v.domain_size(), d);
        for (const auto& c : inst.constraints) {
            EXPECT_EQ(c.kind, ConstraintKind::ExtensionForbidden);
            ASSERT_EQ(c.scope.size(), 2u);
            EXPECT_NE(c.scope[0], c.scope[1]);
            EXPECT_EQ(static_cast<long long>(c.tuples.size()), p.forbidden_count());
            std::set<std::vector<int>> uniq(c.tuples.begin(), c.tuples.end());
            EXPECT_EQ(uniq.size(), c.tuples.size());
        }
    }
}

TEST(ModelRb, RejectsDegenerateTightness) {
    RbParams p;
    p.k = 2;
    p.n = 8;
    p.alpha = 0.6;
    p.r = 1.0;
    p.p = 1.5;  // forbids more tuples than exist
    Rng rng(5);
    EXPECT_THROW(gen_model_rb(p, rng), std::invalid_argument);
}

TEST(ModelRb, TrainingDistributionRanges) {
    Rng rng(6);
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 10 + static_cast<int>(rng() % 11);
        CspInstance inst = gen_model_rb_training(n, 2, rng);
        inst.validate();
        EXPECT_EQ(inst.num_vars(), n);
        const double root = std::sqrt(static_cast<double>(n));
        const int d = inst.vars[0].domain_size();
        EXPECT_GT(d, root);
        EXPECT_LE(d, 2.0 * root);
        const double logkd = std::log2(static_cast<double>(d));
        EXPECT_GE(inst.num_constraints() + 0.5, n * logkd);
        EXPECT_LE(inst.num_constraints() - 0.5, 2.0 * n * logkd);
    }
}

TEST(Reductions, ColoringTriangle) {
    CspInstance inst = reduce_coloring(triangle(), 3);
    inst.validate();
    EXPECT_EQ(inst.num_vars(), 3);
    EXPECT_EQ(inst.num_constraints(), 3);
    EXPECT_DOUBLE_EQ(quality(inst, {0, 1, 2}), 1.0);
    EXPECT_DOUBLE_EQ(quality(inst, {0, 0, 1}), 2.0 / 3.0);
    // two colors cannot work: best of all 8 assignments is 2/3
    CspInstance two = reduce_coloring(triangle(), 2);
    double best = 0.0;
    for (const auto& a : fixtures::all_assignments(two)) best = std::max(best, quality(two, a));
    EXPECT_DOUBLE_EQ(best, 2.0 / 3.0);
}

TEST(Reductions, PetersenIsThreeColorable) {
    CspInstance inst = reduce_coloring(petersen(), 3);
    inst.validate();
    // known proper 3-coloring
    const Assignment a = {0, 1, 0, 1, 2, 1, 2, 2, 0, 0};
    EXPECT_DOUBLE_EQ(quality(inst, a), 1.0);
}

TEST(Reductions, MaxCutValues) {
    CspInstance tri = reduce_maxcut(triangle());
    double best = 0.0;
    for (const auto& a : fixtures::all_assignments(tri)) best = std::max(best, quality(tri, a));
    EXPECT_DOUBLE_EQ(best, 2.0 / 3.0);  // max cut of a triangle is 2 of 3 edges

    Graph k4;
    k4.n = 4;
    k4.edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    CspInstance inst = reduce_maxcut(k4);
    double best4 = 0.0;
    for (const auto& a : fixtures::all_assignments(inst))
        best4 = std::max(best4, quality(inst, a));
    EXPECT_DOUBLE_EQ(best4, 4.0 / 6.0);  // balanced bipartition cuts 4 of 6
}

TEST(Reductions, CnfAgreesWithDirectEvaluation) {
    Rng rng(7);
    for (int rep = 0; rep < 30; ++rep) {
        Cnf cnf = gen_uniform_ksat(8, 3, 3.0, 5.0, rng);
        CspInstance inst = reduce_cnf(normalize_cnf(cnf));
        inst.validate();
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<int> assign(8);
            for (int& x : assign) x = static_cast<int>(rng() & 1);
            const int bad = unsat_clauses(cnf, assign);
            const double q = quality(inst, Assignment(assign.begin(), assign.end()));
            EXPECT_NEAR(q, 1.0 - static_cast<double>(bad) / cnf.clauses.size(), 1e-12);
        }
    }
}

TEST(Reductions, CnfRejectsEmptyClause) {
    Cnf cnf;
    cnf.nvars = 2;
    cnf.clauses = {{1, -2}, {}};
    EXPECT_THROW(reduce_cnf(cnf), std::invalid_argument);
}

TEST(Generators, UniformKsatShape) {
    Rng rng(8);
    for (int rep = 0; rep < 50; ++rep) {
        Cnf cnf = gen_uniform_ksat(20, 3, 3.8, 4.2, rng);
        EXPECT_EQ(cnf.nvars, 20);
        EXPECT_GE(cnf.clauses.size(), static_cast<size_t>(std::lround(3.8 * 20)));
        EXPECT_LE(cnf.clauses.size(), static_cast<size_t>(std::lround(4.2 * 20)));
        for (const auto& cl : cnf.clauses) {
            ASSERT_EQ(cl.size(), 3u);
            std::set<int> vars;
            for (int l : cl) {
                EXPECT_NE(l, 0);
                EXPECT_LE(std::abs(l), 20);
                vars.insert(std::abs(l));
            }
            EXPECT_EQ(vars.size(), 3u);  // distinct variables
        }
    }
}

TEST(Cnf, NormalizeDropsDuplicatesAndTautologies) {
    Cnf cnf;
    cnf.nvars = 3;
    cnf.clauses = {{1, 1, -2}, {1, -1, 3}, {2, 3}};
    std::ostringstream warn;
    Cnf out = normalize_cnf(cnf, &warn);
    ASSERT_EQ(out.clauses.size(), 2u);
    EXPECT_EQ(out.clauses[0], (std::vector<int>{1, -2}));
    EXPECT_EQ(out.clauses[1], (std::vector<int>{2, 3}));
    EXPECT_NE(warn.str().find("tautological"), std::string::npos);
}

TEST(Parsers, DimacsCnfRoundtrip) {
    const std::string text =
        "c a comment\n"
        "p cnf 4 3\n"
        "1 -2 3 0\n"
        "-1 4 0\n"
        "2 -3 -4 0\n"
        "% trailer junk sometimes present\n";
    Cnf cnf = parse_dimacs_cnf(text);
    EXPECT_EQ(cnf.nvars, 4);
    ASSERT_EQ(cnf.clauses.size(), 3u);
    EXPECT_EQ(cnf.clauses[0], (std::vector<int>{1, -2, 3}));
    EXPECT_EQ(cnf.clauses[1], (std::vector<int>{-1, 4}));
    Cnf again = parse_dimacs_cnf(write_dimacs_cnf(cnf));
    EXPECT_EQ(again.nvars, cnf.nvars);
    EXPECT_EQ(again.clauses, cnf.clauses);
}

TEST(Parsers, DimacsCnfMultiLineClauseAndErrors) {
    Cnf cnf = parse_dimacs_cnf("p cnf 3 1\n1 2\n3 0\n");
    ASSERT_EQ(cnf.clauses.size(), 1u);
    EXPECT_EQ(cnf.clauses[0], (std::vector<int>{1, 2, 3}));
    EXPECT_THROW(parse_dimacs_cnf("p cnf 2 1\n5 0\n"), std::invalid_argument);
    EXPECT_THROW(parse_dimacs_cnf("p wcnf 2 1\n1 0\n"), std::invalid_argument);
    EXPECT_THROW(parse_dimacs_cnf("1 2 0\n"), std::invalid_argument);
}

TEST(Parsers, DimacsColHandlesLoopsAndDuplicates) {
    const std::string text =
        "c graph\n"
        "p edge 4 5\n"
        "e 1 2\n"
        "e 2 1\n"
        "e 3 3\n"
        "e 3 4\n"
        "e 1 4\n";
    std::ostringstream warn;
    Graph g = parse_dimacs_col(text, &warn);
    EXPECT_EQ(g.n, 4);
    ASSERT_EQ(g.edges.size(), 3u);  // 1-2 deduplicated, 3-3 dropped
    EXPECT_NE(warn.str().find("self-loop"), std::string::npos);
    EXPECT_THROW(parse_dimacs_col("p edge 2 1\ne 1 5\n"), std::invalid_argument);
    EXPECT_THROW(parse_dimacs_col("e 1 2\n"), std::invalid_argument);
}

TEST(Json, RoundtripAllConstraintKinds) {
    CspInstance inst = fixtures::example_instance();
    CspInstance back = parse_csp_json(write_csp_json(inst));
    EXPECT_TRUE(structurally_equal(inst, back));

    CspInstance ext = fixtures::example_instance_extensional();
    EXPECT_TRUE(structurally_equal(ext, parse_csp_json(write_csp_json(ext))));

    Rng rng(9);
    for (int rep = 0; rep < 20; ++rep) {
        CspInstance r = fixtures::random_instance(rng);
        EXPECT_TRUE(structurally_equal(r, parse_csp_json(write_csp_json(r))));
    }
}

TEST(Json, ParseRejectsUnknownTypeAndBadScope) {
    EXPECT_THROW(parse_csp_json(R"({"variables":[{"id":"a","domain":[0,1]}],
        "constraints":[{"scope":["a"],"type":"mystery"}]})"),
                 std::invalid_argument);
    EXPECT_ANY_THROW(parse_csp_json(R"({"variables":[{"id":"a","domain":[0,1]}],
        "constraints":[{"scope":["zz"],"type":"alldifferent"}]})"));
    EXPECT_ANY_THROW(parse_csp_json("not json"));
}

TEST(Json, QualityPreservedThroughRoundtrip) {
    Rng rng(10);
    for (int rep = 0; rep < 10; ++rep) {
        CspInstance inst = fixtures::random_instance(rng);
        CspInstance back = parse_csp_json(write_csp_json(inst));
        for (int t = 0; t < 10; ++t) {
            Assignment a = uniform_assignment(inst, rng);
            EXPECT_DOUBLE_EQ(quality(inst, a), quality(back, a));
        }
    }
}
