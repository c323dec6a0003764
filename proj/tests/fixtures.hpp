#ifndef ANYCSP_TESTS_FIXTURES_HPP
#define ANYCSP_TESTS_FIXTURES_HPP

#include <vector>

#include "anycsp/csp.hpp"
#include "anycsp/cvgraph.hpp"

namespace fixtures {

using namespace anycsp;

// Three variables X, Y, Z with domains {1,2,3}, {1,2}, {1,2} and the two
// constraints X <= Y and Y != Z.
inline CspInstance example_instance() {
    CspInstance inst;
    inst.vars.resize(3);
    inst.vars[0] = {"X", {1, 2, 3}};
    inst.vars[1] = {"Y", {1, 2}};
    inst.vars[2] = {"Z", {1, 2}};
    Constraint c1;
    c1.scope = {0, 1};
    c1.kind = ConstraintKind::Linear;  // X - Y <= 0
    c1.coeffs = {1, -1};
    c1.cmp = Cmp::Le;
    c1.constant = 0;
    Constraint c2;
    c2.scope = {1, 2};
    c2.kind = ConstraintKind::AllDifferent;
    inst.constraints = {c1, c2};
    return inst;
}

// Same instance with both constraints expressed as allowed-tuple extensions.
inline CspInstance example_instance_extensional() {
    CspInstance inst = example_instance();
    Constraint c1;
    c1.scope = {0, 1};
    c1.kind = ConstraintKind::ExtensionAllowed;
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 2; ++y)
            if (inst.vars[0].elements[x] <= inst.vars[1].elements[y]) c1.tuples.push_back({x, y});
    Constraint c2;
    c2.scope = {1, 2};
    c2.kind = ConstraintKind::ExtensionAllowed;
    for (int y = 0; y < 2; ++y)
        for (int z = 0; z < 2; ++z)
            if (y != z) c2.tuples.push_back({y, z});
    inst.constraints = {c1, c2};
    return inst;
}

// Random small instance mixing all four constraint kinds. Domains <= max_dom,
// arity <= max_arity.
inline CspInstance random_instance(Rng& rng, int max_vars = 5, int max_dom = 4, int max_arity = 3,
                                   int max_cons = 8) {
    CspInstance inst;
    const int nv = 2 + static_cast<int>(rng() % static_cast<uint64_t>(max_vars - 1));
    inst.vars.resize(nv);
    for (int x = 0; x < nv; ++x) {
        inst.vars[x].name = "v" + std::to_string(x);
        const int ds = 2 + static_cast<int>(rng() % static_cast<uint64_t>(max_dom - 1));
        inst.vars[x].elements.resize(ds);
        for (int i = 0; i < ds; ++i) inst.vars[x].elements[i] = i;
    }
    const int nc = 1 + static_cast<int>(rng() % static_cast<uint64_t>(max_cons));
    for (int ci = 0; ci < nc; ++ci) {
        Constraint c;
        const int arity =
            std::min(nv, 1 + static_cast<int>(rng() % static_cast<uint64_t>(max_arity)));
        std::set<int> scope;
        while (static_cast<int>(scope.size()) < arity)
            scope.insert(static_cast<int>(rng() % nv));
        c.scope.assign(scope.begin(), scope.end());
        switch (rng() % 4) {
            case 0:
            case 1: {
                c.kind = (rng() & 1) ? ConstraintKind::ExtensionAllowed
                                     : ConstraintKind::ExtensionForbidden;
                long long prod = 1;
                for (int x : c.scope) prod *= inst.vars[x].domain_size();
                std::set<std::vector<int>> tuples;
                const int want = 1 + static_cast<int>(rng() % static_cast<uint64_t>(prod));
                while (static_cast<int>(tuples.size()) < want) {
                    std::vector<int> t;
                    for (int x : c.scope)
                        t.push_back(static_cast<int>(rng() % inst.vars[x].domain_size()));
                    tuples.insert(t);
                }
                c.tuples.assign(tuples.begin(), tuples.end());
                break;
            }
            case 2: {
                c.kind = ConstraintKind::Linear;
                for (size_t i = 0; i < c.scope.size(); ++i)
                    c.coeffs.push_back(static_cast<long long>(rng() % 5) - 2);
                c.cmp = static_cast<Cmp>(rng() % 6);
                c.constant = static_cast<long long>(rng() % 7) - 3;
                break;
            }
            default: c.kind = ConstraintKind::AllDifferent; break;
        }
        inst.constraints.push_back(std::move(c));
    }
    return inst;
}

// Direct-substitution oracle for the edge labels: substitute each candidate
// value into the assignment and call satisfies.
inline std::vector<uint8_t> oracle_edge_labels(const CspInstance& inst, const CvGraph& g,
                                               const Assignment& a) {
    std::vector<uint8_t> labels(g.edge_value.size());
    for (size_t e = 0; e < g.edge_value.size(); ++e) {
        const int v = g.edge_value[e];
        Assignment mod = a;
        mod[g.value_var[v]] = g.value_index[v];
        labels[e] = satisfies(inst, inst.constraints[g.edge_cons[e]], mod) ? 1 : 0;
    }
    return labels;
}

// Enumerate all assignments of a small instance.
inline std::vector<Assignment> all_assignments(const CspInstance& inst) {
    std::vector<Assignment> out;
    Assignment a(inst.num_vars(), 0);
    while (true) {
        out.push_back(a);
        int i = inst.num_vars() - 1;
        for (; i >= 0; --i) {
            if (++a[i] < inst.vars[i].domain_size()) break;
            a[i] = 0;
        }
        if (i < 0) break;
    }
    return out;
}

}  // namespace fixtures

#endif
