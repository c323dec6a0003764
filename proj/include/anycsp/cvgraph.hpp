#ifndef ANYCSP_CVGRAPH_HPP
#define ANYCSP_CVGRAPH_HPP

#include <cstdint>
#include <vector>

#include "anycsp/csp.hpp"

namespace anycsp {

// Tripartite labeled graph over variables, values and constraints. Topology
// and the tuple incidence index are static; the binary labels are recomputed
// for each new assignment.
struct CvGraph {
    int num_vars = 0;
    int num_values = 0;
    int num_cons = 0;

    std::vector<int> value_var;     // variable of each value (also a segment id)
    std::vector<int> value_index;   // domain index of each value
    std::vector<int> var_offset;    // first value of each variable, size num_vars+1

    // Constraint edges (C, v), grouped by constraint.
    std::vector<int> edge_value;
    std::vector<int> edge_cons;
    std::vector<int> cons_edge_offset;      // size num_cons+1
    std::vector<int> edge_of_value_slot;    // lookup: edge id for (cons, value), flattened below

    // Tuple incidence over all extension constraints: each tuple owns k slots;
    // a slot points at its member value and at the constraint edge it supports.
    std::vector<int> tuple_cons;
    std::vector<int> tuple_slot_offset;     // size tuples+1
    std::vector<int> slot_value;
    std::vector<int> slot_edge;

    // Dynamic labels.
    std::vector<uint8_t> label_value;       // L_V, one per value
    std::vector<uint8_t> label_edge;        // L_E, one per constraint edge

    int value_id(int var, int idx) const { return var_offset[var] + idx; }
};

inline CvGraph build_graph(const CspInstance& inst) {
    CvGraph g;
    g.num_vars = inst.num_vars();
    g.num_cons = inst.num_constraints();
    g.var_offset.assign(g.num_vars + 1, 0);
    for (int x = 0; x < g.num_vars; ++x)
        g.var_offset[x + 1] = g.var_offset[x] + inst.vars[x].domain_size();
    g.num_values = g.var_offset[g.num_vars];
    g.value_var.resize(g.num_values);
    g.value_index.resize(g.num_values);
    for (int x = 0; x < g.num_vars; ++x)
        for (int i = 0; i < inst.vars[x].domain_size(); ++i) {
            g.value_var[g.var_offset[x] + i] = x;
            g.value_index[g.var_offset[x] + i] = i;
        }

    g.cons_edge_offset.assign(g.num_cons + 1, 0);
    for (int ci = 0; ci < g.num_cons; ++ci) {
        int ne = 0;
        for (int x : inst.constraints[ci].scope) ne += inst.vars[x].domain_size();
        g.cons_edge_offset[ci + 1] = g.cons_edge_offset[ci] + ne;
    }
    const int nedges = g.cons_edge_offset[g.num_cons];
    g.edge_value.resize(nedges);
    g.edge_cons.resize(nedges);
    for (int ci = 0; ci < g.num_cons; ++ci) {
        int e = g.cons_edge_offset[ci];
        for (int x : inst.constraints[ci].scope)
            for (int i = 0; i < inst.vars[x].domain_size(); ++i) {
                g.edge_value[e] = g.value_id(x, i);
                g.edge_cons[e] = ci;
                ++e;
            }
    }

    for (int ci = 0; ci < g.num_cons; ++ci) {
        const Constraint& c = inst.constraints[ci];
        if (c.kind != ConstraintKind::ExtensionAllowed &&
            c.kind != ConstraintKind::ExtensionForbidden)
            continue;
        // edge id of (ci, scope position, domain index)
        std::vector<int> scope_edge_base(c.scope.size());
        int e = g.cons_edge_offset[ci];
        for (size_t i = 0; i < c.scope.size(); ++i) {
            scope_edge_base[i] = e;
            e += inst.vars[c.scope[i]].domain_size();
        }
        for (const auto& t : c.tuples) {
            g.tuple_cons.push_back(ci);
            g.tuple_slot_offset.push_back(static_cast<int>(g.slot_value.size()));
            for (size_t i = 0; i < t.size(); ++i) {
                g.slot_value.push_back(g.value_id(c.scope[i], t[i]));
                g.slot_edge.push_back(scope_edge_base[i] + t[i]);
            }
        }
    }
    g.tuple_slot_offset.push_back(static_cast<int>(g.slot_value.size()));

    g.label_value.assign(g.num_values, 0);
    g.label_edge.assign(nedges, 0);
    return g;
}

// Recompute L_V and L_E for the given assignment. Extension constraints use
// the tuple score / per-edge max passes; linear and all-different labels are
// computed from the frozen partial sum / element counts.
inline void relabel(CvGraph& g, const CspInstance& inst, const Assignment& a) {
    std::fill(g.label_value.begin(), g.label_value.end(), 0);
    for (int x = 0; x < g.num_vars; ++x) g.label_value[g.value_id(x, a[x])] = 1;

    // score pass over tuples, then max pass onto edges
    const int ntuples = static_cast<int>(g.tuple_cons.size());
    std::vector<int> score(ntuples, 0);
    for (int t = 0; t < ntuples; ++t)
        for (int s = g.tuple_slot_offset[t]; s < g.tuple_slot_offset[t + 1]; ++s)
            score[t] += g.label_value[g.slot_value[s]];
    std::vector<int> edge_max(g.edge_value.size(), -1);
    for (int t = 0; t < ntuples; ++t)
        for (int s = g.tuple_slot_offset[t]; s < g.tuple_slot_offset[t + 1]; ++s)
            edge_max[g.slot_edge[s]] = std::max(edge_max[g.slot_edge[s]], score[t]);

    for (int ci = 0; ci < g.num_cons; ++ci) {
        const Constraint& c = inst.constraints[ci];
        const int k = c.arity();
        const int e0 = g.cons_edge_offset[ci];
        const int e1 = g.cons_edge_offset[ci + 1];
        switch (c.kind) {
            case ConstraintKind::ExtensionAllowed:
                for (int e = e0; e < e1; ++e)
                    g.label_edge[e] =
                        (edge_max[e] - g.label_value[g.edge_value[e]] + 1 == k) ? 1 : 0;
                break;
            case ConstraintKind::ExtensionForbidden:
                // same case distinction with the output labels swapped
                for (int e = e0; e < e1; ++e)
                    g.label_edge[e] =
                        (edge_max[e] - g.label_value[g.edge_value[e]] + 1 == k) ? 0 : 1;
                break;
            case ConstraintKind::Linear: {
                long long frozen = 0;
                for (size_t i = 0; i < c.scope.size(); ++i)
                    frozen += c.coeffs[i] * inst.vars[c.scope[i]].elements[a[c.scope[i]]];
                int e = e0;
                for (size_t i = 0; i < c.scope.size(); ++i) {
                    const Variable& var = inst.vars[c.scope[i]];
                    const long long without =
                        frozen - c.coeffs[i] * var.elements[a[c.scope[i]]];
                    for (int d = 0; d < var.domain_size(); ++d, ++e)
                        g.label_edge[e] =
                            cmp_eval(c.cmp, without + c.coeffs[i] * var.elements[d], c.constant)
                                ? 1
                                : 0;
                }
                break;
            }
            case ConstraintKind::AllDifferent: {
                // count of each assigned element within the scope
                std::vector<std::pair<long long, int>> counts;
                for (int x : c.scope) {
                    const long long el = inst.vars[x].elements[a[x]];
                    bool found = false;
                    for (auto& p : counts)
                        if (p.first == el) {
                            ++p.second;
                            found = true;
                            break;
                        }
                    if (!found) counts.emplace_back(el, 1);
                }
                auto count_of = [&](long long el) {
                    for (const auto& p : counts)
                        if (p.first == el) return p.second;
                    return 0;
                };
                int e = e0;
                for (size_t i = 0; i < c.scope.size(); ++i) {
                    const Variable& var = inst.vars[c.scope[i]];
                    const long long cur = var.elements[a[c.scope[i]]];
                    // the frozen rest of the scope must itself be pairwise
                    // distinct, or no substitution at this position helps
                    bool rest_ok = true;
                    for (const auto& p : counts)
                        if (p.second - (p.first == cur ? 1 : 0) > 1) rest_ok = false;
                    for (int d = 0; d < var.domain_size(); ++d, ++e) {
                        const long long el = var.elements[d];
                        const int conflicts = count_of(el) - (el == cur ? 1 : 0);
                        g.label_edge[e] = (rest_ok && conflicts == 0) ? 1 : 0;
                    }
                }
                break;
            }
        }
    }
}

// Complement an extension relation over the full domain product.
inline std::vector<std::vector<int>> complement_tuples(const CspInstance& inst,
                                                       const Constraint& c) {
    std::vector<std::vector<int>> out;
    std::vector<int> t(c.scope.size(), 0);
    while (true) {
        if (std::find(c.tuples.begin(), c.tuples.end(), t) == c.tuples.end()) out.push_back(t);
        int i = static_cast<int>(t.size()) - 1;
        for (; i >= 0; --i) {
            if (++t[i] < inst.vars[c.scope[i]].domain_size()) break;
            t[i] = 0;
        }
        if (i < 0) break;
    }
    return out;
}

// Checks that relabeling under allowed tuples and under the complement in
// forbidden mode agree on every edge for a set of sampled assignments.
inline bool equivalent_encodings_check(const CspInstance& inst, int samples, Rng& rng) {
    CspInstance flipped = inst;
    for (auto& c : flipped.constraints) {
        if (c.kind == ConstraintKind::ExtensionAllowed) {
            c.tuples = complement_tuples(inst, c);
            c.kind = ConstraintKind::ExtensionForbidden;
        } else if (c.kind == ConstraintKind::ExtensionForbidden) {
            c.tuples = complement_tuples(inst, c);
            c.kind = ConstraintKind::ExtensionAllowed;
        }
    }
    CvGraph ga = build_graph(inst);
    CvGraph gb = build_graph(flipped);
    for (int s = 0; s < samples; ++s) {
        Assignment a = uniform_assignment(inst, rng);
        relabel(ga, inst, a);
        relabel(gb, flipped, a);
        if (ga.label_edge != gb.label_edge) return false;
    }
    return true;
}

}  // namespace anycsp

#endif
