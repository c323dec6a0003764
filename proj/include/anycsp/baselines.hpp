#ifndef ANYCSP_BASELINES_HPP
#define ANYCSP_BASELINES_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "anycsp/csp.hpp"
#include "anycsp/instances.hpp"

namespace anycsp {

// ---------------------------------------------------------------- WalkSAT

struct WalksatResult {
    std::vector<uint8_t> assignment;
    bool satisfied = false;
    long long flips = 0;
    int best_unsat = 0;
    std::vector<uint8_t> best_assignment;
};

namespace detail {

struct SatState {
    const Cnf* cnf;
    std::vector<std::vector<int>> pos_occ, neg_occ;  // clause ids per variable
    std::vector<int> true_count;                     // satisfied literals per clause
    std::vector<int> unsat_list;                     // clause ids currently unsatisfied
    std::vector<int> unsat_pos;                      // position in unsat_list, -1 if absent
    std::vector<uint8_t> assign;                     // 1-based

    explicit SatState(const Cnf& c, Rng& rng) : cnf(&c) {
        pos_occ.resize(c.nvars + 1);
        neg_occ.resize(c.nvars + 1);
        for (size_t ci = 0; ci < c.clauses.size(); ++ci)
            for (int l : c.clauses[ci])
                (l > 0 ? pos_occ[l] : neg_occ[-l]).push_back(static_cast<int>(ci));
        assign.resize(c.nvars + 1);
        for (int v = 1; v <= c.nvars; ++v) assign[v] = rng() & 1;
        true_count.assign(c.clauses.size(), 0);
        unsat_pos.assign(c.clauses.size(), -1);
        for (size_t ci = 0; ci < c.clauses.size(); ++ci) {
            for (int l : c.clauses[ci]) true_count[ci] += lit_true(l);
            if (true_count[ci] == 0) push_unsat(static_cast<int>(ci));
        }
    }

    bool lit_true(int l) const { return l > 0 ? assign[l] : !assign[-l]; }

    void push_unsat(int ci) {
        unsat_pos[ci] = static_cast<int>(unsat_list.size());
        unsat_list.push_back(ci);
    }

    void pop_unsat(int ci) {
        const int p = unsat_pos[ci];
        const int last = unsat_list.back();
        unsat_list[p] = last;
        unsat_pos[last] = p;
        unsat_list.pop_back();
        unsat_pos[ci] = -1;
    }

    // clauses that become unsatisfied if v flips
    int break_count(int v) const {
        int b = 0;
        const auto& occ = assign[v] ? pos_occ[v] : neg_occ[v];
        for (int ci : occ) b += (true_count[ci] == 1);
        return b;
    }

    void flip(int v) {
        const auto& was_sat = assign[v] ? pos_occ[v] : neg_occ[v];
        const auto& now_sat = assign[v] ? neg_occ[v] : pos_occ[v];
        for (int ci : was_sat)
            if (--true_count[ci] == 0) push_unsat(ci);
        for (int ci : now_sat)
            if (++true_count[ci] == 1) pop_unsat(ci);
        assign[v] ^= 1;
    }
};

}  // namespace detail

// Classical WalkSAT: random unsatisfied clause; with probability noise a
// random variable of it, otherwise the one minimizing break count.
inline WalksatResult walksat(const Cnf& cnf, long long max_flips, double noise, Rng& rng) {
    detail::SatState st(cnf, rng);
    WalksatResult res;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    while (!st.unsat_list.empty() && res.flips < max_flips) {
        const int ci = st.unsat_list[rng() % st.unsat_list.size()];
        const auto& cl = cnf.clauses[ci];
        int pick;
        if (unif(rng) < noise) {
            pick = std::abs(cl[rng() % cl.size()]);
        } else {
            int best = -1, best_break = 0;
            for (int l : cl) {
                const int b = st.break_count(std::abs(l));
                if (best < 0 || b < best_break) {
                    best = std::abs(l);
                    best_break = b;
                }
            }
            pick = best;
        }
        st.flip(pick);
        ++res.flips;
    }
    res.satisfied = st.unsat_list.empty();
    res.assignment.assign(st.assign.begin() + 1, st.assign.end());
    res.best_unsat = static_cast<int>(st.unsat_list.size());
    res.best_assignment = res.assignment;
    return res;
}

// MaxWalkSAT: runs the full flip budget and tracks the best-ever assignment;
// stops early only at zero unsatisfied clauses.
inline WalksatResult max_walksat(const Cnf& cnf, long long max_flips, double noise, Rng& rng) {
    detail::SatState st(cnf, rng);
    WalksatResult res;
    res.best_unsat = static_cast<int>(st.unsat_list.size());
    res.best_assignment.assign(st.assign.begin() + 1, st.assign.end());
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    while (!st.unsat_list.empty() && res.flips < max_flips) {
        const int ci = st.unsat_list[rng() % st.unsat_list.size()];
        const auto& cl = cnf.clauses[ci];
        int pick;
        if (unif(rng) < noise) {
            pick = std::abs(cl[rng() % cl.size()]);
        } else {
            int best = -1, best_break = 0;
            for (int l : cl) {
                const int b = st.break_count(std::abs(l));
                if (best < 0 || b < best_break) {
                    best = std::abs(l);
                    best_break = b;
                }
            }
            pick = best;
        }
        st.flip(pick);
        ++res.flips;
        if (static_cast<int>(st.unsat_list.size()) < res.best_unsat) {
            res.best_unsat = static_cast<int>(st.unsat_list.size());
            res.best_assignment.assign(st.assign.begin() + 1, st.assign.end());
        }
    }
    res.satisfied = res.best_unsat == 0;
    res.assignment.assign(st.assign.begin() + 1, st.assign.end());
    return res;
}

// ---------------------------------------------------------------- coloring

struct ColoringResult {
    std::vector<int> colors;
    int num_colors = 0;
};

inline ColoringResult greedy_coloring(const Graph& g, const std::vector<int>& order) {
    const auto adj = g.adjacency();
    ColoringResult res;
    res.colors.assign(g.n, -1);
    for (int v : order) {
        std::vector<uint8_t> used(g.n + 1, 0);
        for (int u : adj[v])
            if (res.colors[u] >= 0) used[res.colors[u]] = 1;
        int c = 0;
        while (used[c]) ++c;
        res.colors[v] = c;
        res.num_colors = std::max(res.num_colors, c + 1);
    }
    return res;
}

inline ColoringResult greedy_coloring(const Graph& g) {
    std::vector<int> order(g.n);
    std::iota(order.begin(), order.end(), 0);
    return greedy_coloring(g, order);
}

// Brelaz: color the vertex of maximum saturation degree next; ties by degree,
// then lowest id.
inline ColoringResult dsatur(const Graph& g) {
    const auto adj = g.adjacency();
    ColoringResult res;
    res.colors.assign(g.n, -1);
    std::vector<std::set<int>> neighbor_colors(g.n);
    for (int step = 0; step < g.n; ++step) {
        int best = -1;
        for (int v = 0; v < g.n; ++v) {
            if (res.colors[v] >= 0) continue;
            if (best < 0) {
                best = v;
                continue;
            }
            const auto sa = neighbor_colors[v].size();
            const auto sb = neighbor_colors[best].size();
            if (sa > sb || (sa == sb && adj[v].size() > adj[best].size()))
                best = v;
        }
        int c = 0;
        while (neighbor_colors[best].count(c)) ++c;
        res.colors[best] = c;
        res.num_colors = std::max(res.num_colors, c + 1);
        for (int u : adj[best]) neighbor_colors[u].insert(c);
    }
    return res;
}

inline int coloring_conflicts(const Graph& g, const std::vector<int>& colors) {
    int conflicts = 0;
    for (auto [u, v] : g.edges) conflicts += (colors[u] == colors[v]);
    return conflicts;
}

// Training-time color count: one less than greedy, clamped to [3, 10].
inline int choose_training_k(const Graph& g) {
    const int kp = greedy_coloring(g).num_colors;
    return std::max(3, std::min(10, kp - 1));
}

// ---------------------------------------------------------------- MaxCut

struct CutResult {
    std::vector<uint8_t> side;
    int cut = 0;
};

// Vertices in id order, each placed on the side maximizing its cut edges to
// already placed neighbors; ties go to side 0.
inline CutResult greedy_maxcut(const Graph& g) {
    const auto adj = g.adjacency();
    CutResult res;
    res.side.assign(g.n, 0);
    std::vector<uint8_t> placed(g.n, 0);
    for (int v = 0; v < g.n; ++v) {
        int on0 = 0, on1 = 0;
        for (int u : adj[v])
            if (placed[u]) (res.side[u] == 0 ? on0 : on1)++;
        res.side[v] = on0 > on1 ? 1 : 0;  // placing on side s cuts edges to the other side
        placed[v] = 1;
    }
    for (auto [u, v] : g.edges) res.cut += (res.side[u] != res.side[v]);
    return res;
}

inline int cut_size(const Graph& g, const std::vector<uint8_t>& side) {
    int cut = 0;
    for (auto [u, v] : g.edges) cut += (side[u] != side[v]);
    return cut;
}

// ---------------------------------------------------------------- random

struct RandomSearchResult {
    Assignment best;
    double best_quality = 0.0;
    std::vector<double> best_curve;
};

inline RandomSearchResult random_search(const CspInstance& inst, int steps, Rng& rng) {
    RandomSearchResult res;
    res.best_quality = -1.0;
    for (int t = 0; t < steps; ++t) {
        Assignment a = uniform_assignment(inst, rng);
        const double q = quality(inst, a);
        if (q > res.best_quality) {
            res.best_quality = q;
            res.best = std::move(a);
        }
        res.best_curve.push_back(res.best_quality);
        if (res.best_quality >= 1.0) break;
    }
    return res;
}

}  // namespace anycsp

#endif
