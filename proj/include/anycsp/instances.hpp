#ifndef ANYCSP_INSTANCES_HPP
#define ANYCSP_INSTANCES_HPP

#include <cmath>
#include <cstdint>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "anycsp/csp.hpp"

namespace anycsp {

// ---------------------------------------------------------------- graphs

struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // u < v, deduplicated

    std::vector<std::vector<int>> adjacency() const {
        std::vector<std::vector<int>> adj(n);
        for (auto [u, v] : edges) {
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
        return adj;
    }
};

inline Graph gen_erdos_renyi(int n, double p, Rng& rng) {
    Graph g;
    g.n = n;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (unif(rng) < p) g.edges.emplace_back(u, v);
    return g;
}

inline Graph gen_barabasi_albert(int n, int m, Rng& rng) {
    Graph g;
    g.n = n;
    if (m < 1) m = 1;
    std::vector<int> targets;  // repeated by degree for preferential attachment
    const int m0 = std::min(m, n);
    for (int v = 0; v < m0; ++v) targets.push_back(v);
    for (int v = m0; v < n; ++v) {
        std::set<int> chosen;
        while (static_cast<int>(chosen.size()) < std::min(m, v))
            chosen.insert(targets[rng() % targets.size()]);
        for (int u : chosen) {
            g.edges.emplace_back(std::min(u, v), std::max(u, v));
            targets.push_back(u);
            targets.push_back(v);
        }
    }
    return g;
}

inline Graph gen_geometric(int n, double radius, Rng& rng) {
    Graph g;
    g.n = n;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<std::pair<double, double>> pts(n);
    for (auto& p : pts) p = {unif(rng), unif(rng)};
    const double r2 = radius * radius;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            const double dx = pts[u].first - pts[v].first;
            const double dy = pts[u].second - pts[v].second;
            if (dx * dx + dy * dy <= r2) g.edges.emplace_back(u, v);
        }
    return g;
}

// ---------------------------------------------------------------- CNF

struct Cnf {
    int nvars = 0;
    std::vector<std::vector<int>> clauses;  // DIMACS literals, 1-based, sign = polarity
};

// Drop duplicate literals; drop tautologies with a warning on `warn`.
inline Cnf normalize_cnf(const Cnf& in, std::ostream* warn = nullptr) {
    Cnf out;
    out.nvars = in.nvars;
    for (const auto& cl : in.clauses) {
        std::vector<int> lits;
        bool taut = false;
        for (int l : cl) {
            if (std::find(lits.begin(), lits.end(), l) != lits.end()) continue;
            if (std::find(lits.begin(), lits.end(), -l) != lits.end()) {
                taut = true;
                break;
            }
            lits.push_back(l);
        }
        if (taut) {
            if (warn) *warn << "warning: dropping tautological clause\n";
            continue;
        }
        out.clauses.push_back(std::move(lits));
    }
    return out;
}

// ---------------------------------------------------------------- Model RB

struct RbParams {
    int k = 2;
    int n = 30;
    double alpha = 0.8;
    double r = 1.5;
    double p = 0.3;

    int domain_size() const { return static_cast<int>(std::lround(std::pow(n, alpha))); }
    int constraint_count() const {
        return static_cast<int>(std::lround(r * n * std::log(static_cast<double>(n))));
    }
    long long forbidden_count() const {
        return std::llround(p * std::pow(static_cast<double>(domain_size()), k));
    }
    double critical_p() const { return 1.0 - std::exp(-alpha / r); }
};

inline CspInstance gen_model_rb(const RbParams& params, Rng& rng) {
    const int d = params.domain_size();
    const int m = params.constraint_count();
    const long long t = std::max<long long>(1, params.forbidden_count());
    if (d < 2) throw std::invalid_argument("Model RB domain size < 2");
    double total = std::pow(static_cast<double>(d), params.k);
    if (static_cast<double>(t) >= total) throw std::invalid_argument("tightness too high");

    CspInstance inst;
    inst.vars.resize(params.n);
    for (int x = 0; x < params.n; ++x) {
        inst.vars[x].name = "x" + std::to_string(x);
        inst.vars[x].elements.resize(d);
        std::iota(inst.vars[x].elements.begin(), inst.vars[x].elements.end(), 0);
    }
    for (int ci = 0; ci < m; ++ci) {
        Constraint c;
        c.kind = ConstraintKind::ExtensionForbidden;
        // k distinct variables, scopes drawn with repetition across constraints
        std::set<int> scope;
        while (static_cast<int>(scope.size()) < params.k)
            scope.insert(static_cast<int>(rng() % params.n));
        c.scope.assign(scope.begin(), scope.end());
        // t distinct forbidden tuples
        std::unordered_set<long long> seen;
        while (static_cast<long long>(c.tuples.size()) < t) {
            std::vector<int> tup(params.k);
            long long code = 0;
            for (int i = 0; i < params.k; ++i) {
                tup[i] = static_cast<int>(rng() % d);
                code = code * d + tup[i];
            }
            if (seen.insert(code).second) c.tuples.push_back(std::move(tup));
        }
        inst.constraints.push_back(std::move(c));
    }
    return inst;
}

// Training distribution: k=2, d in (n^(1/k), 2 n^(1/k)], m in [n log_k d, 2 n log_k d],
// p = 0.9 p_cr with r and alpha backed out of the sampled d and m.
inline CspInstance gen_model_rb_training(int n, int k, Rng& rng) {
    const double root = std::pow(static_cast<double>(n), 1.0 / k);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int d_lo = static_cast<int>(std::floor(root)) + 1;
    const int d_hi = static_cast<int>(std::floor(2.0 * root));
    const int d = d_lo + static_cast<int>(rng() % static_cast<uint64_t>(d_hi - d_lo + 1));
    const double logkd = std::log(static_cast<double>(d)) / std::log(static_cast<double>(k));
    const double m_real = (1.0 + unif(rng)) * n * logkd;
    RbParams p;
    p.k = k;
    p.n = n;
    p.alpha = std::log(static_cast<double>(d)) / std::log(static_cast<double>(n));
    p.r = m_real / (n * std::log(static_cast<double>(n)));
    p.p = 0.9 * p.critical_p();
    return gen_model_rb(p, rng);
}

// ---------------------------------------------------------------- reductions

// One variable per vertex with domain {0..k-1}; one != constraint per edge,
// stored as the k forbidden equal pairs.
inline CspInstance reduce_coloring(const Graph& g, int k) {
    if (k < 2) throw std::invalid_argument("need at least 2 colors");
    CspInstance inst;
    inst.vars.resize(g.n);
    for (int v = 0; v < g.n; ++v) {
        inst.vars[v].name = "x" + std::to_string(v);
        inst.vars[v].elements.resize(k);
        std::iota(inst.vars[v].elements.begin(), inst.vars[v].elements.end(), 0);
    }
    for (auto [u, v] : g.edges) {
        Constraint c;
        c.kind = ConstraintKind::ExtensionForbidden;
        c.scope = {u, v};
        for (int i = 0; i < k; ++i) c.tuples.push_back({i, i});
        inst.constraints.push_back(std::move(c));
    }
    return inst;
}

inline CspInstance reduce_maxcut(const Graph& g) { return reduce_coloring(g, 2); }

// Boolean domains; one forbidden tuple per clause (the all-literals-false one).
inline CspInstance reduce_cnf(const Cnf& cnf) {
    CspInstance inst;
    inst.vars.resize(cnf.nvars);
    for (int x = 0; x < cnf.nvars; ++x) {
        inst.vars[x].name = "x" + std::to_string(x + 1);
        inst.vars[x].elements = {0, 1};
    }
    for (const auto& cl : cnf.clauses) {
        if (cl.empty()) throw std::invalid_argument("trivially unsatisfiable clause");
        Constraint c;
        c.kind = ConstraintKind::ExtensionForbidden;
        std::vector<int> falsifying;
        for (int l : cl) {
            c.scope.push_back(std::abs(l) - 1);
            falsifying.push_back(l > 0 ? 0 : 1);
        }
        c.tuples.push_back(std::move(falsifying));
        inst.constraints.push_back(std::move(c));
    }
    return inst;
}

inline Cnf gen_uniform_ksat(int n, int k, double ratio_lo, double ratio_hi, Rng& rng) {
    if (n < k) throw std::invalid_argument("fewer variables than clause arity");
    std::uniform_real_distribution<double> unif(ratio_lo, ratio_hi);
    const int m = static_cast<int>(std::lround(unif(rng) * n));
    Cnf cnf;
    cnf.nvars = n;
    for (int ci = 0; ci < m; ++ci) {
        std::set<int> vars;
        while (static_cast<int>(vars.size()) < k) vars.insert(1 + static_cast<int>(rng() % n));
        std::vector<int> cl;
        for (int v : vars) cl.push_back((rng() & 1) ? v : -v);
        cnf.clauses.push_back(std::move(cl));
    }
    return cnf;
}

// ---------------------------------------------------------------- parsers

inline Cnf parse_dimacs_cnf(const std::string& text) {
    Cnf cnf;
    std::istringstream in(text);
    std::string line;
    int nclauses = -1;
    std::vector<int> cur;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c' || line[0] == '%') continue;
        if (line[0] == 'p') {
            std::istringstream hs(line);
            std::string p, fmt;
            if (!(hs >> p >> fmt >> cnf.nvars >> nclauses) || fmt != "cnf")
                throw std::invalid_argument("malformed DIMACS header: " + line);
            continue;
        }
        std::istringstream ls(line);
        int lit;
        while (ls >> lit) {
            if (lit == 0) {
                cnf.clauses.push_back(cur);
                cur.clear();
            } else {
                if (std::abs(lit) > cnf.nvars)
                    throw std::invalid_argument("literal out of range: " + std::to_string(lit));
                cur.push_back(lit);
            }
        }
    }
    if (!cur.empty()) cnf.clauses.push_back(cur);
    if (cnf.nvars == 0 && !cnf.clauses.empty())
        throw std::invalid_argument("missing DIMACS header");
    return cnf;
}

inline std::string write_dimacs_cnf(const Cnf& cnf) {
    std::ostringstream os;
    os << "p cnf " << cnf.nvars << " " << cnf.clauses.size() << "\n";
    for (const auto& cl : cnf.clauses) {
        for (int l : cl) os << l << " ";
        os << "0\n";
    }
    return os.str();
}

// DIMACS .col: 1-based vertices; self loops dropped with a warning, duplicate
// edges deduplicated.
inline Graph parse_dimacs_col(const std::string& text, std::ostream* warn = nullptr) {
    Graph g;
    std::istringstream in(text);
    std::string line;
    std::set<std::pair<int, int>> seen;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream ls(line);
        char tag;
        ls >> tag;
        if (tag == 'p') {
            std::string fmt;
            int m;
            if (!(ls >> fmt >> g.n >> m) || (fmt != "edge" && fmt != "edges"))
                throw std::invalid_argument("malformed .col header: " + line);
            have_header = true;
        } else if (tag == 'e') {
            int u, v;
            if (!(ls >> u >> v)) throw std::invalid_argument("malformed edge line: " + line);
            if (u < 1 || v < 1 || u > g.n || v > g.n)
                throw std::invalid_argument("edge vertex out of range: " + line);
            if (u == v) {
                if (warn) *warn << "warning: dropping self-loop on vertex " << u << "\n";
                continue;
            }
            const int lo = std::min(u, v) - 1;
            const int hi = std::max(u, v) - 1;
            if (seen.insert({lo, hi}).second) g.edges.emplace_back(lo, hi);
        }
    }
    if (!have_header) throw std::invalid_argument("missing .col header");
    return g;
}

// ---------------------------------------------------------------- CSP JSON

inline nlohmann::ordered_json csp_to_json(const CspInstance& inst) {
    nlohmann::ordered_json j;
    j["variables"] = nlohmann::ordered_json::array();
    for (const auto& v : inst.vars) {
        nlohmann::ordered_json jv;
        jv["id"] = v.name;
        jv["domain"] = v.elements;
        j["variables"].push_back(jv);
    }
    j["constraints"] = nlohmann::ordered_json::array();
    for (const auto& c : inst.constraints) {
        nlohmann::ordered_json jc;
        nlohmann::ordered_json scope = nlohmann::ordered_json::array();
        for (int x : c.scope) scope.push_back(inst.vars[x].name);
        jc["scope"] = scope;
        switch (c.kind) {
            case ConstraintKind::ExtensionAllowed:
                jc["type"] = "allowed";
                jc["tuples"] = c.tuples;
                break;
            case ConstraintKind::ExtensionForbidden:
                jc["type"] = "forbidden";
                jc["tuples"] = c.tuples;
                break;
            case ConstraintKind::Linear:
                jc["type"] = "linear";
                jc["linear"] = {{"coeffs", c.coeffs},
                                {"cmp", cmp_name(c.cmp)},
                                {"const", c.constant}};
                break;
            case ConstraintKind::AllDifferent:
                jc["type"] = "alldifferent";
                break;
        }
        j["constraints"].push_back(jc);
    }
    return j;
}

inline std::string write_csp_json(const CspInstance& inst) { return csp_to_json(inst).dump(2); }

inline CspInstance parse_csp_json(const std::string& text) {
    const auto j = nlohmann::ordered_json::parse(text);
    CspInstance inst;
    std::unordered_map<std::string, int> by_name;
    for (const auto& jv : j.at("variables")) {
        Variable v;
        v.name = jv.at("id").get<std::string>();
        v.elements = jv.at("domain").get<std::vector<long long>>();
        by_name[v.name] = static_cast<int>(inst.vars.size());
        inst.vars.push_back(std::move(v));
    }
    for (const auto& jc : j.at("constraints")) {
        Constraint c;
        for (const auto& s : jc.at("scope")) c.scope.push_back(by_name.at(s.get<std::string>()));
        const std::string type = jc.at("type").get<std::string>();
        if (type == "allowed" || type == "forbidden") {
            c.kind = type == "allowed" ? ConstraintKind::ExtensionAllowed
                                       : ConstraintKind::ExtensionForbidden;
            c.tuples = jc.at("tuples").get<std::vector<std::vector<int>>>();
        } else if (type == "linear") {
            c.kind = ConstraintKind::Linear;
            const auto& jl = jc.at("linear");
            c.coeffs = jl.at("coeffs").get<std::vector<long long>>();
            c.cmp = cmp_from_name(jl.at("cmp").get<std::string>());
            c.constant = jl.at("const").get<long long>();
        } else if (type == "alldifferent") {
            c.kind = ConstraintKind::AllDifferent;
        } else {
            throw std::invalid_argument("unknown constraint type: " + type);
        }
        inst.constraints.push_back(std::move(c));
    }
    inst.validate();
    return inst;
}

inline bool structurally_equal(const CspInstance& a, const CspInstance& b) {
    if (a.vars.size() != b.vars.size() || a.constraints.size() != b.constraints.size())
        return false;
    for (size_t i = 0; i < a.vars.size(); ++i)
        if (a.vars[i].name != b.vars[i].name || a.vars[i].elements != b.vars[i].elements)
            return false;
    for (size_t i = 0; i < a.constraints.size(); ++i) {
        const auto& ca = a.constraints[i];
        const auto& cb = b.constraints[i];
        if (ca.scope != cb.scope || ca.kind != cb.kind || ca.tuples != cb.tuples ||
            ca.coeffs != cb.coeffs || ca.cmp != cb.cmp || ca.constant != cb.constant)
            return false;
    }
    return true;
}

}  // namespace anycsp

#endif
