#ifndef ANYCSP_CSP_HPP
#define ANYCSP_CSP_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace anycsp {

using Rng = std::mt19937_64;

enum class ConstraintKind : uint8_t { ExtensionAllowed, ExtensionForbidden, Linear, AllDifferent };

enum class Cmp : uint8_t { Le, Lt, Eq, Ne, Gt, Ge };

inline const char* cmp_name(Cmp c) {
    switch (c) {
        case Cmp::Le: return "le";
        case Cmp::Lt: return "lt";
        case Cmp::Eq: return "eq";
        case Cmp::Ne: return "ne";
        case Cmp::Gt: return "gt";
        case Cmp::Ge: return "ge";
    }
    return "?";
}

inline Cmp cmp_from_name(const std::string& s) {
    if (s == "le") return Cmp::Le;
    if (s == "lt") return Cmp::Lt;
    if (s == "eq") return Cmp::Eq;
    if (s == "ne") return Cmp::Ne;
    if (s == "gt") return Cmp::Gt;
    if (s == "ge") return Cmp::Ge;
    throw std::invalid_argument("unknown comparator: " + s);
}

inline bool cmp_eval(Cmp c, long long lhs, long long rhs) {
    switch (c) {
        case Cmp::Le: return lhs <= rhs;
        case Cmp::Lt: return lhs < rhs;
        case Cmp::Eq: return lhs == rhs;
        case Cmp::Ne: return lhs != rhs;
        case Cmp::Gt: return lhs > rhs;
        case Cmp::Ge: return lhs >= rhs;
    }
    return false;
}

// Relation tuples are stored as domain indices aligned with the scope.
struct Constraint {
    std::vector<int> scope;
    ConstraintKind kind = ConstraintKind::ExtensionAllowed;
    std::vector<std::vector<int>> tuples;  // extension modes
    std::vector<long long> coeffs;         // linear
    Cmp cmp = Cmp::Le;
    long long constant = 0;

    int arity() const { return static_cast<int>(scope.size()); }
};

struct Variable {
    std::string name;
    // Integer element per domain index. Defaults to 0..n-1; carries the real
    // numeric value for linear and all-different semantics.
    std::vector<long long> elements;

    int domain_size() const { return static_cast<int>(elements.size()); }
};

struct CspInstance {
    std::vector<Variable> vars;
    std::vector<Constraint> constraints;

    int num_vars() const { return static_cast<int>(vars.size()); }
    int num_constraints() const { return static_cast<int>(constraints.size()); }

    int num_values() const {
        int n = 0;
        for (const auto& v : vars) n += v.domain_size();
        return n;
    }

    void validate() const {
        for (const auto& v : vars)
            if (v.domain_size() < 1) throw std::invalid_argument("empty domain: " + v.name);
        for (const auto& c : constraints) {
            std::set<int> uniq(c.scope.begin(), c.scope.end());
            if (uniq.size() != c.scope.size())
                throw std::invalid_argument("constraint scope has repeated variables");
            for (int x : c.scope)
                if (x < 0 || x >= num_vars()) throw std::invalid_argument("scope var out of range");
            if (c.kind == ConstraintKind::ExtensionAllowed ||
                c.kind == ConstraintKind::ExtensionForbidden) {
                std::set<std::vector<int>> seen;
                for (const auto& t : c.tuples) {
                    if (t.size() != c.scope.size())
                        throw std::invalid_argument("tuple arity mismatch");
                    for (size_t i = 0; i < t.size(); ++i)
                        if (t[i] < 0 || t[i] >= vars[c.scope[i]].domain_size())
                            throw std::invalid_argument("tuple index out of domain");
                    if (!seen.insert(t).second)
                        throw std::invalid_argument("duplicate tuple in relation");
                }
            } else if (c.kind == ConstraintKind::Linear) {
                if (c.coeffs.size() != c.scope.size())
                    throw std::invalid_argument("linear coefficient count mismatch");
            }
        }
    }
};

// One chosen domain index per variable, aligned with instance variable order.
using Assignment = std::vector<int>;

// Per-value probability, grouped by variable in domain order.
struct SoftAssignment {
    std::vector<std::vector<double>> probs;

    void check_normalized(double tol = 1e-6) const {
        for (const auto& p : probs) {
            double s = 0.0;
            for (double x : p) {
                if (x < 0.0) throw std::invalid_argument("negative probability");
                s += x;
            }
            if (std::abs(s - 1.0) > tol) throw std::invalid_argument("unnormalized soft assignment");
        }
    }
};

inline bool satisfies(const CspInstance& inst, const Constraint& c, const Assignment& a) {
    switch (c.kind) {
        case ConstraintKind::ExtensionAllowed:
        case ConstraintKind::ExtensionForbidden: {
            std::vector<int> t(c.scope.size());
            for (size_t i = 0; i < c.scope.size(); ++i) t[i] = a[c.scope[i]];
            const bool listed = std::find(c.tuples.begin(), c.tuples.end(), t) != c.tuples.end();
            return c.kind == ConstraintKind::ExtensionAllowed ? listed : !listed;
        }
        case ConstraintKind::Linear: {
            long long lhs = 0;
            for (size_t i = 0; i < c.scope.size(); ++i)
                lhs += c.coeffs[i] * inst.vars[c.scope[i]].elements[a[c.scope[i]]];
            return cmp_eval(c.cmp, lhs, c.constant);
        }
        case ConstraintKind::AllDifferent: {
            std::vector<long long> vals;
            vals.reserve(c.scope.size());
            for (int x : c.scope) vals.push_back(inst.vars[x].elements[a[x]]);
            std::sort(vals.begin(), vals.end());
            return std::adjacent_find(vals.begin(), vals.end()) == vals.end();
        }
    }
    return false;
}

inline int satisfied_count(const CspInstance& inst, const Assignment& a) {
    int n = 0;
    for (const auto& c : inst.constraints)
        if (satisfies(inst, c, a)) ++n;
    return n;
}

// Fraction of satisfied constraints, counted exactly before division.
inline double quality(const CspInstance& inst, const Assignment& a) {
    if (inst.constraints.empty()) throw std::invalid_argument("degenerate instance");
    return static_cast<double>(satisfied_count(inst, a)) / inst.num_constraints();
}

inline Assignment uniform_assignment(const CspInstance& inst, Rng& rng) {
    Assignment a(inst.num_vars());
    for (int x = 0; x < inst.num_vars(); ++x)
        a[x] = static_cast<int>(rng() % static_cast<uint64_t>(inst.vars[x].domain_size()));
    return a;
}

// Inverse-CDF per variable in domain order, one uniform draw each.
inline Assignment sample_assignment(const SoftAssignment& soft, Rng& rng) {
    Assignment a(soft.probs.size());
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (size_t x = 0; x < soft.probs.size(); ++x) {
        const double u = unif(rng);
        double cdf = 0.0;
        int pick = static_cast<int>(soft.probs[x].size()) - 1;
        for (size_t i = 0; i < soft.probs[x].size(); ++i) {
            cdf += soft.probs[x][i];
            if (u < cdf) {
                pick = static_cast<int>(i);
                break;
            }
        }
        a[x] = pick;
    }
    return a;
}

inline double log_probability(const SoftAssignment& soft, const Assignment& a, double eps) {
    double s = 0.0;
    for (size_t x = 0; x < soft.probs.size(); ++x) s += std::log(soft.probs[x][a[x]] + eps);
    return s;
}

}  // namespace anycsp

#endif
