#ifndef ANYCSP_POLICY_HPP
#define ANYCSP_POLICY_HPP

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "anycsp/csp.hpp"
#include "anycsp/cvgraph.hpp"
#include "anycsp/tensor.hpp"

namespace anycsp {

// Flat indices of all trainable tensors, in checkpoint order.
enum ParamId : int {
    P_E_W1, P_E_B1, P_E_W2, P_E_B2, P_E_G, P_E_S,
    P_MV_W, P_MV_B, P_MV_G, P_MV_S,
    P_MC_W, P_MC_B, P_MC_G, P_MC_S,
    P_UC_W1, P_UC_B1, P_UC_W2, P_UC_B2, P_UC_G, P_UC_S,
    P_UV_W1, P_UV_B1, P_UV_W2, P_UV_B2, P_UV_G, P_UV_S,
    P_UX_W1, P_UX_B1, P_UX_W2, P_UX_B2, P_UX_G, P_UX_S,
    P_O_W1, P_O_B1, P_O_W2, P_O_B2,
    P_GRU_WR, P_GRU_BR, P_GRU_WZ, P_GRU_BZ, P_GRU_WN, P_GRU_BN,
    P_H_INIT,
    P_COUNT
};

inline const std::array<const char*, P_COUNT>& param_names() {
    static const std::array<const char*, P_COUNT> names = {
        "enc.w1", "enc.b1", "enc.w2", "enc.b2", "enc.ln_g", "enc.ln_s",
        "msg_val.w", "msg_val.b", "msg_val.ln_g", "msg_val.ln_s",
        "msg_con.w", "msg_con.b", "msg_con.ln_g", "msg_con.ln_s",
        "upd_con.w1", "upd_con.b1", "upd_con.w2", "upd_con.b2", "upd_con.ln_g", "upd_con.ln_s",
        "upd_val.w1", "upd_val.b1", "upd_val.w2", "upd_val.b2", "upd_val.ln_g", "upd_val.ln_s",
        "upd_var.w1", "upd_var.b1", "upd_var.w2", "upd_var.b2", "upd_var.ln_g", "upd_var.ln_s",
        "out.w1", "out.b1", "out.w2", "out.b2",
        "gru.wr", "gru.br", "gru.wz", "gru.bz", "gru.wn", "gru.bn",
        "h_init",
    };
    return names;
}

inline std::pair<int, int> param_shape(int pid, int d) {
    switch (pid) {
        case P_E_W1: return {d + 1, d};
        case P_E_B1: case P_E_B2: case P_E_G: case P_E_S: return {1, d};
        case P_E_W2: return {d, d};
        case P_MV_W: case P_MC_W: return {d, 2 * d};
        case P_MV_B: case P_MV_G: case P_MV_S:
        case P_MC_B: case P_MC_G: case P_MC_S: return {1, 2 * d};
        case P_UC_W1: case P_UC_W2: case P_UV_W1: case P_UV_W2:
        case P_UX_W1: case P_UX_W2: case P_O_W1: return {d, d};
        case P_UC_B1: case P_UC_B2: case P_UC_G: case P_UC_S:
        case P_UV_B1: case P_UV_B2: case P_UV_G: case P_UV_S:
        case P_UX_B1: case P_UX_B2: case P_UX_G: case P_UX_S:
        case P_O_B1: return {1, d};
        case P_O_W2: return {d, 1};
        case P_O_B2: return {1, 1};
        case P_GRU_WR: case P_GRU_WZ: case P_GRU_WN: return {2 * d, d};
        case P_GRU_BR: case P_GRU_BZ: case P_GRU_BN: return {1, d};
        case P_H_INIT: return {1, d};
    }
    throw std::invalid_argument("bad param id");
}

struct PolicyParameters {
    int d = 128;
    Agg agg = Agg::Sum;
    std::vector<Tensor2> t;  // indexed by ParamId

    static PolicyParameters create(int d, Agg agg) {
        PolicyParameters p;
        p.d = d;
        p.agg = agg;
        p.t.resize(P_COUNT);
        for (int i = 0; i < P_COUNT; ++i) {
            auto [r, c] = param_shape(i, d);
            p.t[i] = Tensor2(r, c);
        }
        return p;
    }

    // Weights, biases and h_init uniform in +-sqrt(1/fan); LayerNorm gains
    // one, shifts zero. Biases must not be zero: with zero biases every relu
    // preactivation starts exactly on the kink, where the subgradient is a
    // poor surrogate for the local slope and early policy gradients come out
    // wildly miscalibrated.
    void init(Rng& rng) {
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        for (int i = 0; i < P_COUNT; ++i) {
            const auto& name = param_names()[i];
            const std::string n(name);
            if (n.ends_with(".ln_g")) {
                t[i].fill(1.0);
            } else if (n.ends_with(".ln_s")) {
                t[i].fill(0.0);
            } else {
                // Gain 2 on the usual 1/sqrt(fan) bound: with smaller inits
                // the policy output starts too close to uniform and the
                // REINFORCE signal cannot reliably break the symmetry within
                // a smoke-scale training budget.
                const double fan = t[i].rows > 1 ? t[i].rows : t[i].cols;
                const double bound = 2.0 * std::sqrt(1.0 / fan);
                for (double& x : t[i].v) x = bound * unif(rng);
            }
        }
    }

    std::vector<Tensor2*> ptrs() {
        std::vector<Tensor2*> out;
        out.reserve(t.size());
        for (auto& x : t) out.push_back(&x);
        return out;
    }

    std::vector<Tensor2> zero_like() const {
        std::vector<Tensor2> g;
        g.reserve(t.size());
        for (const auto& x : t) g.emplace_back(x.rows, x.cols);
        return g;
    }

    bool compatible(const PolicyParameters& o) const { return d == o.d && agg == o.agg; }
};

// Tape node ids of the parameter leaves, created once per tape.
struct ParamNodes {
    std::array<int, P_COUNT> id;
};

inline ParamNodes make_param_nodes(Tape& tp) {
    ParamNodes pn{};
    for (int i = 0; i < P_COUNT; ++i) pn.id[i] = tp.param(i);
    return pn;
}

namespace detail {

inline int linear_ln(Tape& tp, const ParamNodes& pn, int x, int w, int b, int g, int s) {
    return tp.layer_norm(tp.add_bias(tp.matmul(x, pn.id[w]), pn.id[b]), pn.id[g], pn.id[s]);
}

inline int mlp2(Tape& tp, const ParamNodes& pn, int x, int w1, int b1, int w2, int b2) {
    const int h = tp.relu(tp.add_bias(tp.matmul(x, pn.id[w1]), pn.id[b1]));
    return tp.add_bias(tp.matmul(h, pn.id[w2]), pn.id[b2]);
}

inline int mlp2_ln(Tape& tp, const ParamNodes& pn, int x, int w1, int b1, int w2, int b2, int g,
                   int s) {
    return tp.layer_norm(mlp2(tp, pn, x, w1, b1, w2, b2), pn.id[g], pn.id[s]);
}

inline int gru(Tape& tp, const ParamNodes& pn, int h, int x) {
    const int hx = tp.concat_cols(h, x);
    const int r = tp.sigmoid(tp.add_bias(tp.matmul(hx, pn.id[P_GRU_WR]), pn.id[P_GRU_BR]));
    const int z = tp.sigmoid(tp.add_bias(tp.matmul(hx, pn.id[P_GRU_WZ]), pn.id[P_GRU_BZ]));
    const int rhx = tp.concat_cols(tp.mul(r, h), x);
    const int n = tp.tanh_op(tp.add_bias(tp.matmul(rhx, pn.id[P_GRU_WN]), pn.id[P_GRU_BN]));
    // h' = (1-z) * n + z * h
    return tp.add(tp.mul(tp.affine(z, -1.0, 1.0), n), tp.mul(z, h));
}

}  // namespace detail

// Initial recurrent state: h_init broadcast over all values.
inline int init_state(Tape& tp, const ParamNodes& pn, const CvGraph& g) {
    return tp.gather_rows(pn.id[P_H_INIT], std::vector<int>(g.num_values, 0));
}

struct PolicyStepOut {
    int phi;   // num_values x 1 probabilities (per-domain softmax)
    int score; // num_values x 1 raw logits, pre-softmax
    int h;     // num_values x d updated recurrent state
};

// One round of the four directed message passes. Reads the graph's current
// labels; never looks at a previous soft assignment.
inline PolicyStepOut policy_step(Tape& tp, const PolicyParameters& params, const ParamNodes& pn,
                                 const CvGraph& g, int h_node) {
    const int d = params.d;
    const Agg agg = params.agg;

    std::vector<double> lv(g.num_values);
    for (int i = 0; i < g.num_values; ++i) lv[i] = g.label_value[i];

    const int x = detail::mlp2_ln(tp, pn, tp.append_const_col(h_node, lv), P_E_W1, P_E_B1, P_E_W2,
                                  P_E_B2, P_E_G, P_E_S);

    // values -> constraints
    int y_v;  // aggregated constraint messages per value, zero if no edges
    if (g.num_cons > 0 && !g.edge_value.empty()) {
        const int mv = detail::linear_ln(tp, pn, x, P_MV_W, P_MV_B, P_MV_G, P_MV_S);
        std::vector<uint8_t> le(g.label_edge.begin(), g.label_edge.end());
        const int msg_up = tp.gather_rows_block(mv, g.edge_value, le, d);
        int y_c = tp.segment_agg(msg_up, g.edge_cons, g.num_cons, agg);
        y_c = detail::mlp2_ln(tp, pn, y_c, P_UC_W1, P_UC_B1, P_UC_W2, P_UC_B2, P_UC_G, P_UC_S);
        // constraints -> values
        const int mc = detail::linear_ln(tp, pn, y_c, P_MC_W, P_MC_B, P_MC_G, P_MC_S);
        const int msg_down = tp.gather_rows_block(mc, g.edge_cons, le, d);
        y_v = tp.segment_agg(msg_down, g.edge_value, g.num_values, agg);
    } else {
        y_v = tp.input(Tensor2(g.num_values, d));
    }

    const int z_v = tp.add(detail::mlp2_ln(tp, pn, tp.add(x, y_v), P_UV_W1, P_UV_B1, P_UV_W2,
                                           P_UV_B2, P_UV_G, P_UV_S),
                           x);

    // values -> variables -> values
    const int z_x = detail::mlp2_ln(tp, pn, tp.segment_agg(z_v, g.value_var, g.num_vars, agg),
                                    P_UX_W1, P_UX_B1, P_UX_W2, P_UX_B2, P_UX_G, P_UX_S);
    const int z_back = tp.gather_rows(z_x, g.value_var);

    const int h_new = detail::gru(tp, pn, h_node, tp.add(z_v, z_back));
    const int o = detail::mlp2(tp, pn, h_new, P_O_W1, P_O_B1, P_O_W2, P_O_B2);
    const int phi = tp.segment_softmax(o, g.value_var, g.num_vars);
    return {phi, o, h_new};
}

// Softmax over the disjoint union of all domains (local-search variant).
inline int union_softmax(Tape& tp, const CvGraph& g, int score) {
    return tp.segment_softmax(score, std::vector<int>(g.num_values, 0), 1);
}

inline SoftAssignment soft_from_phi(const CvGraph& g, const Tensor2& phi) {
    SoftAssignment s;
    s.probs.resize(g.num_vars);
    for (int x = 0; x < g.num_vars; ++x)
        s.probs[x].assign(phi.v.begin() + g.var_offset[x], phi.v.begin() + g.var_offset[x + 1]);
    return s;
}

}  // namespace anycsp

#endif
