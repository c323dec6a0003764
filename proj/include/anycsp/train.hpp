#ifndef ANYCSP_TRAIN_HPP
#define ANYCSP_TRAIN_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "anycsp/checkpoint.hpp"
#include "anycsp/policy.hpp"
#include "anycsp/search.hpp"

namespace anycsp {

struct TrainConfig {
    long long steps = 500000;
    int batch = 25;
    int t_train = 40;
    double discount = 0.75;
    double lr_start = 5e-6;
    double lr_end = 5e-7;
    double eps = 1e-5;
    int t_val = 200;
    long long val_every = 0;  // 0 = no validation
    double clip_norm = 10.0;
    bool clip = false;
    SearchMode mode = SearchMode::Global;
    uint64_t seed = 0;
};

inline std::vector<double> discounted_returns(const std::vector<double>& rewards, double lambda) {
    std::vector<double> g(rewards.size());
    double acc = 0.0;
    for (int t = static_cast<int>(rewards.size()) - 1; t >= 0; --t) {
        acc = rewards[t] + lambda * acc;
        g[t] = acc;
    }
    return g;
}

// Gradient of the REINFORCE surrogate sum_t G_t * sum_X log(phi_t(a_t(X)) + eps)
// for one taped episode; G_t are treated as constants. Gradients accumulate
// into `grads` (ascent direction).
inline void policy_gradient(Tape& tape, const EpisodeTrace& tr, double lambda, double eps,
                            std::vector<Tensor2>& grads) {
    if (tr.phi_nodes.empty()) return;
    const std::vector<double> g = discounted_returns(tr.rewards, lambda);
    bool any = false;
    for (double x : g) any |= (x != 0.0);
    if (!any) return;
    int loss = tape.zero_scalar();
    for (size_t t = 0; t < tr.phi_nodes.size(); ++t) {
        if (g[t] == 0.0) continue;
        const int lp = tape.log_pick_sum(tr.phi_nodes[t], tr.action_rows[t], eps);
        loss = tape.scale_add(loss, lp, g[t]);
    }
    (void)grads;  // bound to the tape via register_params at rollout time
    tape.backward(loss);
}

struct AdamState {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long long step = 0;
    std::vector<Tensor2> m;
    std::vector<Tensor2> v;

    static AdamState create(const PolicyParameters& p) {
        AdamState s;
        s.m = p.zero_like();
        s.v = p.zero_like();
        return s;
    }

    // Descent step with the given gradient.
    void update(PolicyParameters& p, const std::vector<Tensor2>& grad, double lr) {
        ++step;
        const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
        const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
        for (size_t i = 0; i < p.t.size(); ++i)
            for (size_t j = 0; j < p.t[i].v.size(); ++j) {
                const double g = grad[i].v[j];
                m[i].v[j] = beta1 * m[i].v[j] + (1.0 - beta1) * g;
                v[i].v[j] = beta2 * v[i].v[j] + (1.0 - beta2) * g * g;
                p.t[i].v[j] -= lr * (m[i].v[j] / bc1) / (std::sqrt(v[i].v[j] / bc2) + eps);
            }
    }
};

struct TrainStepStats {
    double mean_total_reward = 0.0;
    double mean_best_quality = 0.0;
    bool skipped = false;
};

using InstanceSampler = std::function<CspInstance(Rng&)>;

// One REINFORCE step: batch of fresh instances, one trajectory each,
// batch-averaged ascent gradient fed to Adam as descent on the negation.
inline TrainStepStats train_step(PolicyParameters& params, AdamState& opt,
                                 const InstanceSampler& sampler, const TrainConfig& cfg,
                                 double lr, Rng& rng) {
    TrainStepStats st;
    std::vector<Tensor2> grads = params.zero_like();
    for (int b = 0; b < cfg.batch; ++b) {
        CspInstance inst = sampler(rng);
        CvGraph g = build_graph(inst);
        SearchConfig sc;
        sc.max_steps = cfg.t_train;
        sc.mode = cfg.mode;
        sc.stop_on_satisfied = false;  // fixed-length training traces
        Tape tape;
        EpisodeTrace tr = rollout(params, inst, g, sc, rng, &tape, &grads);
        policy_gradient(tape, tr, cfg.discount, cfg.eps, grads);
        st.mean_total_reward += tr.total_reward();
        st.mean_best_quality += tr.best_quality;
    }
    st.mean_total_reward /= cfg.batch;
    st.mean_best_quality /= cfg.batch;

    // descend on the negated, batch-averaged ascent gradient
    bool finite = true;
    double sq = 0.0;
    for (auto& t : grads)
        for (double& x : t.v) {
            x = -x / cfg.batch;
            if (!std::isfinite(x)) finite = false;
            sq += x * x;
        }
    if (!finite) {
        st.skipped = true;
        return st;
    }
    if (cfg.clip) {
        const double norm = std::sqrt(sq);
        if (norm > cfg.clip_norm) {
            const double s = cfg.clip_norm / norm;
            for (auto& t : grads)
                for (double& x : t.v) x *= s;
        }
    }
    opt.update(params, grads, lr);
    return st;
}

inline double learning_rate_at(const TrainConfig& cfg, long long step) {
    return cfg.lr_start +
           (cfg.lr_end - cfg.lr_start) * static_cast<double>(step) / static_cast<double>(cfg.steps);
}

// Mean unsatisfied constraints in the best solution over a fixed validation
// set; stochastic rollouts with a per-instance seed.
inline double validate(const PolicyParameters& params, const std::vector<CspInstance>& val_set,
                       int t_val, uint64_t seed) {
    double total = 0.0;
    for (size_t i = 0; i < val_set.size(); ++i) {
        const CspInstance& inst = val_set[i];
        CvGraph g = build_graph(inst);
        SearchConfig sc;
        sc.max_steps = t_val;
        sc.stop_on_satisfied = true;
        Rng rng(seed + i);
        EpisodeTrace tr = rollout(params, inst, g, sc, rng);
        total += (1.0 - tr.best_quality) * inst.num_constraints();
    }
    return val_set.empty() ? 0.0 : total / static_cast<double>(val_set.size());
}

}  // namespace anycsp

#endif
