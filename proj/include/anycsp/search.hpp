#ifndef ANYCSP_SEARCH_HPP
#define ANYCSP_SEARCH_HPP

#include <chrono>
#include <optional>
#include <vector>

#include "anycsp/csp.hpp"
#include "anycsp/cvgraph.hpp"
#include "anycsp/policy.hpp"

namespace anycsp {

enum class SearchMode { Global, Local, QualityReward };

struct SearchConfig {
    int max_steps = 100;
    double timeout_s = 0.0;  // 0 = no timeout
    SearchMode mode = SearchMode::Global;
    bool stop_on_satisfied = true;
};

struct EpisodeTrace {
    Assignment initial;
    double initial_quality = 0.0;
    Assignment best;
    double best_quality = 0.0;
    int steps = 0;
    int steps_to_best = 0;
    bool solved = false;

    std::vector<double> qualities;     // Q(alpha^(t)), t = 1..steps
    std::vector<double> best_curve;    // q^(t+1)
    std::vector<double> rewards;       // r^(t)
    std::vector<double> wall_ms;       // cumulative wall time after step t

    // Training-only payload: per step the phi tape node and the action rows
    // (global value ids in global/qual mode, a single value id in local mode).
    std::vector<int> phi_nodes;
    std::vector<std::vector<int>> action_rows;

    double total_reward() const {
        double s = 0.0;
        for (double r : rewards) s += r;
        return s;
    }
};

// Run one episode of the policy on an instance. With a tape the full forward
// pass stays recorded for REINFORCE; without one each step runs on a scratch
// tape and only the trace is kept.
inline EpisodeTrace rollout(const PolicyParameters& params, const CspInstance& inst, CvGraph& g,
                            const SearchConfig& cfg, Rng& rng, Tape* tape = nullptr,
                            std::vector<Tensor2>* param_grads = nullptr) {
    EpisodeTrace tr;
    const auto t_start = std::chrono::steady_clock::now();
    auto elapsed_s = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    };

    Assignment alpha = uniform_assignment(inst, rng);
    tr.initial = alpha;
    tr.initial_quality = quality(inst, alpha);
    tr.best = alpha;
    tr.best_quality = tr.initial_quality;  // q^(1) = Q(alpha^(0))
    tr.steps_to_best = 0;
    tr.solved = tr.best_quality >= 1.0;
    if (tr.solved && cfg.stop_on_satisfied) return tr;

    PolicyParameters mut = params;  // nodes reference param storage read-only
    Tape scratch;
    Tape* tp = tape;
    std::vector<Tensor2> scratch_grads;
    std::optional<ParamNodes> pn;
    int h_node = -1;
    Tensor2 h_saved;  // carries the state across scratch-tape resets

    auto fresh_tape = [&] {
        scratch.clear();
        scratch.register_params(mut.ptrs(), &scratch_grads);
        tp = &scratch;
        pn = make_param_nodes(*tp);
    };
    if (tape) {
        tape->register_params(mut.ptrs(), param_grads);
        pn = make_param_nodes(*tape);
        h_node = init_state(*tape, *pn, g);
    } else {
        fresh_tape();
        h_node = init_state(*tp, *pn, g);
        h_saved = tp->val(h_node);
    }

    for (int t = 1; t <= cfg.max_steps; ++t) {
        if (cfg.timeout_s > 0.0 && elapsed_s() >= cfg.timeout_s) break;
        relabel(g, inst, alpha);
        if (!tape) {
            fresh_tape();
            h_node = tp->input(h_saved);
        }
        PolicyStepOut out = policy_step(*tp, params, *pn, g, h_node);
        h_node = out.h;

        std::vector<int> actions;
        if (cfg.mode == SearchMode::Local) {
            const int dist = union_softmax(*tp, g, out.score);
            const Tensor2& phi = tp->val(dist);
            // inverse CDF over the value union
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            const double u = unif(rng);
            double cdf = 0.0;
            int pick = g.num_values - 1;
            for (int i = 0; i < g.num_values; ++i) {
                cdf += phi.v[i];
                if (u < cdf) {
                    pick = i;
                    break;
                }
            }
            alpha[g.value_var[pick]] = g.value_index[pick];
            actions.push_back(pick);
            if (tape) tr.phi_nodes.push_back(dist);
        } else {
            const Tensor2& phi = tp->val(out.phi);
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            for (int x = 0; x < g.num_vars; ++x) {
                const double u = unif(rng);
                double cdf = 0.0;
                int pick = g.var_offset[x + 1] - 1;
                for (int i = g.var_offset[x]; i < g.var_offset[x + 1]; ++i) {
                    cdf += phi.v[i];
                    if (u < cdf) {
                        pick = i;
                        break;
                    }
                }
                alpha[x] = g.value_index[pick];
                actions.push_back(pick);
            }
            if (tape) tr.phi_nodes.push_back(out.phi);
        }
        if (tape) tr.action_rows.push_back(std::move(actions));
        if (!tape) h_saved = tp->val(h_node);

        const double q = quality(inst, alpha);
        double r;
        if (cfg.mode == SearchMode::QualityReward)
            r = q - tr.initial_quality;
        else
            r = std::max(q - tr.best_quality, 0.0);
        tr.qualities.push_back(q);
        tr.rewards.push_back(r);
        if (q > tr.best_quality) {
            tr.best_quality = q;
            tr.best = alpha;
            tr.steps_to_best = t;
        }
        tr.best_curve.push_back(tr.best_quality);
        tr.wall_ms.push_back(elapsed_s() * 1000.0);
        tr.steps = t;
        if (tr.best_quality >= 1.0) {
            tr.solved = true;
            if (cfg.stop_on_satisfied) break;
        }
    }
    return tr;
}

// Local-step action on an explicit distribution over the value union; the new
// assignment differs from the current one in at most one variable.
inline Assignment sample_step_local(const std::vector<double>& union_probs, const CvGraph& g,
                                    const Assignment& current, Rng& rng) {
    Assignment next = current;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u = unif(rng);
    double cdf = 0.0;
    int pick = g.num_values - 1;
    for (int i = 0; i < g.num_values; ++i) {
        cdf += union_probs[i];
        if (u < cdf) {
            pick = i;
            break;
        }
    }
    next[g.value_var[pick]] = g.value_index[pick];
    return next;
}

inline double reward_quality_baseline(double step_quality, double initial_quality) {
    return step_quality - initial_quality;
}

}  // namespace anycsp

#endif
