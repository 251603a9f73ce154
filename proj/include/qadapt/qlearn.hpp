#pragma once
#include <algorithm>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qadapt/envs_grid.hpp"
#include "qadapt/envs_intersection.hpp"
#include "qadapt/metrics.hpp"
#include "qadapt/nnet.hpp"
#include "qadapt/oracle.hpp"
#include "qadapt/rng.hpp"

namespace qadapt {

enum class Algorithm {
    on_policy,
    random_explore,
    expert_demos,
    alt_random_onpolicy,
    alt_random_expert,
    alt_onpolicy_expert,
    alt_random_onpolicy_expert,
    supervised,
};
inline constexpr int kAlgorithmCount = 8;

enum class SelectMode { on_policy, random, expert, supervised };

// Alternating algorithms cycle their modes by episode index, in name order.
std::span<const SelectMode> algorithm_cycle(Algorithm a);

const char* algorithm_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(const std::string& name);

// How the cloned target tensor is written: at the taken action's slot, or at
// the slot the current prediction ranks highest.
enum class UpdateRule { taken_action, predicted_max };

enum class UpdateTiming { episode_sweep, per_step };

struct TrainConfig {
    Algorithm algorithm = Algorithm::on_policy;
    long episodes = 20000;
    double lr = 1e-4;
    double gamma = 1.0;
    long eval_every = 10;
    int eval_rollouts = 250;
    std::uint64_t seed = 0;
    UpdateRule update_rule = UpdateRule::taken_action;
    UpdateTiming update_timing = UpdateTiming::episode_sweep;
    MseScope mse_scope = MseScope::optimal_path;
};

struct RunRecord {
    std::vector<EvalPoint> evals;
    NetParams net;
    std::optional<long> settle;
    double plateau = 0.0;
    TrainConfig config;
    std::string base_id;  // provenance hash of the base checkpoint, if any
};

// Scratch buffers shared by the update helpers.
struct TrainBuffers {
    NetWorkspace ws;
    NetWorkspace ws_next;
    NetGrads grads;
    FeatureVector feat;
    FeatureVector feat_next;
    std::vector<double> pred;
    std::vector<double> target;
};

namespace detail {

inline int argmax_span(std::span<const double> v) {
    int best = 0;
    for (int i = 1; i < int(v.size()); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

}  // namespace detail

template <class Env, class Expert>
int select_action(SelectMode mode, const NetParams* net, const Env& env,
                  const typename Env::State& s, const Expert* expert, Rng& rng,
                  TrainBuffers& buf) {
    switch (mode) {
        case SelectMode::on_policy:
            if (!net) throw std::invalid_argument("select_action: on_policy needs a network");
            env.encode(s, buf.feat);
            return greedy_action(*net, buf.feat, buf.ws);
        case SelectMode::random:
            return uniform_int(rng, 0, Env::n_actions - 1);
        case SelectMode::expert:
            if (!expert) throw std::invalid_argument("select_action: expert policy missing");
            return expert->act(s);
        case SelectMode::supervised:
            throw std::invalid_argument("select_action: supervised is not an acting mode");
    }
    throw std::invalid_argument("select_action: bad mode");
}

// One five-step update: predict, clone the output tensor, rewrite one slot
// with r (+ gamma * max next Q when non-terminal), regress onto the clone.
template <class Env>
void dqn_update_transition(NetParams& net, const Env& env,
                           const Transition<typename Env::State>& t, double gamma, double lr,
                           UpdateRule rule, TrainBuffers& buf) {
    env.encode(t.state, buf.feat);
    forward(net, buf.feat, buf.ws);
    buf.pred = buf.ws.output();

    double q_new = t.reward;
    if (!t.terminal) {
        env.encode(t.next, buf.feat_next);
        forward(net, buf.feat_next, buf.ws_next);
        const std::vector<double>& next_q = buf.ws_next.output();
        q_new += gamma * *std::max_element(next_q.begin(), next_q.end());
    }

    buf.target = buf.pred;
    const int slot = rule == UpdateRule::taken_action ? t.action : detail::argmax_span(buf.pred);
    buf.target[slot] = q_new;

    // buf.ws still holds the forward pass for t.state.
    backward_from_forward(net, buf.target, buf.grads, buf.ws);
    sgd_step(net, buf.grads, lr);
}

template <class Env>
void dqn_update(NetParams& net, const Env& env,
                std::span<const Transition<typename Env::State>> trajectory, double gamma,
                double lr, UpdateRule rule, TrainBuffers& buf) {
    if (trajectory.empty()) throw std::invalid_argument("dqn_update: empty trajectory");
    for (const auto& t : trajectory) dqn_update_transition(net, env, t, gamma, lr, rule, buf);
}

// Behavioral cloning step: regress onto the one-hot encoding of the action.
void supervised_update(NetParams& net, const FeatureVector& features, int expert_action, double lr,
                       TrainBuffers& buf);

std::vector<int> default_net_dims(const GridEnv&);
std::vector<int> default_net_dims(const IntersectionEnv&);

// States a supervised episode visits. Grid: one sweep of the white cells.
template <class Expert>
std::vector<GridState> supervised_states(const GridEnv& env, const Expert&, Rng&) {
    std::vector<GridState> states;
    for (Cell c : grid_white_cells(env.task)) states.push_back({c.y, c.x, 0});
    return states;
}

// Intersection: one expert rollout plus one uniformly random rollout.
template <class Expert>
std::vector<IntersectionState> supervised_states(const IntersectionEnv& env, const Expert& expert,
                                                 Rng& rng) {
    std::vector<IntersectionState> states;
    for (int pass = 0; pass < 2; ++pass) {
        IntersectionState s = env.reset(rng);
        bool terminal = false;
        while (!terminal) {
            states.push_back(s);
            const int a = pass == 0 ? expert.act(s) : uniform_int(rng, 0, 1);
            const auto t = env.step(s, a);
            terminal = t.terminal;
            s = t.next;
        }
    }
    return states;
}

template <class Env, class Expert>
RunRecord train(const Env& env, const TrainConfig& cfg, const Expert* expert,
                const QTable* oracle, const NetParams* base = nullptr) {
    if (cfg.episodes < 0) throw std::invalid_argument("train: negative episode count");
    if (cfg.lr <= 0 || !(cfg.gamma > 0 && cfg.gamma <= 1))
        throw std::invalid_argument("train: lr must be positive, gamma in (0,1]");
    if (cfg.eval_every <= 0 || cfg.eval_rollouts <= 0)
        throw std::invalid_argument("train: eval cadence must be positive");
    if (base && base->dims != default_net_dims(env))
        throw std::invalid_argument("train: base network shape does not fit the environment");

    const std::span<const SelectMode> cycle = algorithm_cycle(cfg.algorithm);
    const bool needs_expert =
        std::find_if(cycle.begin(), cycle.end(), [](SelectMode m) {
            return m == SelectMode::expert || m == SelectMode::supervised;
        }) != cycle.end();
    if (needs_expert && !expert)
        throw std::invalid_argument("train: algorithm requires an expert policy");

    RunRecord rec;
    rec.config = cfg;
    rec.net = base ? *base : init_network(default_net_dims(env), cfg.seed);

    TrainBuffers buf;
    std::vector<Transition<typename Env::State>> traj;
    std::uint64_t eval_index = 0;

    const auto run_eval = [&](long episode) {
        EvalPoint p;
        p.episode = episode;
        p.accuracy = accuracy(rec.net, env, cfg.eval_rollouts, cfg.seed, eval_index++);
        if (oracle) {
            p.mse_optimal = mse_q(rec.net, *oracle, cfg.mse_scope);
            p.mse_all = mse_q(rec.net, *oracle, MseScope::all);
        }
        rec.evals.push_back(p);
    };

    if (cfg.episodes == 0) run_eval(0);

    for (long ep = 0; ep < cfg.episodes; ++ep) {
        const SelectMode mode = cycle[std::size_t(ep) % cycle.size()];
        Rng rng = derive_rng(cfg.seed, stream::kTrain, std::uint64_t(ep));

        if (mode == SelectMode::supervised) {
            for (const auto& s : supervised_states(env, *expert, rng)) {
                env.encode(s, buf.feat);
                supervised_update(rec.net, buf.feat, expert->act(s), cfg.lr, buf);
            }
        } else {
            traj.clear();
            typename Env::State s = env.reset(rng);
            bool terminal = false;
            while (!terminal) {
                const int a = select_action(mode, &rec.net, env, s, expert, rng, buf);
                traj.push_back(env.step(s, a));
                terminal = traj.back().terminal;
                s = traj.back().next;
                if (cfg.update_timing == UpdateTiming::per_step)
                    dqn_update_transition(rec.net, env, traj.back(), cfg.gamma, cfg.lr,
                                          cfg.update_rule, buf);
            }
            if (cfg.update_timing == UpdateTiming::episode_sweep)
                dqn_update(rec.net, env,
                           std::span<const Transition<typename Env::State>>(traj), cfg.gamma,
                           cfg.lr, cfg.update_rule, buf);
        }

        if ((ep + 1) % cfg.eval_every == 0) run_eval(ep + 1);
    }

    if (!rec.evals.empty()) {
        rec.settle = settle_episode(rec.evals);
        rec.plateau = plateau_accuracy(rec.evals);
    }
    return rec;
}

}  // namespace qadapt
