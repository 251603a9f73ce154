#pragma once
#include <optional>
#include <span>
#include <vector>

#include "qadapt/envs_grid.hpp"
#include "qadapt/nnet.hpp"
#include "qadapt/oracle.hpp"
#include "qadapt/rng.hpp"

namespace qadapt {

struct EvalPoint {
    long episode = 0;
    double accuracy = 0.0;
    std::optional<double> mse_optimal;
    std::optional<double> mse_all;
};

enum class MseScope {
    optimal_path,              // (state, optimal action) pairs on the optimal trajectory
    optimal_path_all_actions,  // same states, all four actions
    all,                       // every white cell x action (24 pairs)
};

int greedy_action(const NetParams& net, const FeatureVector& features, NetWorkspace& ws);

// Greedy rollout under the net's argmax policy; returns the trajectory.
template <class Env>
std::vector<Transition<typename Env::State>> greedy_rollout(const NetParams& net, const Env& env,
                                                            Rng& rng) {
    std::vector<Transition<typename Env::State>> traj;
    NetWorkspace ws;
    FeatureVector f;
    typename Env::State s = env.reset(rng);
    while (traj.empty() || !traj.back().terminal) {
        env.encode(s, f);
        traj.push_back(env.step(s, greedy_action(net, f, ws)));
        s = traj.back().next;
    }
    return traj;
}

// Fraction of n_rollouts greedy rollouts that end in success. Rollout i draws
// from the stream keyed (seed, eval_index, i), so a fixed key fixes the
// number exactly, independent of evaluation order or thread count.
template <class Env>
double accuracy(const NetParams& net, const Env& env, int n_rollouts, std::uint64_t seed,
                std::uint64_t eval_index) {
    int ok = 0;
#pragma omp parallel for schedule(static) reduction(+ : ok)
    for (int i = 0; i < n_rollouts; ++i) {
        Rng rng = derive_rng(seed, stream::kEval, eval_index, static_cast<std::uint64_t>(i));
        const auto traj = greedy_rollout(net, env, rng);
        ok += env.is_success(traj) ? 1 : 0;
    }
    return double(ok) / n_rollouts;
}

// Grid rollouts are deterministic once the start cell is drawn, so the six
// possible trajectories are evaluated once and reused; the per-rollout
// streams are consumed exactly as the generic path would.
double accuracy(const NetParams& net, const GridEnv& env, int n_rollouts, std::uint64_t seed,
                std::uint64_t eval_index);

// Mean squared error between the net's Q outputs and the oracle table over
// the scope's (state, action) pairs. Grid only.
double mse_q(const NetParams& net, const QTable& table, MseScope scope);

// The (state, optimal action) pairs along the table's optimal trajectory
// from the fixed start (2,2).
std::vector<std::pair<GridState, int>> optimal_path_pairs(const QTable& table);

// Earliest eval episode from which accuracy stays >= level to the end.
std::optional<long> settle_episode(std::span<const EvalPoint> evals, double level = 1.0);

// Mean accuracy over the final quarter of evals (the "settles at X%" figure).
double plateau_accuracy(std::span<const EvalPoint> evals);

// Trailing mean of the `window` evals ending at index i (fewer at the front).
double rolling_accuracy(std::span<const EvalPoint> evals, std::size_t i, int window = 5);

}  // namespace qadapt
