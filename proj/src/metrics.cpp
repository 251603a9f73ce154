#include "qadapt/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace qadapt {

int greedy_action(const NetParams& net, const FeatureVector& features, NetWorkspace& ws) {
    forward(net, features, ws);
    const std::vector<double>& out = ws.output();
    int best = 0;
    for (int a = 1; a < int(out.size()); ++a)
        if (out[a] > out[best]) best = a;
    return best;
}

double accuracy(const NetParams& net, const GridEnv& env, int n_rollouts, std::uint64_t seed,
                std::uint64_t eval_index) {
    // One greedy trajectory per possible start cell; each rollout stream only
    // ever supplies the start draw, exactly like the generic implementation.
    int success_by_cell[9];
    std::fill(std::begin(success_by_cell), std::end(success_by_cell), -1);

    NetWorkspace ws;
    FeatureVector f;
    int ok = 0;
    for (int i = 0; i < n_rollouts; ++i) {
        Rng rng = derive_rng(seed, stream::kEval, eval_index, static_cast<std::uint64_t>(i));
        const GridState start = env.reset(rng);
        int& memo = success_by_cell[start.y * kGridSize + start.x];
        if (memo < 0) {
            std::vector<Transition<GridState>> traj;
            GridState s = start;
            while (traj.empty() || !traj.back().terminal) {
                env.encode(s, f);
                traj.push_back(env.step(s, greedy_action(net, f, ws)));
                s = traj.back().next;
            }
            memo = env.is_success(traj) ? 1 : 0;
        }
        ok += memo;
    }
    return double(ok) / n_rollouts;
}

std::vector<std::pair<GridState, int>> optimal_path_pairs(const QTable& table) {
    std::vector<std::pair<GridState, int>> pairs;
    GridEnv env{table.task, StartMode::fixed};
    GridState s{2, 2, 0};
    while (!grid_terminal(table.task, s)) {
        const int a = optimal_action(table, s);
        pairs.emplace_back(s, a);
        s = env.step(s, a).next;
    }
    return pairs;
}

double mse_q(const NetParams& net, const QTable& table, MseScope scope) {
    if (net.input_dim() != 2 || net.output_dim() != kGridActions)
        throw std::invalid_argument("mse_q: grid-shaped network required");

    NetWorkspace ws;
    FeatureVector f;
    double sum = 0.0;
    long n = 0;
    // Stationary tables ignore the step; step-augmented ones are compared at
    // the step the pair is reached (0 for the start-state pairs of scope all).
    const auto add = [&](Cell c, int step, int a) {
        f.assign({double(c.y), double(c.x)});
        forward(net, f, ws);
        const double truth = table.variant == OracleVariant::stationary
                                 ? table.value_at(c, a)
                                 : table.value_at(c, std::min(step, kGridStepCap), a);
        const double d = ws.output()[a] - truth;
        sum += d * d;
        ++n;
    };

    if (scope == MseScope::all) {
        for (Cell c : grid_white_cells(table.task))
            for (int a = 0; a < kGridActions; ++a) add(c, 0, a);
    } else {
        for (const auto& [s, a] : optimal_path_pairs(table)) {
            if (scope == MseScope::optimal_path) {
                add({s.y, s.x}, s.steps, a);
            } else {
                for (int aa = 0; aa < kGridActions; ++aa) add({s.y, s.x}, s.steps, aa);
            }
        }
    }
    return sum / double(n);
}

std::optional<long> settle_episode(std::span<const EvalPoint> evals, double level) {
    if (evals.empty()) throw std::invalid_argument("settle_episode: no evals");
    std::optional<long> settled;
    for (const EvalPoint& e : evals) {
        if (e.accuracy >= level) {
            if (!settled) settled = e.episode;
        } else {
            settled.reset();
        }
    }
    return settled;
}

double plateau_accuracy(std::span<const EvalPoint> evals) {
    if (evals.empty()) throw std::invalid_argument("plateau_accuracy: no evals");
    const std::size_t count = std::max<std::size_t>(1, (evals.size() + 3) / 4);
    double sum = 0.0;
    for (std::size_t i = evals.size() - count; i < evals.size(); ++i) sum += evals[i].accuracy;
    return sum / double(count);
}

double rolling_accuracy(std::span<const EvalPoint> evals, std::size_t i, int window) {
    if (i >= evals.size()) throw std::out_of_range("rolling_accuracy: index");
    const std::size_t lo = i + 1 >= std::size_t(window) ? i + 1 - window : 0;
    double sum = 0.0;
    for (std::size_t k = lo; k <= i; ++k) sum += evals[k].accuracy;
    return sum / double(i - lo + 1);
}

}  // namespace qadapt
