#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "qadapt/envs_grid.hpp"
#include "qadapt/oracle.hpp"
#include "qadapt/qlearn.hpp"

using namespace qadapt;

namespace {

NetParams constant_net(const std::array<double, 4>& b) {
    NetParams net;
    net.dims = {2, 4};
    net.w = {std::vector<double>(8, 0.0)};
    net.b = {{b[0], b[1], b[2], b[3]}};
    return net;
}

bool params_equal(const NetParams& a, const NetParams& b) {
    return a.dims == b.dims && a.w == b.w && a.b == b.b;
}

// Single state, one action, reward 5 on a terminal step.
struct ToyEnv {
    using State = int;
    static constexpr int n_actions = 1;
    static constexpr int feature_dim = 1;
    void encode(const State&, FeatureVector& f) const { f.assign({1.0}); }
};

}  // namespace

TEST_CASE("algorithm cycles follow the name order") {
    using M = SelectMode;
    const auto expect = [](Algorithm a, std::vector<M> want) {
        const auto got = algorithm_cycle(a);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < want.size(); ++i) CHECK(got[i] == want[i]);
    };
    expect(Algorithm::on_policy, {M::on_policy});
    expect(Algorithm::random_explore, {M::random});
    expect(Algorithm::expert_demos, {M::expert});
    expect(Algorithm::alt_random_onpolicy, {M::random, M::on_policy});
    expect(Algorithm::alt_random_expert, {M::random, M::expert});
    expect(Algorithm::alt_onpolicy_expert, {M::on_policy, M::expert});
    expect(Algorithm::alt_random_onpolicy_expert, {M::random, M::on_policy, M::expert});
    expect(Algorithm::supervised, {M::supervised});

    SUBCASE("episodes 0..3 of the three-way alternator") {
        const auto cycle = algorithm_cycle(Algorithm::alt_random_onpolicy_expert);
        const std::array<M, 4> want{M::random, M::on_policy, M::expert, M::random};
        for (std::size_t ep = 0; ep < want.size(); ++ep) CHECK(cycle[ep % cycle.size()] == want[ep]);
    }
}

TEST_CASE("algorithm names round-trip through the parser") {
    for (int i = 0; i < kAlgorithmCount; ++i) {
        const Algorithm a = static_cast<Algorithm>(i);
        const auto parsed = parse_algorithm(algorithm_name(a));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == a);
    }
    CHECK(!parse_algorithm("q_lambda").has_value());
    CHECK(!parse_algorithm("").has_value());
}

TEST_CASE("select_action: greedy, random frequencies, expert, contract errors") {
    const GridEnv env{original_grid_task(), StartMode::fixed};
    const GridExpert expert = make_grid_expert(env.task);
    TrainBuffers buf;
    Rng rng = make_rng(1);

    SUBCASE("on_policy takes the net argmax") {
        const NetParams net = constant_net({1.0, 3.0, 2.0, 0.0});
        CHECK(select_action(SelectMode::on_policy, &net, env, GridState{2, 2, 0}, &expert, rng,
                            buf) == 1);
    }

    SUBCASE("random draws each action with frequency 0.25 +- 0.02") {
        std::array<int, 4> counts{};
        for (int i = 0; i < 10000; ++i)
            ++counts[std::size_t(select_action<GridEnv, GridExpert>(
                SelectMode::random, nullptr, env, GridState{2, 2, 0}, nullptr, rng, buf))];
        for (int a = 0; a < 4; ++a)
            CHECK(std::abs(counts[std::size_t(a)] / 10000.0 - 0.25) <= 0.02);
    }

    SUBCASE("expert follows the oracle, including on the obstacle cell") {
        CHECK(select_action(SelectMode::expert, nullptr, env, GridState{1, 0, 3}, &expert, rng,
                            buf) == 0);
        CHECK(select_action(SelectMode::expert, nullptr, env, GridState{2, 2, 0}, &expert, rng,
                            buf) == 2);
    }

    SUBCASE("missing dependencies and non-acting modes are rejected") {
        CHECK_THROWS_AS(select_action(SelectMode::on_policy, nullptr, env, GridState{2, 2, 0},
                                      &expert, rng, buf),
                        std::invalid_argument);
        CHECK_THROWS_AS((select_action<GridEnv, GridExpert>(SelectMode::expert, nullptr, env,
                                                            GridState{2, 2, 0}, nullptr, rng, buf)),
                        std::invalid_argument);
        CHECK_THROWS_AS(select_action(SelectMode::supervised, nullptr, env, GridState{2, 2, 0},
                                      &expert, rng, buf),
                        std::invalid_argument);
    }
}

TEST_CASE("dqn_update_transition writes one slot of the cloned prediction") {
    // Zero-weight single-layer nets keep the algebra exact: output = bias,
    // and one sgd step moves each bias by lr * 2 * (pred - target) / 4.
    const GridEnv env{original_grid_task(), StartMode::fixed};
    TrainBuffers buf;

    SUBCASE("terminal transition, taken_action: target[a] = r") {
        NetParams net = constant_net({1.0, 3.0, 2.0, 0.0});
        const Transition<GridState> t{{0, 1, 0}, 2, 20.0, {0, 0, 1}, true, Outcome::success};
        dqn_update_transition(net, env, t, 1.0, 0.5, UpdateRule::taken_action, buf);

        CHECK(buf.target == std::vector<double>{1.0, 3.0, 20.0, 0.0});
        CHECK(buf.pred == std::vector<double>{1.0, 3.0, 2.0, 0.0});
        CHECK(net.b[0][0] == 1.0);
        CHECK(net.b[0][1] == 3.0);
        CHECK(net.b[0][2] == 2.0 - 0.5 * 2.0 * (2.0 - 20.0) / 4.0);
        CHECK(net.b[0][3] == 0.0);
    }

    SUBCASE("terminal transition, predicted_max: the argmax slot is rewritten") {
        NetParams net = constant_net({1.0, 3.0, 2.0, 0.0});
        const Transition<GridState> t{{0, 1, 0}, 2, 20.0, {0, 0, 1}, true, Outcome::success};
        dqn_update_transition(net, env, t, 1.0, 0.5, UpdateRule::predicted_max, buf);

        CHECK(buf.target == std::vector<double>{1.0, 20.0, 2.0, 0.0});
        CHECK(net.b[0][0] == 1.0);
        CHECK(net.b[0][1] == 3.0 - 0.5 * 2.0 * (3.0 - 20.0) / 4.0);
        CHECK(net.b[0][2] == 2.0);
        CHECK(net.b[0][3] == 0.0);
    }

    SUBCASE("non-terminal transition bootstraps gamma * max next Q") {
        NetParams net = constant_net({1.0, 3.0, 2.0, 0.0});
        const Transition<GridState> t{{2, 2, 0}, 2, -1.0, {2, 1, 1}, false, Outcome::ongoing};
        dqn_update_transition(net, env, t, 0.5, 0.25, UpdateRule::taken_action, buf);

        // Q_new = -1 + 0.5 * 3 = 0.5 lands in slot 2 (left).
        CHECK(buf.target == std::vector<double>{1.0, 3.0, 0.5, 0.0});
        CHECK(net.b[0][2] == 2.0 - 0.25 * 2.0 * (2.0 - 0.5) / 4.0);
    }

    SUBCASE("Bellman-consistent transition leaves the net bit-identical") {
        // Slot 1 already equals r + gamma * max next Q = -1 + 1 * 2.
        NetParams net = constant_net({1.0, 1.0, 2.0, 0.0});
        const NetParams before = net;
        const Transition<GridState> t{{2, 2, 0}, 1, -1.0, {2, 1, 1}, false, Outcome::ongoing};
        dqn_update_transition(net, env, t, 1.0, 0.5, UpdateRule::taken_action, buf);
        CHECK(params_equal(net, before));
    }

    SUBCASE("empty trajectory is rejected") {
        NetParams net = constant_net({0.0, 0.0, 0.0, 0.0});
        const std::vector<Transition<GridState>> empty;
        CHECK_THROWS_AS(
            dqn_update(net, env, std::span<const Transition<GridState>>(empty), 1.0, 0.1,
                       UpdateRule::taken_action, buf),
            std::invalid_argument);
    }
}

TEST_CASE("repeated updates on a one-state MDP drive Q to the reward") {
    const ToyEnv env;
    NetParams net = init_network({1, 8, 1}, 3);
    TrainBuffers buf;
    const Transition<int> t{0, 0, 5.0, 0, true, Outcome::success};

    const FeatureVector one{1.0};
    double q = 0.0;
    int steps = 0;
    for (; steps < 10000; ++steps) {
        dqn_update_transition(net, env, t, 1.0, 1e-2, UpdateRule::taken_action, buf);
        forward(net, one, buf.ws);
        q = buf.ws.output()[0];
        if (std::abs(q - 5.0) < 1e-2) break;
    }
    INFO("reached q=", q, " after ", steps, " steps");
    CHECK(std::abs(q - 5.0) < 1e-2);
}

TEST_CASE("supervised_update regresses onto the one-hot action") {
    TrainBuffers buf;

    SUBCASE("exact one-hot output is a fixed point") {
        NetParams net = constant_net({1.0, 0.0, 0.0, 0.0});
        const NetParams before = net;
        supervised_update(net, {0.0, 1.0}, 0, 0.5, buf);
        CHECK(params_equal(net, before));
    }

    SUBCASE("one step moves each output toward the one-hot target") {
        NetParams net = constant_net({0.5, 0.5, 0.5, 0.5});
        supervised_update(net, {0.0, 1.0}, 2, 0.5, buf);
        CHECK(net.b[0][0] == 0.5 - 0.5 * 2.0 * 0.5 / 4.0);
        CHECK(net.b[0][1] == net.b[0][0]);
        CHECK(net.b[0][2] == 0.5 + 0.5 * 2.0 * 0.5 / 4.0);
        CHECK(net.b[0][3] == net.b[0][0]);
    }
}

TEST_CASE("supervised_states sweeps the white cells once") {
    const GridEnv env{original_grid_task(), StartMode::fixed};
    const GridExpert expert = make_grid_expert(env.task);
    Rng rng = make_rng(0);
    const auto states = supervised_states(env, expert, rng);
    REQUIRE(states.size() == 6);
    const auto cells = grid_white_cells(env.task);
    for (std::size_t i = 0; i < states.size(); ++i) {
        CHECK(states[i].y == cells[i].y);
        CHECK(states[i].x == cells[i].x);
        CHECK(states[i].steps == 0);
    }
}

TEST_CASE("supervised training matches the expert on every white cell") {
    const GridEnv env{original_grid_task(), StartMode::random};
    const GridExpert expert = make_grid_expert(env.task);

    TrainConfig cfg;
    cfg.algorithm = Algorithm::supervised;
    cfg.episodes = 6000;
    cfg.lr = 1e-2;
    cfg.eval_every = 1000;
    cfg.eval_rollouts = 250;
    cfg.seed = 21;
    const RunRecord rec = train(env, cfg, &expert, nullptr);

    NetWorkspace ws;
    FeatureVector f;
    Rng scratch = make_rng(1);
    double loss = 0.0;
    for (const GridState& s : supervised_states(env, expert, scratch)) {
        env.encode(s, f);
        forward(rec.net, f, ws);
        std::vector<double> one_hot(4, 0.0);
        one_hot[std::size_t(expert.act(s))] = 1.0;
        loss += mse_loss(ws.output(), one_hot);
        CHECK(greedy_action(rec.net, f, ws) == expert.act(s));
    }
    CHECK(loss / 6.0 < 1e-4);
    CHECK(rec.evals.back().accuracy == 1.0);
}

TEST_CASE("train validates its configuration") {
    const GridEnv env{original_grid_task(), StartMode::fixed};
    const GridExpert expert = make_grid_expert(env.task);
    TrainConfig cfg;
    cfg.episodes = 1;

    SUBCASE("bad numerics") {
        TrainConfig c = cfg;
        c.episodes = -1;
        CHECK_THROWS_AS(train(env, c, &expert, nullptr), std::invalid_argument);
        c = cfg;
        c.lr = 0.0;
        CHECK_THROWS_AS(train(env, c, &expert, nullptr), std::invalid_argument);
        c = cfg;
        c.gamma = 1.5;
        CHECK_THROWS_AS(train(env, c, &expert, nullptr), std::invalid_argument);
        c = cfg;
        c.eval_every = 0;
        CHECK_THROWS_AS(train(env, c, &expert, nullptr), std::invalid_argument);
    }

    SUBCASE("expert-dependent algorithms require an expert") {
        TrainConfig c = cfg;
        c.algorithm = Algorithm::expert_demos;
        CHECK_THROWS_AS((train<GridEnv, GridExpert>(env, c, nullptr, nullptr)),
                        std::invalid_argument);
        c.algorithm = Algorithm::supervised;
        CHECK_THROWS_AS((train<GridEnv, GridExpert>(env, c, nullptr, nullptr)),
                        std::invalid_argument);
        c.algorithm = Algorithm::on_policy;
        CHECK_NOTHROW((train<GridEnv, GridExpert>(env, c, nullptr, nullptr)));
    }

    SUBCASE("base network must match the environment's architecture") {
        TrainConfig c = cfg;
        const NetParams wrong = init_network({16, 1024, 2}, 0);
        CHECK_THROWS_AS(train(env, c, &expert, nullptr, &wrong), std::invalid_argument);
    }
}

TEST_CASE("train with zero episodes is a single baseline eval") {
    const GridEnv env{original_grid_task(), StartMode::fixed};
    const GridExpert expert = make_grid_expert(env.task);
    const QTable table = solve_grid_q(env.task, 1.0, OracleVariant::stationary);

    TrainConfig cfg;
    cfg.episodes = 0;
    cfg.seed = 4;
    const RunRecord rec = train(env, cfg, &expert, &table);

    REQUIRE(rec.evals.size() == 1);
    CHECK(rec.evals[0].episode == 0);
    REQUIRE(rec.evals[0].mse_optimal.has_value());
    REQUIRE(rec.evals[0].mse_all.has_value());
    CHECK(params_equal(rec.net, init_network(default_net_dims(env), cfg.seed)));
}

TEST_CASE("train is deterministic in the seed") {
    const GridEnv env{original_grid_task(), StartMode::random};
    const GridExpert expert = make_grid_expert(env.task);

    TrainConfig cfg;
    cfg.algorithm = Algorithm::alt_random_expert;
    cfg.episodes = 40;
    cfg.eval_every = 10;
    cfg.eval_rollouts = 50;
    cfg.seed = 99;

    const RunRecord a = train(env, cfg, &expert, nullptr);
    const RunRecord b = train(env, cfg, &expert, nullptr);
    CHECK(params_equal(a.net, b.net));
    REQUIRE(a.evals.size() == b.evals.size());
    REQUIRE(a.evals.size() == 4);
    for (std::size_t i = 0; i < a.evals.size(); ++i) {
        CHECK(a.evals[i].episode == b.evals[i].episode);
        CHECK(a.evals[i].accuracy == b.evals[i].accuracy);
    }

    cfg.seed = 100;
    const RunRecord c = train(env, cfg, &expert, nullptr);
    CHECK(!params_equal(a.net, c.net));
}

TEST_CASE("eval cadence and mse fields follow the config") {
    const GridEnv env{original_grid_task(), StartMode::fixed};
    const GridExpert expert = make_grid_expert(env.task);
    const QTable table = solve_grid_q(env.task, 1.0, OracleVariant::stationary);

    TrainConfig cfg;
    cfg.algorithm = Algorithm::random_explore;
    cfg.episodes = 25;
    cfg.eval_every = 10;
    cfg.eval_rollouts = 10;
    const RunRecord with_oracle = train(env, cfg, &expert, &table);
    REQUIRE(with_oracle.evals.size() == 2);
    CHECK(with_oracle.evals[0].episode == 10);
    CHECK(with_oracle.evals[1].episode == 20);
    CHECK(with_oracle.evals[1].mse_optimal.has_value());

    const RunRecord without = train(env, cfg, &expert, nullptr);
    CHECK(!without.evals[0].mse_optimal.has_value());
    CHECK(!without.evals[0].mse_all.has_value());
}

TEST_CASE("per-episode mode cycling shows up in the trained behavior") {
    // expert_demos never explores, so from the fixed start it only ever sees
    // the optimal corridor; a random-containing run visits every white cell.
    // Check the mechanic directly instead: one episode per mode, tiny lr, and
    // inspect which transitions were generated by comparing nets.
    const GridEnv env{original_grid_task(), StartMode::fixed};
    const GridExpert expert = make_grid_expert(env.task);

    TrainConfig base;
    base.episodes = 1;
    base.lr = 1e-6;
    base.eval_every = 1;
    base.eval_rollouts = 1;
    base.seed = 12;

    // Episode 0 of alt_random_expert uses the random mode, so its first
    // episode matches random_explore's and differs from expert_demos'.
    TrainConfig r = base;
    r.algorithm = Algorithm::random_explore;
    TrainConfig are = base;
    are.algorithm = Algorithm::alt_random_expert;
    TrainConfig e = base;
    e.algorithm = Algorithm::expert_demos;

    const RunRecord rr = train(env, r, &expert, nullptr);
    const RunRecord ra = train(env, are, &expert, nullptr);
    const RunRecord re = train(env, e, &expert, nullptr);
    CHECK(params_equal(rr.net, ra.net));
    CHECK(!params_equal(rr.net, re.net));

    // With two episodes the alternator switches to expert mode; replaying
    // episode 0 random + episode 1 expert by hand reproduces its net.
    TrainConfig two = are;
    two.episodes = 2;
    const RunRecord ra2 = train(env, two, &expert, nullptr);

    NetParams manual = init_network(default_net_dims(env), base.seed);
    TrainBuffers buf;
    std::vector<Transition<GridState>> traj;
    for (long ep = 0; ep < 2; ++ep) {
        Rng rng = derive_rng(base.seed, stream::kTrain, std::uint64_t(ep));
        traj.clear();
        GridState s = env.reset(rng);
        bool terminal = false;
        while (!terminal) {
            const int a = ep == 0 ? uniform_int(rng, 0, 3) : expert.act(s);
            traj.push_back(env.step(s, a));
            terminal = traj.back().terminal;
            s = traj.back().next;
        }
        dqn_update(manual, env, std::span<const Transition<GridState>>(traj), two.gamma, two.lr,
                   two.update_rule, buf);
    }
    CHECK(params_equal(ra2.net, manual));
}

TEST_CASE("random exploration beats pure expert demos on MSEq at equal budget") {
    // Seed-averaged Table 1 trend: expert-only training never visits most of
    // the state space, so its all-pairs MSE stays far above any algorithm
    // with a random component.
    const GridEnv env{original_grid_task(), StartMode::fixed};
    const GridExpert expert = make_grid_expert(env.task);
    const QTable table = solve_grid_q(env.task, 1.0, OracleVariant::stationary);

    TrainConfig cfg;
    cfg.episodes = 600;
    cfg.lr = 1e-4;
    cfg.eval_every = 600;
    cfg.eval_rollouts = 10;

    const auto mean_final_mseq = [&](Algorithm a) {
        double sum = 0.0;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            TrainConfig c = cfg;
            c.algorithm = a;
            c.seed = seed;
            const RunRecord rec = train(env, c, &expert, &table);
            sum += *rec.evals.back().mse_all;
        }
        return sum / 5.0;
    };

    const double expert_only = mean_final_mseq(Algorithm::expert_demos);
    CHECK(mean_final_mseq(Algorithm::random_explore) < expert_only);
    CHECK(mean_final_mseq(Algorithm::alt_random_expert) < expert_only);
}
