#include "qadapt/qlearn.hpp"

namespace qadapt {

namespace {

constexpr SelectMode kOn[] = {SelectMode::on_policy};
constexpr SelectMode kRandom[] = {SelectMode::random};
constexpr SelectMode kExpert[] = {SelectMode::expert};
constexpr SelectMode kRandOn[] = {SelectMode::random, SelectMode::on_policy};
constexpr SelectMode kRandExp[] = {SelectMode::random, SelectMode::expert};
constexpr SelectMode kOnExp[] = {SelectMode::on_policy, SelectMode::expert};
constexpr SelectMode kRandOnExp[] = {SelectMode::random, SelectMode::on_policy,
                                     SelectMode::expert};
constexpr SelectMode kSupervised[] = {SelectMode::supervised};

}  // namespace

std::span<const SelectMode> algorithm_cycle(Algorithm a) {
    switch (a) {
        case Algorithm::on_policy: return kOn;
        case Algorithm::random_explore: return kRandom;
        case Algorithm::expert_demos: return kExpert;
        case Algorithm::alt_random_onpolicy: return kRandOn;
        case Algorithm::alt_random_expert: return kRandExp;
        case Algorithm::alt_onpolicy_expert: return kOnExp;
        case Algorithm::alt_random_onpolicy_expert: return kRandOnExp;
        case Algorithm::supervised: return kSupervised;
    }
    throw std::invalid_argument("algorithm_cycle: bad algorithm");
}

const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::on_policy: return "on_policy";
        case Algorithm::random_explore: return "random_explore";
        case Algorithm::expert_demos: return "expert_demos";
        case Algorithm::alt_random_onpolicy: return "alt_random_onpolicy";
        case Algorithm::alt_random_expert: return "alt_random_expert";
        case Algorithm::alt_onpolicy_expert: return "alt_onpolicy_expert";
        case Algorithm::alt_random_onpolicy_expert: return "alt_random_onpolicy_expert";
        case Algorithm::supervised: return "supervised";
    }
    return "?";
}

std::optional<Algorithm> parse_algorithm(const std::string& name) {
    for (int i = 0; i < kAlgorithmCount; ++i) {
        const Algorithm a = static_cast<Algorithm>(i);
        if (name == algorithm_name(a)) return a;
    }
    return std::nullopt;
}

void supervised_update(NetParams& net, const FeatureVector& features, int expert_action, double lr,
                       TrainBuffers& buf) {
    if (expert_action < 0 || expert_action >= net.output_dim())
        throw std::invalid_argument("supervised_update: action out of range");
    buf.target.assign(net.output_dim(), 0.0);
    buf.target[expert_action] = 1.0;
    backward_mse(net, features, buf.target, buf.grads, buf.ws);
    sgd_step(net, buf.grads, lr);
}

std::vector<int> default_net_dims(const GridEnv&) { return {2, 512, 4}; }
std::vector<int> default_net_dims(const IntersectionEnv&) { return {16, 1024, 2}; }

}  // namespace qadapt
