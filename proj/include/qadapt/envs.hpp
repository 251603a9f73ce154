#pragma once
#include <vector>

namespace qadapt {

enum class Outcome {
    ongoing,
    success,
    unsafe_cross,
    collision,
    hazard,
    out_of_bounds,
    frozen,
};

const char* outcome_name(Outcome o);

template <class State>
struct Transition {
    State state;
    int action;
    double reward;
    State next;
    bool terminal;
    Outcome outcome;
};

using FeatureVector = std::vector<double>;

}  // namespace qadapt
