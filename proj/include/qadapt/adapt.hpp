#pragma once
#include <stdexcept>
#include <utility>

#include "qadapt/checkpoint.hpp"
#include "qadapt/envs_grid.hpp"
#include "qadapt/qlearn.hpp"

namespace qadapt {

// Swaps goal and hazard; applying it twice restores the original task.
inline GridTask adapt_task(GridTask task) {
    std::swap(task.goal, task.hazard);
    return task;
}

inline double adapt_task_gap(double gap) {
    if (gap == 80.0) return 120.0;
    if (gap == 120.0) return 80.0;
    throw std::invalid_argument("adapt_task_gap: expected a gap of 80 or 120");
}

// Continues training from a saved network on (presumably) a changed task.
// The returned record carries the base's provenance hash so downstream
// reports can group runs by their starting point.
template <class Env, class Expert>
RunRecord retrain(const Env& env, const TrainConfig& cfg, const Expert* expert,
                  const QTable* oracle, const Checkpoint& base) {
    RunRecord rec = train(env, cfg, expert, oracle, &base.net);
    rec.base_id = base.provenance.config_hash;
    return rec;
}

}  // namespace qadapt
