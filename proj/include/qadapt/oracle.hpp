#pragma once
#include <array>

#include "qadapt/envs_grid.hpp"
#include "qadapt/envs_intersection.hpp"

namespace qadapt {

enum class OracleVariant {
    stationary,      // fixed point, -1 on every white entry, no cap or exemption
    step_augmented,  // exact finite horizon with first-step exemption and freeze
};

// Exact Q-values for a grid task. Non-terminal cells (white + obstacle) are
// present; goal and hazard have no entries.
struct QTable {
    GridTask task;
    double gamma = 1.0;
    OracleVariant variant = OracleVariant::stationary;

    std::array<bool, 9> present{};
    std::array<std::array<double, 4>, 9> q{};  // stationary values
    std::array<std::array<std::array<double, 4>, kGridStepCap + 1>, 9> qk{};  // by step

    static int idx(Cell c) { return c.y * kGridSize + c.x; }
    bool has(Cell c) const { return grid_in_bounds(c) && present[idx(c)]; }
    double value_at(Cell c, int action) const { return q[idx(c)][action]; }
    double value_at(Cell c, int step, int action) const { return qk[idx(c)][step][action]; }
    double best(Cell c) const;
    double best(Cell c, int step) const;
};

QTable solve_grid_q(const GridTask& task, double gamma, OracleVariant variant);

// Pure recursion over every action continuation; no tables, no memoization.
// Matches the step_augmented solver exactly.
double brute_force_q(Cell cell, int step, int action, const GridTask& task, double gamma);

// Argmax under the table's variant; ties break in action order up<down<left<right.
int optimal_action(const QTable& table, const GridState& s);

struct GridExpert {
    QTable table;
    int act(const GridState& s) const { return optimal_action(table, s); }
};

GridExpert make_grid_expert(const GridTask& task, double gamma = 1.0);

// Scripted crossing policy: committed once inside the lane; before it, go only
// when the current straddle gap meets the task threshold and both members keep
// at least a car diameter of vertical clearance for every tick the ego spends
// inside the collision band.
int intersection_expert(const IntersectionGeometry& geo, const IntersectionState& s,
                        double task_gap);

struct IntersectionExpert {
    IntersectionGeometry geo;
    double task_gap = 80.0;
    int act(const IntersectionState& s) const { return intersection_expert(geo, s, task_gap); }
};

}  // namespace qadapt
