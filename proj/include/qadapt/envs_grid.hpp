#pragma once
#include <span>
#include <string>

#include "qadapt/envs.hpp"
#include "qadapt/rng.hpp"

namespace qadapt {

struct Cell {
    int y = 0;
    int x = 0;
    bool operator==(const Cell&) const = default;
};

// Cell roles: entering goal +20 terminal, hazard -20 terminal, obstacle -5
// non-terminal, off-grid -100 terminal. White entry costs -1 except on the
// very first step of an episode. Exceeding the step cap freezes at -100.
struct GridTask {
    Cell goal;
    Cell hazard;
    Cell obstacle;
    bool operator==(const GridTask&) const = default;
};

GridTask original_grid_task();  // goal (0,0), hazard (1,2), obstacle (1,0)

struct GridState {
    int y = 0;
    int x = 0;
    int steps = 0;
    bool operator==(const GridState&) const = default;
};

enum class GridAction { up = 0, down = 1, left = 2, right = 3 };

enum class StartMode { fixed, random };

inline constexpr int kGridSize = 3;
inline constexpr int kGridActions = 4;
inline constexpr int kGridStepCap = 10;

const char* grid_action_name(int action);

struct GridEnv {
    using State = GridState;

    GridTask task;
    StartMode start_mode = StartMode::fixed;

    static constexpr int n_actions = kGridActions;
    static constexpr int feature_dim = 2;

    GridState reset(Rng& rng) const;
    Transition<GridState> step(const GridState& s, int action) const;
    void encode(const GridState& s, FeatureVector& out) const;
    bool is_success(std::span<const Transition<GridState>> trajectory) const;
};

bool grid_in_bounds(Cell c);
bool grid_terminal(const GridTask& task, const GridState& s);
Cell grid_move(Cell c, int action);

// White cells are everything except the goal, hazard and obstacle (always 6).
std::vector<Cell> grid_white_cells(const GridTask& task);
std::vector<Cell> grid_nonterminal_cells(const GridTask& task);  // white + obstacle

}  // namespace qadapt
