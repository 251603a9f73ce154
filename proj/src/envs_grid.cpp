#include "qadapt/envs_grid.hpp"

#include <stdexcept>

namespace qadapt {

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::ongoing: return "ongoing";
        case Outcome::success: return "success";
        case Outcome::unsafe_cross: return "unsafe_cross";
        case Outcome::collision: return "collision";
        case Outcome::hazard: return "hazard";
        case Outcome::out_of_bounds: return "out_of_bounds";
        case Outcome::frozen: return "frozen";
    }
    return "?";
}

const char* grid_action_name(int action) {
    switch (action) {
        case 0: return "up";
        case 1: return "down";
        case 2: return "left";
        case 3: return "right";
    }
    return "?";
}

GridTask original_grid_task() { return GridTask{{0, 0}, {1, 2}, {1, 0}}; }

bool grid_in_bounds(Cell c) {
    return c.y >= 0 && c.y < kGridSize && c.x >= 0 && c.x < kGridSize;
}

bool grid_terminal(const GridTask& task, const GridState& s) {
    const Cell c{s.y, s.x};
    return !grid_in_bounds(c) || c == task.goal || c == task.hazard || s.steps > kGridStepCap;
}

Cell grid_move(Cell c, int action) {
    switch (static_cast<GridAction>(action)) {
        case GridAction::up: return {c.y - 1, c.x};
        case GridAction::down: return {c.y + 1, c.x};
        case GridAction::left: return {c.y, c.x - 1};
        case GridAction::right: return {c.y, c.x + 1};
    }
    throw std::invalid_argument("grid action out of range");
}

std::vector<Cell> grid_white_cells(const GridTask& task) {
    std::vector<Cell> cells;
    for (int y = 0; y < kGridSize; ++y)
        for (int x = 0; x < kGridSize; ++x) {
            const Cell c{y, x};
            if (c == task.goal || c == task.hazard || c == task.obstacle) continue;
            cells.push_back(c);
        }
    return cells;
}

std::vector<Cell> grid_nonterminal_cells(const GridTask& task) {
    std::vector<Cell> cells;
    for (int y = 0; y < kGridSize; ++y)
        for (int x = 0; x < kGridSize; ++x) {
            const Cell c{y, x};
            if (c == task.goal || c == task.hazard) continue;
            cells.push_back(c);
        }
    return cells;
}

GridState GridEnv::reset(Rng& rng) const {
    if (start_mode == StartMode::fixed) return {2, 2, 0};
    const std::vector<Cell> cells = grid_white_cells(task);
    const Cell c = cells[static_cast<std::size_t>(uniform_int(rng, 0, int(cells.size()) - 1))];
    return {c.y, c.x, 0};
}

Transition<GridState> GridEnv::step(const GridState& s, int action) const {
    if (grid_terminal(task, s)) throw std::logic_error("grid_step: state is terminal");

    const Cell dest = grid_move({s.y, s.x}, action);
    GridState next{dest.y, dest.x, s.steps + 1};

    Transition<GridState> t{s, action, 0.0, next, true, Outcome::ongoing};
    if (!grid_in_bounds(dest)) {
        t.reward = -100.0;
        t.outcome = Outcome::out_of_bounds;
    } else if (dest == task.goal) {
        t.reward = 20.0;
        t.outcome = Outcome::success;
    } else if (dest == task.hazard) {
        t.reward = -20.0;
        t.outcome = Outcome::hazard;
    } else if (next.steps > kGridStepCap) {
        t.reward = -100.0;
        t.outcome = Outcome::frozen;
    } else if (dest == task.obstacle) {
        t.reward = -5.0;
        t.terminal = false;
    } else {
        t.reward = s.steps == 0 ? 0.0 : -1.0;
        t.terminal = false;
    }
    return t;
}

void GridEnv::encode(const GridState& s, FeatureVector& out) const {
    out.assign({double(s.y), double(s.x)});
}

bool GridEnv::is_success(std::span<const Transition<GridState>> trajectory) const {
    bool reached_goal = false;
    for (const auto& t : trajectory) {
        const Cell dest{t.next.y, t.next.x};
        if (grid_in_bounds(dest) && dest == task.obstacle) return false;
        if (grid_in_bounds(dest) && dest == task.goal) reached_goal = true;
    }
    return reached_goal;
}

}  // namespace qadapt
