#include "qadapt/envs_intersection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qadapt {

namespace {

// One tick of the ado traffic process: advance, despawn, maybe spawn. The
// spawn draw is consumed every tick so trajectories stay reproducible
// regardless of whether the lane top is clear.
void tick_traffic(const IntersectionGeometry& geo, std::vector<double>& ado, Rng& rng) {
    for (double& y : ado) y += geo.ado_velocity;
    while (!ado.empty() && ado.back() > geo.world + geo.car_radius) ado.pop_back();
    const bool clear = ado.empty() || ado.front() >= geo.min_spawn_gap;
    if (bernoulli(rng, geo.spawn_prob) && clear) ado.insert(ado.begin(), 0.0);
}

bool terminal_state(const IntersectionGeometry& geo, const IntersectionState& s) {
    if (s.steps > geo.freeze_steps) return true;
    if (s.ego_x - geo.car_radius > geo.lane_max()) return true;
    for (double y : s.ado) {
        const double dx = s.ego_x - geo.ado_lane_x;
        const double dy = s.ego_y - y;
        if (dx * dx + dy * dy < 4 * geo.car_radius * geo.car_radius) return true;
    }
    return false;
}

}  // namespace

double straddle_gap(const IntersectionGeometry& geo, const IntersectionState& s) {
    (void)geo;
    double above = -std::numeric_limits<double>::infinity();
    double below = std::numeric_limits<double>::infinity();
    for (double y : s.ado) {
        if (y <= s.ego_y)
            above = std::max(above, y);
        else
            below = std::min(below, y);
    }
    return below - above;  // +inf whenever either side is missing
}

IntersectionState IntersectionEnv::reset(Rng& seed_stream) const {
    IntersectionState s;
    s.ego_x = 0.0;
    s.ego_y = geo.ego_lane_y;
    s.steps = 0;
    s.entry_gap = -1.0;
    s.rng = Rng(seed_stream());

    // Run the spawn process to stationarity so the lane starts populated the
    // same way it refills during play (600 px lane, 120 ticks to traverse).
    const int burn_in = 400;
    for (int i = 0; i < burn_in; ++i) tick_traffic(geo, s.ado, s.rng);

    if (s.ego_x >= geo.lane_min()) s.entry_gap = straddle_gap(geo, s);
    return s;
}

Transition<IntersectionState> IntersectionEnv::step(const IntersectionState& s, int action) const {
    if (action != 0 && action != 1) throw std::invalid_argument("intersection action out of range");
    if (terminal_state(geo, s)) throw std::logic_error("intersection_step: state is terminal");

    IntersectionState next = s;
    const bool advanced = action == static_cast<int>(IntersectionAction::go);
    if (advanced) next.ego_x += geo.ego_velocity;
    tick_traffic(geo, next.ado, next.rng);
    next.steps = s.steps + 1;
    if (next.entry_gap < 0.0 && next.ego_x >= geo.lane_min())
        next.entry_gap = straddle_gap(geo, next);

    Transition<IntersectionState> t{s, action, 0.0, next, true, Outcome::ongoing};

    bool collided = false;
    for (double y : next.ado) {
        const double dx = next.ego_x - geo.ado_lane_x;
        const double dy = next.ego_y - y;
        if (dx * dx + dy * dy < 4 * geo.car_radius * geo.car_radius) collided = true;
    }

    if (collided) {
        t.reward = -9500.0;
        t.outcome = Outcome::collision;
    } else if (next.ego_x - geo.car_radius > geo.lane_max()) {
        const bool safe = next.entry_gap >= task_gap;
        t.reward = safe ? 3000.0 : -9500.0;
        t.outcome = safe ? Outcome::success : Outcome::unsafe_cross;
    } else if (next.steps > geo.freeze_steps) {
        t.reward = -20000.0;
        t.outcome = Outcome::frozen;
    } else {
        t.reward = advanced ? -1.0 : -6.0;
        t.terminal = false;
    }
    return t;
}

void IntersectionEnv::encode(const IntersectionState& s, FeatureVector& out) const {
    out.assign(kIntersectionFeatures, kPadSentinel);
    // Upstream cars (at or above the crossing line), nearest to the line first.
    int slot = 0;
    for (auto it = s.ado.rbegin(); it != s.ado.rend() && slot < kVisibleAdo; ++it) {
        if (*it > s.ego_y) continue;
        out[slot++] = *it;
    }
    for (; slot < kVisibleAdo; ++slot) out[slot] = kPadSentinel;

    const double gap = straddle_gap(geo, s);
    out[10] = s.ego_x;
    out[11] = s.ego_y;
    out[12] = std::max(0.0, geo.lane_max() - s.ego_x);
    out[13] = (s.ego_x >= geo.lane_min() && s.ego_x <= geo.lane_max()) ? 1.0 : 0.0;
    out[14] = gap >= 80.0 ? 1.0 : 0.0;
    out[15] = gap >= 120.0 ? 1.0 : 0.0;
}

bool IntersectionEnv::is_success(std::span<const Transition<IntersectionState>> trajectory) const {
    return !trajectory.empty() && trajectory.back().outcome == Outcome::success;
}

}  // namespace qadapt
