#pragma once
#include <span>
#include <vector>

#include "qadapt/envs.hpp"
#include "qadapt/rng.hpp"

namespace qadapt {

// Ego travels along +x on the horizontal lane y = ego_lane_y; ado traffic
// travels along +y in a vertical lane centered at ado_lane_x. All distances
// are pixels, all speeds pixels per step.
struct IntersectionGeometry {
    double world = 600.0;
    double ego_lane_y = 300.0;
    double ado_lane_x = 55.0;
    double lane_width = 60.0;
    double car_radius = 15.0;
    double ego_velocity = 25.0;
    double ado_velocity = 25.0;
    double spawn_prob = 0.25;
    double min_spawn_gap = 40.0;
    int freeze_steps = 500;

    double lane_min() const { return ado_lane_x - lane_width / 2; }
    double lane_max() const { return ado_lane_x + lane_width / 2; }
};

struct IntersectionState {
    double ego_x = 0.0;
    double ego_y = 300.0;
    std::vector<double> ado;  // live car y-centers, strictly increasing (top first)
    int steps = 0;
    double entry_gap = -1.0;  // straddle gap cached at lane entry; <0 until measured
    Rng rng;

    bool operator==(const IntersectionState& o) const {
        return ego_x == o.ego_x && ego_y == o.ego_y && ado == o.ado && steps == o.steps &&
               entry_gap == o.entry_gap && rng == o.rng;
    }
};

enum class IntersectionAction { stop = 0, go = 1 };

inline constexpr double kPadSentinel = -1000.0;
inline constexpr int kVisibleAdo = 10;
inline constexpr int kIntersectionFeatures = 16;

// Center-to-center distance between the ado cars immediately above and below
// the ego lane; +inf when either side is empty.
double straddle_gap(const IntersectionGeometry& geo, const IntersectionState& s);

struct IntersectionEnv {
    using State = IntersectionState;

    IntersectionGeometry geo;
    double task_gap = 80.0;  // 80 original, 120 adapted

    static constexpr int n_actions = 2;
    static constexpr int feature_dim = kIntersectionFeatures;

    IntersectionState reset(Rng& seed_stream) const;
    Transition<IntersectionState> step(const IntersectionState& s, int action) const;
    void encode(const IntersectionState& s, FeatureVector& out) const;
    bool is_success(std::span<const Transition<IntersectionState>> trajectory) const;
};

}  // namespace qadapt
