#pragma once

#include <vector>

#include "efviz/grid.hpp"
#include "efviz/history.hpp"
#include "efviz/scenario.hpp"

namespace efviz {

/// Recorded solution of the w-form equation at tau_m = m * dt, together with
/// the gradient and second-derivative snapshots of every frame.
struct Trajectory {
    Grid1D grid{0.0, 1.0, 3};
    double dt = 1.0;
    double p = 3.0;
    PowerMode power_mode = PowerMode::odd;
    ModelTerms model;
    bool forced = false;
    /// w_tau(0) = u1 - u0 / 2.
    Field initial_velocity;
    std::vector<Field> frames;
    HistoryStore history{1.0, 3};

    std::size_t size() const noexcept { return frames.size(); }
    double tau(std::size_t m) const noexcept { return static_cast<double>(m) * dt; }
};

} // namespace efviz
