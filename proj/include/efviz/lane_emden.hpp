#pragma once

#include <vector>

namespace efviz {

/// (t^2 u')' + t^2 sign(u)|u|^p = 0, u(0) = 1, u'(0) = 0.
struct LaneEmdenProblem {
    double p = 1.0;
    double t_max = 10.0;
    double dt = 1e-3;
    /// The series start is placed at t0 = start_factor * dt.
    double start_factor = 10.0;
};

struct LaneEmdenSample {
    double t;
    double u;
    double du;
};

/// RK4 on u' = q/t^2, q' = -t^2 f(u), started from the series
/// u = 1 - t^2/6 + p t^4/120. Samples on the dt grid from t0 to t_max.
/// Throws std::invalid_argument for p < 1, dt <= 0 or t_max <= t0.
std::vector<LaneEmdenSample> solve_lane_emden(const LaneEmdenProblem& prob);

/// sin(t)/t for p = 1 (1 at t = 0), 1/sqrt(1 + t^2/3) for p = 5.
/// Throws std::invalid_argument for other p.
double lane_emden_closed_form(double p, double t);

} // namespace efviz
