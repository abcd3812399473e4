#include "efviz/lane_emden.hpp"

#include <cmath>
#include <stdexcept>

namespace efviz {

namespace {

double source(double u, double p)
{
    const double a = std::pow(std::abs(u), p);
    return u < 0.0 ? -a : a;
}

} // namespace

std::vector<LaneEmdenSample> solve_lane_emden(const LaneEmdenProblem& prob)
{
    if (!(prob.p >= 1.0))
        throw std::invalid_argument("lane-emden: p must be at least 1");
    if (!(prob.dt > 0.0))
        throw std::invalid_argument("lane-emden: dt must be positive");
    if (!(prob.start_factor > 0.0))
        throw std::invalid_argument("lane-emden: start factor must be positive");
    const double p = prob.p;
    const double dt = prob.dt;
    const double t0 = prob.start_factor * dt;
    if (!(prob.t_max > t0))
        throw std::invalid_argument("lane-emden: t_max must exceed the series start");

    const double t2 = t0 * t0;
    double u = 1.0 - t2 / 6.0 + p * t2 * t2 / 120.0;
    const double du0 = -t0 / 3.0 + p * t2 * t0 / 30.0;
    double q = t2 * du0;

    const auto f_u = [](double t, double qq) { return qq / (t * t); };
    const auto f_q = [p](double t, double uu) { return -t * t * source(uu, p); };

    const auto steps = static_cast<std::size_t>(std::floor((prob.t_max - t0) / dt + 1e-9));
    std::vector<LaneEmdenSample> out;
    out.reserve(steps + 1);
    out.push_back({t0, u, q / t2});
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = t0 + static_cast<double>(k) * dt;
        const double h = dt;
        const double k1u = f_u(t, q);
        const double k1q = f_q(t, u);
        const double k2u = f_u(t + h / 2, q + h / 2 * k1q);
        const double k2q = f_q(t + h / 2, u + h / 2 * k1u);
        const double k3u = f_u(t + h / 2, q + h / 2 * k2q);
        const double k3q = f_q(t + h / 2, u + h / 2 * k2u);
        const double k4u = f_u(t + h, q + h * k3q);
        const double k4q = f_q(t + h, u + h * k3u);
        u += h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
        q += h / 6 * (k1q + 2 * k2q + 2 * k3q + k4q);
        const double tn = t0 + static_cast<double>(k + 1) * dt;
        out.push_back({tn, u, q / (tn * tn)});
    }
    return out;
}

double lane_emden_closed_form(double p, double t)
{
    if (p == 1.0)
        return t == 0.0 ? 1.0 : std::sin(t) / t;
    if (p == 5.0)
        return 1.0 / std::sqrt(1.0 + t * t / 3.0);
    throw std::invalid_argument("lane-emden closed form exists only for p = 1 and p = 5");
}

} // namespace efviz
