#include <stdexcept>
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "efviz/lane_emden.hpp"

using namespace efviz;
using std::numbers::pi;

namespace {

double at(const std::vector<LaneEmdenSample>& s, double t)
{
    const LaneEmdenSample* best = &s.front();
    for (const auto& x : s)
        if (std::abs(x.t - t) < std::abs(best->t - t))
            best = &x;
    return best->u;
}

} // namespace

TEST_CASE("closed forms")
{
    CHECK(lane_emden_closed_form(1, 0.0) == 1.0);
    CHECK(std::abs(lane_emden_closed_form(1, pi)) <= 1e-16);
    CHECK(lane_emden_closed_form(1, pi / 2) == doctest::Approx(2 / pi).epsilon(1e-15));
    CHECK(lane_emden_closed_form(5, 0.0) == 1.0);
    CHECK(lane_emden_closed_form(5, 3.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(lane_emden_closed_form(5, std::sqrt(3.0)) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK_THROWS_AS(lane_emden_closed_form(2, 1.0), std::invalid_argument);
}

TEST_CASE("numerical solution against closed forms")
{
    for (double p : {1.0, 5.0}) {
        LaneEmdenProblem prob;
        prob.p = p;
        prob.dt = 1e-3;
        prob.t_max = 10.0;
        const auto s = solve_lane_emden(prob);
        CHECK(s.front().t == doctest::Approx(0.01));
        CHECK(s.back().t == doctest::Approx(10.0));
        double worst = 0.0;
        for (const auto& x : s)
            worst = std::max(worst, std::abs(x.u - lane_emden_closed_form(p, x.t)) /
                                        std::abs(lane_emden_closed_form(p, x.t)));
        CHECK(worst <= 1e-6);
    }
    LaneEmdenProblem p1;
    p1.t_max = 2.0;
    p1.dt = pi / 2000;
    const auto s1 = solve_lane_emden(p1);
    CHECK(at(s1, pi / 2) == doctest::Approx(2 / pi).epsilon(1e-6));
    CHECK(s1.front().u == doctest::Approx(1.0).epsilon(1e-4));
    LaneEmdenProblem p5;
    p5.p = 5;
    p5.t_max = 2.0;
    p5.dt = std::sqrt(3.0) / 1000;
    CHECK(at(solve_lane_emden(p5), std::sqrt(3.0)) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("series start does not matter")
{
    for (double p : {1.0, 1.5, 2.5, 3.0, 5.0}) {
        LaneEmdenProblem a;
        a.p = p;
        a.t_max = 1.0;
        LaneEmdenProblem b = a;
        b.start_factor = 20.0;
        CHECK(std::abs(solve_lane_emden(a).back().u - solve_lane_emden(b).back().u) <= 1e-8);
    }
}

TEST_CASE("invalid problems")
{
    LaneEmdenProblem p;
    p.dt = 0.0;
    CHECK_THROWS_AS(solve_lane_emden(p), std::invalid_argument);
    p.dt = 1e-3;
    p.p = 0.5;
    CHECK_THROWS_AS(solve_lane_emden(p), std::invalid_argument);
    p.p = 1.0;
    p.t_max = 0.005;
    CHECK_THROWS_AS(solve_lane_emden(p), std::invalid_argument);
}
