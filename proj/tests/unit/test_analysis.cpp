#include <doctest.h>

#include <cmath>
#include <numbers>

#include "efviz/analysis.hpp"
#include "efviz/solver.hpp"
#include "oracles.hpp"

using namespace efviz;
using std::numbers::pi;

namespace {

ScenarioConfig small(int n = 50)
{
    ScenarioConfig c;
    c.grid = Grid1D(0.0, 1.0, n);
    c.kernel = RelaxationKernel::exponential_sum({{0.25, 1.0}});
    c.u0 = InitialProfile::sine(0.1);
    c.u1 = InitialProfile::sine(0.05);
    c.tau_max = 1.0;
    return c;
}

// Trajectory whose frames are all equal to f.
Trajectory frozen(const Field& f, const Grid1D& g, double dt, std::size_t steps)
{
    Trajectory t;
    t.grid = g;
    t.dt = dt;
    t.initial_velocity = Field(f.size(), 0.0);
    t.history = HistoryStore(dt, g.n());
    for (std::size_t m = 0; m <= steps; ++m) {
        t.frames.push_back(f);
        t.history.append(m * dt, gradient(f, g), second_derivative(f, g));
    }
    return t;
}

} // namespace

TEST_CASE("energy of sin(pi x) with zero velocity")
{
    // 2E = pi^2/2 - 1/4 * 1/2 - 1/2 * 3/8
    const double expect = 0.5 * (pi * pi / 2 - 0.125 - 0.1875);
    CHECK(expect == doctest::Approx(2.31115).epsilon(1e-5));
    for (int n : {100, 200}) {
        const Grid1D g(0, 1, n);
        const auto u0 = oracle::sample([](double x) { return std::sin(pi * x); }, 0, 1, n);
        Field u1 = u0;
        for (double& v : u1)
            v *= 0.5;
        const auto e = initial_energy(g, u0, u1, 3.0);
        CHECK(std::abs(e.energy() - expect) <= 5.0 * g.dx() * g.dx());
        CHECK(e.kinetic == doctest::Approx(0.0));

        // tau = 0 through a trajectory with a memory kernel gives the same number
        const auto traj = frozen(u0, g, 0.5 * g.dx(), 2);
        const auto k = RelaxationKernel::exponential_sum({{0.25, 1.0}});
        CHECK(energy_w(traj, k, 0).energy() == doctest::Approx(e.energy()).epsilon(1e-14));
    }
}

TEST_CASE("zero state has zero energy and a zero report")
{
    const Grid1D g(0, 1, 10);
    const auto traj = frozen(Field(10, 0.0), g, 0.05, 5);
    const auto k = RelaxationKernel::exponential_sum({{0.25, 1.0}});
    for (std::size_t m = 0; m < traj.size(); ++m) {
        const auto e = energy_w(traj, k, m);
        CHECK(e.kinetic == 0.0);
        CHECK(e.elastic == 0.0);
        CHECK(e.history == 0.0);
        CHECK(e.mass == 0.0);
        CHECK(e.potential == 0.0);
    }
    const auto series = diagnose(traj, k);
    CHECK(energy_monotonicity_report(series).positive_jump() == 0.0);
    CHECK(lemma22_bound_check(series, 3.0).worst_violation == 0.0);
}

TEST_CASE("cross-term form of the initial energy")
{
    oracle::Gen gen(5);
    const Grid1D g(0, 1, 30);
    Field u0(30), u1(30);
    for (int i = 0; i < 30; ++i) {
        u0[i] = gen.uniform(-1, 1);
        u1[i] = gen.uniform(-1, 1);
    }
    const auto e = initial_energy(g, u0, u1, 3.0);
    double cross = 0.0, sq = 0.0;
    for (int i = 0; i < 30; ++i) {
        cross += u0[i] * u1[i];
        sq += u0[i] * u0[i];
    }
    cross *= g.dx();
    sq *= g.dx();
    const double expect = 0.5 * (e.twice_energy() + e.mass + cross);
    CHECK(initial_energy_cross_term(g, u0, u1, 3.0) == doctest::Approx(expect).epsilon(1e-13));
    CHECK(e.mass == doctest::Approx(0.25 * sq).epsilon(1e-14));
}

TEST_CASE("energy is nonincreasing on a small-data run and the bound holds")
{
    std::vector<double> jumps;
    for (int n : {50, 101}) {
        const auto r = run(small(n));
        const auto rep = energy_monotonicity_report(r.diagnostics);
        const double dt = r.config.time_step();
        const double dx = r.config.grid.dx();
        CHECK(rep.positive_jump() <= dt * dt + dx * dx);
        // provable coefficient (p-1)/(2(p+1))
        const auto b = lemma22_bound_check(r.diagnostics, 3.0, 0.25);
        CHECK(b.worst_violation <= dt * dt + dx * dx);
        for (const auto& d : r.diagnostics)
            CHECK(d.E_w == doctest::Approx(0.5 * (d.parts.kinetic + d.parts.elastic + d.parts.history - d.parts.mass -
                                                  d.parts.potential))
                               .epsilon(1e-15));
    }
}

TEST_CASE("memory identity: trivial kernel and frozen history")
{
    const Grid1D g(0, 1, 40);
    const auto f = oracle::sample([](double x) { return std::sin(pi * x) + 0.3 * std::sin(3 * pi * x); }, 0, 1, 40);
    const auto traj = frozen(f, g, 0.01, 100);
    CHECK(lemma1_residual(traj, RelaxationKernel(), 50) == 0.0);
    const auto k = RelaxationKernel::exponential_sum({{0.25, 1.0}});
    const auto t = lemma1_terms(traj, k, 50);
    CHECK(t.lhs == 0.0);
    CHECK(t.residual() <= 1e-4);
    CHECK_THROWS_AS(lemma1_terms(traj, k, 1), std::domain_error);
    CHECK_THROWS_AS(lemma1_terms(traj, k, 100), std::domain_error);
}

TEST_CASE("memory identity residual shrinks with the step")
{
    std::vector<double> res;
    for (double dt : {0.01, 0.005, 0.0025}) {
        ScenarioConfig c = small(50);
        c.u0 = InitialProfile::sine(1.0);
        c.u1 = InitialProfile::sine(0.5);
        c.manufactured.enabled = true;
        c.dt = dt;
        c.cfl_safety = 1.0;
        c.tau_max = 0.5;
        const auto r = run(c);
        const std::size_t m = static_cast<std::size_t>(std::llround(0.4 / dt));
        res.push_back(lemma1_residual(r.trajectory, c.kernel, m));
    }
    CHECK(res[0] > res[1]);
    CHECK(res[1] > res[2]);
    CHECK(std::log2(res[1] / res[2]) >= 1.0);
}

TEST_CASE("concavity series")
{
    std::vector<double> tau, A;
    for (int i = 0; i <= 100; ++i) {
        tau.push_back(0.01 * i);
        A.push_back(std::exp(2 * 0.01 * i));
    }
    // p = 5 gives J = 1 / A
    const auto r5 = concavity_series(tau, A, 5.0);
    for (std::size_t i = 0; i < tau.size(); ++i)
        CHECK(r5.J[i] == doctest::Approx(1.0 / A[i]).epsilon(1e-15));

    // p = 3, A = e^{2s}: J = e^{-s}, J'' = e^{-s} > 0
    const auto r3 = concavity_series(tau, A, 3.0);
    CHECK_FALSE(r3.concave_everywhere);
    CHECK(r3.fraction_concave == 0.0);
    CHECK(r3.fraction_decreasing == 1.0);
    for (std::size_t i = 1; i + 1 < tau.size(); ++i) {
        CHECK(r3.d2J[i] == doctest::Approx(std::exp(-tau[i])).epsilon(1e-4));
        CHECK(r3.dJ[i] == doctest::Approx(-std::exp(-tau[i])).epsilon(1e-4));
    }

    // A hitting zero truncates the series
    A[60] = 0.0;
    const auto cut = concavity_series(tau, A, 3.0);
    CHECK(cut.valid == 60);
    CHECK(cut.J.size() == 60);

    // concave decreasing J = 1 - s^2 has a root at 1
    std::vector<double> t2, A2;
    for (int i = 0; i < 90; ++i) {
        t2.push_back(0.01 * i);
        A2.push_back(std::pow(1.0 - t2.back() * t2.back(), -2.0)); // p = 3: J = A^{-1/2}
    }
    const auto c = concavity_series(t2, A2, 3.0);
    CHECK(c.concave_everywhere);
    REQUIRE(c.root_estimate);
    CHECK(*c.root_estimate == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("diagnostics: J recomputable from A, subsampling keeps the last row")
{
    ScenarioConfig c = small(30);
    c.u0 = InitialProfile::sine(3.0);
    const auto r = run(c);
    const auto full = diagnose(r.trajectory, c.kernel);
    for (const auto& d : full)
        CHECK(std::abs(d.J - std::pow(d.A, -0.5)) <= 1e-15 * d.J);
    const auto sub = subsample(full, 7);
    CHECK(sub.front().tau == full.front().tau);
    CHECK(sub.back().tau == full.back().tau);
    CHECK(sub[1].tau == full[7].tau);
    CHECK(std::isnan(full[0].lemma1_residual));
    CHECK(std::isnan(full.back().lemma1_residual));
    CHECK(std::isfinite(full[2].lemma1_residual));
}
