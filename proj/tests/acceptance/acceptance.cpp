// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "efviz/analysis.hpp"
#include "efviz/commands.hpp"
#include "efviz/config.hpp"
#include "efviz/kernel.hpp"
#include "efviz/lane_emden.hpp"
#include "efviz/predictors.hpp"
#include "efviz/solver.hpp"

using namespace efviz;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double max_diff(const Field& a, const Field& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

ScenarioConfig with_grid(ScenarioConfig c, int n)
{
    c.grid = Grid1D(c.grid.r1(), c.grid.r2(), n);
    if (c.scale_to_zero_energy) {
        c.data_scale = 1.0;
        c.data_scale = bisect_zero_energy_scale(c);
    }
    return c;
}

Outcome a1_lane_emden()
{
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (double p : {1.0, 5.0}) {
        LaneEmdenProblem prob;
        prob.p = p;
        prob.dt = 1e-3;
        prob.t_max = 10.0;
        for (const auto& s : solve_lane_emden(prob)) {
            if (s.t < 0.01 - 1e-12)
                continue;
            const double exact = lane_emden_closed_form(p, s.t);
            worst = std::max(worst, std::abs(s.u - exact) / std::abs(exact));
        }
    }
    const double t = seconds(start);
    return {worst <= 1e-6 && t < 1.0, fmt("max rel err %.3e (<= 1e-6), %.3f s (< 1 s)", worst, t)};
}

Outcome a2_manufactured()
{
    const auto start = std::chrono::steady_clock::now();
    ScenarioConfig c = preset_config("manufactured");
    c = with_grid(c, 50);
    c.tau_max = 1.0;
    const auto table = convergence_study(c, 4);
    bool ok = true;
    std::string orders;
    for (std::size_t l = 1; l < table.size(); ++l) {
        const double o = table[l].order.value_or(0.0);
        ok = ok && o >= 1.8 && o <= 2.2;
        orders += fmt("%s%.3f", orders.empty() ? "" : ", ", o);
    }
    const double t = seconds(start);
    return {ok && t < 60.0, fmt("n = %d..%d, orders [%s] (in [1.8, 2.2]), %.2f s (< 60 s)", table.front().n,
                                table.back().n, orders.c_str(), t)};
}

// Largest positive jump of E_w over [0, horizon].
double energy_jump(const RunResult& r, double horizon)
{
    return energy_monotonicity_report(r.diagnostics, horizon).positive_jump();
}

Outcome a3_dissipation()
{
    bool ok = true;
    std::string detail;
    for (const char* name : {"small_data", "theorem31", "theorem41"}) {
        const ScenarioConfig base = preset_config(name);
        const ScenarioConfig coarse = with_grid(base, 100);
        const ScenarioConfig fine = with_grid(base, 201);
        const RunResult rc = run(coarse);
        const RunResult rf = run(fine);
        // stay clear of the blow-up, where no scheme resolves the solution
        const double horizon = rc.tau_b ? 0.75 * *rc.tau_b : coarse.tau_max;
        const double jc = energy_jump(rc, horizon);
        const double jf = energy_jump(rf, horizon);
        const auto bound = [&](const ScenarioConfig& c) {
            const double dt = c.time_step();
            const double dx = c.grid.dx();
            return 1.0 * (dt * dt + dx * dx);
        };
        double scale = 0.0;
        for (const auto& d : rf.diagnostics)
            if (d.tau <= horizon)
                scale = std::max(scale, std::abs(d.E_w) + d.parts.kinetic + d.parts.potential);
        const double floor = 1e-12 * (1.0 + scale);
        const bool shrinks = jf <= floor || jc >= 3.5 * jf;
        const bool ok_one = jc <= bound(coarse) && jf <= bound(fine) && shrinks;
        ok = ok && ok_one;
        detail += fmt("%s%s: jump %.2e -> %.2e (bound %.2e, floor %.1e)", detail.empty() ? "" : "; ", name, jc, jf,
                      bound(fine), floor);
    }
    return {ok, detail};
}

Outcome a4_theorem31()
{
    const auto start = std::chrono::steady_clock::now();
    const ScenarioConfig base = preset_config("theorem31");
    std::string detail;
    bool ok = true;
    const int levels[] = {100, 201, 403};
    for (int n : levels) {
        ScenarioConfig c = with_grid(base, n);
        c.tau_max = 2.0;
        const RunResult r = run(c);
        const auto [u0, u1] = initial_data(c);
        const double t1 = t1_star(u0, u1, c.p, c.grid).tau_bound;
        const double tau_b = r.tau_b.value_or(std::numeric_limits<double>::infinity());
        std::vector<double> tau, A;
        for (const auto& d : r.diagnostics) {
            tau.push_back(d.tau);
            A.push_back(d.A);
        }
        const ConcavityReport cr = concavity_series(tau, A, c.p);
        detail += fmt("%sn=%d tau_b=%.4f T1*=%.4f concave %.2f%% decreasing %.2f%%", detail.empty() ? "" : "; ", n,
                      tau_b, t1, 100 * cr.fraction_concave, 100 * cr.fraction_decreasing);
        if (n == levels[2])
            ok = r.termination == Termination::blowup_detected && tau_b <= 1.1 * t1 &&
                 cr.fraction_concave >= 0.99 && cr.fraction_decreasing >= 0.99;
    }
    const double t = seconds(start);
    detail += fmt("; %.1f s (< 120 s)", t);
    return {ok && t < 120.0, detail};
}

Outcome a5_theorem41()
{
    const ScenarioConfig c = with_grid(preset_config("theorem41"), 201);
    const RunResult r = run(c);
    const RegimeReport reg = classify_regime(c);
    const auto [u0, u1] = initial_data(c);
    const double t1 = t1_star(u0, u1, c.p, c.grid).tau_bound;
    const double A0 = r.diagnostics.front().A;
    double worst = std::numeric_limits<double>::infinity();
    std::size_t samples = 0;
    for (const auto& d : r.diagnostics) {
        if (r.tau_b && d.tau >= *r.tau_b)
            break;
        worst = std::min(worst, d.A / theorem41_lower_bound(A0, reg.E_w0, c.p, d.tau));
        ++samples;
    }
    const double tau_b = r.tau_b.value_or(std::numeric_limits<double>::infinity());
    const bool ok = reg.regime == Regime::theorem41 && worst >= 0.98 && tau_b < t1;
    return {ok, fmt("E_w0=%.3f, min A/bound %.4f over %zu samples (>= 0.98), tau_b=%.4f < T1*=%.4f", reg.E_w0, worst,
                    samples, tau_b, t1)};
}

double max_residual(double dt)
{
    ScenarioConfig c = preset_config("manufactured");
    c = with_grid(c, 200);
    c.cfl_safety = 1.0;
    c.dt = dt;
    c.tau_max = 1.0;
    const RunResult r = run(c);
    double worst = 0.0;
    for (const auto& d : r.diagnostics)
        if (std::isfinite(d.lemma1_residual))
            worst = std::max(worst, d.lemma1_residual);
    return worst;
}

Outcome a6_memory_identity()
{
    const double r1 = max_residual(2.5e-3);
    const double r2 = max_residual(1.25e-3);
    const double r3 = max_residual(6.25e-4);
    const double o1 = std::log2(r1 / r2);
    const double o2 = std::log2(r2 / r3);
    const bool ok = r1 <= 1e-3 && o1 >= 1.0 && o2 >= 1.0;
    return {ok, fmt("residual %.3e (<= 1e-3) at dt=2.5e-3, n=200; %.3e, %.3e after halving; orders %.2f, %.2f (>= 1)", r1,
                    r2, r3, o1, o2)};
}

double transform_gap(int n)
{
    ScenarioConfig c = preset_config("small_data");
    c = with_grid(c, n);
    c.u0 = InitialProfile::sine(1.0);
    c.u1 = InitialProfile::sine(0.5);
    c.tau_max = 1.0;
    c.form = Form::w_form;
    const RunResult w = run(c);
    c.form = Form::v_form;
    const RunResult v = run(c);
    // both trajectories are stored in w variables; compare in v = e^{tau/2} w
    double gap = 0.0;
    for (std::size_t m = 0; m < std::min(w.trajectory.size(), v.trajectory.size()); ++m)
        gap = std::max(gap, std::exp(0.5 * w.trajectory.tau(m)) *
                                max_diff(w.trajectory.frames[m], v.trajectory.frames[m]));
    return gap;
}

Outcome a7_transform()
{
    const double g100 = transform_gap(100);
    const double g200 = transform_gap(200);
    const double g400 = transform_gap(400);
    const double r1 = g100 / g200;
    const double r2 = g200 / g400;
    const bool ok = g200 <= 1e-3 && r1 >= 3.0 && r1 <= 5.0 && r2 >= 3.0 && r2 <= 5.0;
    return {ok, fmt("max |v - e^{tau/2} w|: n=100 %.3e, n=200 %.3e (<= 1e-3), n=400 %.3e; ratios %.2f, %.2f (~4)", g100,
                    g200, g400, r1, r2)};
}

Outcome a8_kernels()
{
    const double l1 = RelaxationKernel::exponential_sum({{0.25, 1.0}}).admissibility();
    const double l2 = RelaxationKernel::exponential_sum({{0.3, 2.0}}).admissibility();
    bool rejected = false;
    try {
        RelaxationKernel::exponential_sum({{0.6, 1.0}});
    } catch (const AdmissibilityError& e) {
        rejected = e.clause() == KernelViolation::mass_too_large;
    }
    const bool ok = std::abs(l1 - 0.5) <= 1e-10 && std::abs(l2 - 0.8) <= 1e-10 && rejected;
    return {ok, fmt("l(0.25e^-s) = %.12f, l(0.3e^-2s) = %.12f, 0.6e^-s %s", l1, l2,
                    rejected ? "rejected for l <= 0" : "ACCEPTED")};
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"A1 lane-emden oracle", a1_lane_emden},
        {"A2 manufactured convergence", a2_manufactured},
        {"A3 energy dissipation", a3_dissipation},
        {"A4 zero-energy blow-up bound", a4_theorem31},
        {"A5 negative-energy lower bound", a5_theorem41},
        {"A6 memory identity", a6_memory_identity},
        {"A7 transform equivalence", a7_transform},
        {"A8 kernel admissibility", a8_kernels},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
