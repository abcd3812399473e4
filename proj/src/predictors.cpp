#include "efviz/predictors.hpp"

#include <cmath>
#include <sstream>

#include "efviz/analysis.hpp"
#include "efviz/errors.hpp"

namespace efviz {

T1Star t1_star(std::span<const double> u0, std::span<const double> u1, double p, const Grid1D& grid)
{
    if (!(p > 1.0))
        throw HypothesisError("t1_star: p must exceed 1");
    double cross = 0.0;
    for (std::size_t i = 0; i < u0.size(); ++i)
        cross += u0[i] * u1[i];
    const double e0 = cross * grid.dx();
    if (!(e0 > 0.0)) {
        std::ostringstream os;
        os << "t1_star: needs int u0 u1 > 0, got " << e0;
        throw HypothesisError(os.str());
    }
    T1Star out;
    out.e0 = e0;
    out.tau_bound = 2.0 / (p - 1.0) * integrate_abs_pow(u0, grid, 1.0) / e0;
    out.t_image = std::exp(out.tau_bound);
    return out;
}

double theorem41_lower_bound(double A0, double E0, double p, double s)
{
    if (!(E0 < 0.0))
        throw HypothesisError("theorem41_lower_bound: initial energy must be negative");
    if (!(s >= 0.0))
        throw HypothesisError("theorem41_lower_bound: s must be nonnegative");
    if (!(p > 1.0))
        throw HypothesisError("theorem41_lower_bound: p must exceed 1");
    const double c = 0.5 * (p - 1.0);
    // s e^{cs} - (e^{cs} - 1)/c, written with expm1 to keep small s accurate
    const double bracket = s * std::exp(c * s) - std::expm1(c * s) / c;
    return A0 - 2.0 * E0 * (p + 1.0) / (p - 1.0) * bracket;
}

std::string to_string(Regime r)
{
    switch (r) {
    case Regime::theorem31: return "theorem31";
    case Regime::theorem41: return "theorem41";
    case Regime::out_of_hypothesis: return "out_of_hypothesis";
    }
    return "unknown";
}

RegimeReport classify_regime(const ScenarioConfig& cfg)
{
    const auto [u0, u1] = initial_data(cfg);
    RegimeReport r;
    double cross = 0.0;
    for (std::size_t i = 0; i < u0.size(); ++i)
        cross += u0[i] * u1[i];
    r.e0 = cross * cfg.grid.dx();
    const EnergyBreakdown e = initial_energy(cfg.grid, u0, u1, cfg.p, cfg.power_mode, cfg.model);
    r.E_w0 = e.energy();
    r.E_w0_cross_term = initial_energy_cross_term(cfg.grid, u0, u1, cfg.p, cfg.power_mode);
    r.narrow = cfg.grid.narrow();
    r.eps_E = 1e-8 * (1.0 + e.kinetic + e.elastic);
    if (r.narrow && r.e0 > 0.0) {
        if (std::abs(r.E_w0) <= r.eps_E)
            r.regime = Regime::theorem31;
        else if (r.E_w0 < 0.0)
            r.regime = Regime::theorem41;
    }
    return r;
}

double bisect_zero_energy_scale(const ScenarioConfig& cfg)
{
    ScenarioConfig probe = cfg;
    probe.manufactured.enabled = false;
    const auto energy_at = [&](double c) {
        probe.data_scale = c;
        const auto [u0, u1] = initial_data(probe);
        return initial_energy(probe.grid, u0, u1, probe.p, probe.power_mode, probe.model).energy();
    };
    // Small amplitudes are dominated by the quadratic part.
    double lo = 1e-6;
    if (!(energy_at(lo) > 0.0))
        throw HypothesisError("zero-energy scaling: energy is not positive for small amplitude");
    double hi = 1.0;
    int guard = 0;
    while (energy_at(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 200)
            throw HypothesisError("zero-energy scaling: energy stays positive for all amplitudes");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (energy_at(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    // Keep the side with the smaller |E|.
    return std::abs(energy_at(lo)) <= std::abs(energy_at(hi)) ? lo : hi;
}

} // namespace efviz
