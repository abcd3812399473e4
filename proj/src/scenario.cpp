#include "efviz/scenario.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "efviz/errors.hpp"

namespace efviz {

namespace {

constexpr double dirichlet_tolerance = 1e-12;

} // namespace

Field InitialProfile::evaluate(const Grid1D& grid) const
{
    const auto n = static_cast<std::size_t>(grid.n());
    Field f(n, 0.0);
    switch (shape) {
    case Shape::zero:
        break;
    case Shape::sine: {
        const double k = std::numbers::pi * mode / grid.length();
        for (std::size_t i = 0; i < n; ++i)
            f[i] = amplitude * std::sin(k * (grid.node(static_cast<int>(i)) - grid.r1()));
        break;
    }
    case Shape::nodal: {
        if (values.size() != n + 2) {
            std::ostringstream os;
            os << "nodal initial data needs n + 2 = " << n + 2 << " values, got " << values.size();
            throw ConfigError(os.str());
        }
        if (std::abs(amplitude * values.front()) > dirichlet_tolerance ||
            std::abs(amplitude * values.back()) > dirichlet_tolerance)
            throw ConfigError("initial data must vanish at both endpoints (Dirichlet compatibility)");
        for (std::size_t i = 0; i < n; ++i)
            f[i] = amplitude * values[i + 1];
        break;
    }
    }
    return f;
}

double ScenarioConfig::time_step() const { return dt ? *dt : cfl_safety * grid.dx(); }

void ScenarioConfig::validate() const
{
    if (!std::isfinite(p) || !(p > 1.0))
        throw ConfigError("p: must satisfy p > 1");
    if (!std::isfinite(tau_max) || !(tau_max > 0.0))
        throw ConfigError("tau_max: must be positive");
    if (!(cfl_safety > 0.0) || cfl_safety > 1.0)
        throw ConfigError("cfl_safety: must lie in (0, 1]");
    const double step = time_step();
    if (!std::isfinite(step) || !(step > 0.0))
        throw ConfigError("dt: must be positive");
    if (step > cfl_safety * grid.dx() * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "dt: " << step << " exceeds cfl_safety * dx = " << cfl_safety * grid.dx();
        throw ConfigError(os.str());
    }
    if (!(blowup_threshold > 0.0))
        throw ConfigError("blowup_threshold: must be positive");
    if (record_every < 1)
        throw ConfigError("record_every: must be at least 1");
    if (!std::isfinite(data_scale))
        throw ConfigError("data_scale: must be finite");
    if (memory == MemoryPath::recurrence && kernel.family() != KernelFamily::exponential_sum)
        throw ConfigError("memory: recurrence path requires an exponential-sum kernel");
    if (manufactured.enabled) {
        if (form != Form::w_form)
            throw ConfigError("manufactured: only available for the w-form");
        if (kernel.family() != KernelFamily::exponential_sum)
            throw ConfigError("manufactured: requires an exponential-sum kernel");
    }
    if (u0.shape == InitialProfile::Shape::sine || u1.shape == InitialProfile::Shape::sine) {
        if (u0.mode < 1 || u1.mode < 1)
            throw ConfigError("initial: sine mode must be a positive integer");
    }
    (void)u0.evaluate(grid);
    (void)u1.evaluate(grid);
}

std::string to_string(Form f) { return f == Form::w_form ? "w_form" : "v_form"; }

std::string to_string(PowerMode m) { return m == PowerMode::odd ? "odd" : "positive_part"; }

std::pair<Field, Field> initial_data(const ScenarioConfig& cfg)
{
    if (cfg.manufactured.enabled) {
        // w~(0) = A sin, w~_tau(0) = 0, hence u1 = u0 / 2.
        const auto profile = InitialProfile::sine(cfg.manufactured.amplitude);
        Field u0 = profile.evaluate(cfg.grid);
        Field u1 = u0;
        for (double& v : u1)
            v *= 0.5;
        return {std::move(u0), std::move(u1)};
    }
    Field u0 = cfg.u0.evaluate(cfg.grid);
    Field u1 = cfg.u1.evaluate(cfg.grid);
    for (double& v : u0)
        v *= cfg.data_scale;
    for (double& v : u1)
        v *= cfg.data_scale;
    return {std::move(u0), std::move(u1)};
}

double power(double u, double p, PowerMode mode) noexcept
{
    if (mode == PowerMode::positive_part)
        return u > 0.0 ? std::pow(u, p) : 0.0;
    const double a = std::pow(std::abs(u), p);
    return u < 0.0 ? -a : a;
}

double power_potential(double u, double p, PowerMode mode) noexcept
{
    if (mode == PowerMode::positive_part)
        return u > 0.0 ? std::pow(u, p + 1.0) : 0.0;
    return std::pow(std::abs(u), p + 1.0);
}

} // namespace efviz
