#pragma once

#include <optional>
#include <string>
#include <vector>

#include "efviz/grid.hpp"
#include "efviz/kernel.hpp"

namespace efviz {

/// Which transformed equation is time-stepped.
///   v_form: v_tt - v_xx + int_0^tau mu(tau-s) v_xx(s) ds = v_t + v^p
///   w_form: w_tt - w_xx + int_0^tau e^{-(tau-s)/2} mu(tau-s) w_xx(s) ds
///             = w/4 + e^{(p-1)tau/2} w^p
/// with v = e^{tau/2} w and tau = ln t.
enum class Form { w_form, v_form };

/// Real extension of u^p for negative u: odd is sign(u)|u|^p, positive_part
/// is max(u, 0)^p.
enum class PowerMode { odd, positive_part };

enum class MemoryPath { automatic, recurrence, full_history };

/// Analytic initial profile on the grid, scaled by `amplitude`.
struct InitialProfile {
    enum class Shape { zero, sine, nodal };

    Shape shape = Shape::zero;
    double amplitude = 0.0;
    int mode = 1;
    /// Nodal values at all n + 2 grid points, boundary included.
    std::vector<double> values;

    static InitialProfile zero() { return {}; }
    static InitialProfile sine(double amplitude, int mode = 1) { return {Shape::sine, amplitude, mode, {}}; }

    /// Interior values. Throws ConfigError when the profile does not vanish at
    /// the endpoints (|value| > 1e-12) or has the wrong length.
    Field evaluate(const Grid1D& grid) const;
};

/// Switches used by verification runs. mass_term only affects the w-form.
struct ModelTerms {
    bool mass_term = true;
    bool nonlinear = true;
};

/// Manufactured target w~(tau, x) = amplitude * cos(tau) * sin(pi (x - r1) / L)
/// for the w-form with an exponential-sum kernel; the source that makes it an
/// exact solution is computed in closed form.
struct Manufactured {
    bool enabled = false;
    double amplitude = 1.0;
};

struct ScenarioConfig {
    std::string name = "scenario";
    double p = 3.0;
    Grid1D grid{0.0, 1.0, 100};
    RelaxationKernel kernel;
    InitialProfile u0;
    InitialProfile u1;
    /// Common factor applied to both u0 and u1.
    double data_scale = 1.0;
    /// Replace data_scale by the factor that makes the initial energy vanish.
    bool scale_to_zero_energy = false;
    std::optional<double> dt;
    double cfl_safety = 0.5;
    double tau_max = 1.0;
    double blowup_threshold = 1e8;
    int record_every = 1;
    Form form = Form::w_form;
    PowerMode power_mode = PowerMode::odd;
    MemoryPath memory = MemoryPath::automatic;
    ModelTerms model;
    Manufactured manufactured;

    /// dt if given, otherwise cfl_safety * dx.
    double time_step() const;

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

std::string to_string(Form f);
std::string to_string(PowerMode m);

/// Scaled initial data (u0, u1) at the interior nodes.
std::pair<Field, Field> initial_data(const ScenarioConfig& cfg);

/// Nonlinearity f(u) in the chosen extension.
double power(double u, double p, PowerMode mode) noexcept;

/// F(u) = int_0^u f, times (p + 1): |u|^{p+1} (odd) or max(u,0)^{p+1}.
double power_potential(double u, double p, PowerMode mode) noexcept;

} // namespace efviz
