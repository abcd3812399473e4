#pragma once

#include <span>
#include <string>

#include "efviz/grid.hpp"
#include "efviz/scenario.hpp"

namespace efviz {

/// Blow-up horizon (2/(p-1)) int|u0| / int u0 u1 on the tau axis, and its
/// image e^{tau} on the original time axis.
struct T1Star {
    double tau_bound = 0.0;
    double t_image = 0.0;
    double e0 = 0.0;
};

/// Throws HypothesisError when int u0 u1 <= 0 or p <= 1.
T1Star t1_star(std::span<const double> u0, std::span<const double> u1, double p, const Grid1D& grid);

/// A0 - 2 E0 (p+1)/(p-1) [s e^{cs} - (e^{cs} - 1)/c], c = (p-1)/2.
/// Throws HypothesisError unless E0 < 0 and s >= 0.
double theorem41_lower_bound(double A0, double E0, double p, double s);

enum class Regime { theorem31, theorem41, out_of_hypothesis };

std::string to_string(Regime r);

struct RegimeReport {
    double e0 = 0.0;
    double E_w0 = 0.0;
    /// Initial energy with the cross term in place of the mass term.
    double E_w0_cross_term = 0.0;
    bool narrow = false;
    Regime regime = Regime::out_of_hypothesis;
    double eps_E = 0.0;
};

/// e0, E_w0 and the interval width decide the regime; |E_w0| <= eps_E counts
/// as zero energy.
RegimeReport classify_regime(const ScenarioConfig& cfg);

/// Common amplitude factor c for which the data (c u0, c u1) has zero initial
/// energy, found by bisection. Throws HypothesisError when the energy does not
/// change sign for growing c.
double bisect_zero_energy_scale(const ScenarioConfig& cfg);

} // namespace efviz
