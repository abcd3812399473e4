#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "efviz/kernel.hpp"
#include "efviz/trajectory.hpp"

namespace efviz {

/// Parts of the modified energy of the w-form equation,
///   2E = kinetic + elastic + history - mass - potential
/// with
///   kinetic   = int w_tau^2
///   elastic   = (1 - int_0^tau e^{-s/2} mu(s) ds) int w_x^2
///   history   = int_0^tau e^{-(tau-s)/2} mu(tau-s) int |w_x(tau) - w_x(s)|^2 dx ds
///   mass      = 1/4 int w^2
///   potential = 2/(p+1) e^{(p-1)tau/2} int |w|^{p+1}
/// The weights e^{-sigma/2} mu(sigma) are those of the memory kernel the
/// equation convolves against, which makes E nonincreasing along solutions.
struct EnergyBreakdown {
    double kinetic = 0.0;
    double elastic = 0.0;
    double history = 0.0;
    double mass = 0.0;
    double potential = 0.0;

    double twice_energy() const noexcept { return kinetic + elastic + history - mass - potential; }
    double energy() const noexcept { return 0.5 * twice_energy(); }
};

struct DiagnosticRow {
    double tau = 0.0;
    double sup_norm = 0.0;
    double A = 0.0;
    double J = 0.0;
    double dJ = 0.0;
    double d2J = 0.0;
    double E_w = 0.0;
    EnergyBreakdown parts;
    double L = 0.0;
    double F = 0.0;
    double lemma1_residual = 0.0;
};

using DiagnosticSeries = std::vector<DiagnosticRow>;

/// w_tau at step m: initial velocity at m = 0, centered difference inside,
/// one-sided second-order difference at the last frame.
Field time_derivative(const Trajectory& traj, std::size_t m);

EnergyBreakdown energy_w(const Trajectory& traj, const RelaxationKernel& kernel, std::size_t m);

/// Energy at tau = 0 from the data (w = u0, w_tau = u1 - u0/2).
EnergyBreakdown initial_energy(const Grid1D& grid, std::span<const double> u0, std::span<const double> u1, double p,
                               PowerMode mode = PowerMode::odd, ModelTerms model = {});

/// Same data through the closed expression that replaces -1/4 int u0^2 by
/// + int u0 u1 (reported alongside, never used for decisions).
double initial_energy_cross_term(const Grid1D& grid, std::span<const double> u0, std::span<const double> u1,
                                 double p, PowerMode mode = PowerMode::odd);

struct MonotonicityReport {
    /// max over m of E(tau_{m+1}) - E(tau_m); negative when strictly decreasing.
    double max_jump = 0.0;
    double tau_at = 0.0;

    double positive_jump() const noexcept { return max_jump > 0.0 ? max_jump : 0.0; }
};

MonotonicityReport energy_monotonicity_report(std::span<const double> tau, std::span<const double> energy);
MonotonicityReport energy_monotonicity_report(const DiagnosticSeries& series, double tau_limit = -1.0);

/// Positive, nonincreasing weight alpha(tau) and its derivative.
struct Weight {
    std::function<double(double)> value;
    std::function<double(double)> derivative;

    /// alpha(tau) = e^{-tau/2}.
    static Weight exponential_decay();
};

/// Left side and the six right-side terms of the memory-term identity
///   int alpha int_0^tau e^{s/2} mu(tau-s) w_xx(s) w_tau(tau) ds dx
///     = 1/2 d/dtau[alpha S1] - 1/2 d/dtau[alpha G W] - 1/2 alpha S2
///       + 1/2 alpha G' W - 1/2 alpha' S1 + 1/2 alpha' G W
/// where W = int w_x^2, G = int_0^tau e^{s/2} mu(tau-s) ds,
/// S1 = int_0^tau e^{s/2} mu(tau-s) int |w_x(tau) - w_x(s)|^2 dx ds and S2 is
/// S1 with mu replaced by mu'.
struct Lemma1Terms {
    double lhs = 0.0;
    double rhs[6] = {0, 0, 0, 0, 0, 0};
    double rhs_total() const noexcept;
    /// |lhs - rhs| / (1 + |lhs|).
    double residual() const noexcept;
};

/// Evaluates the identity at step m. The left side uses the w_xx snapshots,
/// the right side the w_x snapshots and centered differences for d/dtau.
/// Throws std::domain_error when m < 2 or m + 1 is not recorded.
Lemma1Terms lemma1_terms(const Trajectory& traj, const RelaxationKernel& kernel, std::size_t m,
                         const Weight& alpha = Weight::exponential_decay());
double lemma1_residual(const Trajectory& traj, const RelaxationKernel& kernel, std::size_t m,
                       const Weight& alpha = Weight::exponential_decay());

struct BoundCheck {
    double worst_violation = 0.0;
    double tau_at = 0.0;
};

/// max over recorded tau of E(tau) - [E(0) - c int_0^tau e^{(p-1)s/2} int |w|^{p+1}],
/// c = (p-1)/(p+1) unless overridden.
BoundCheck lemma22_bound_check(const DiagnosticSeries& series, double p,
                               std::optional<double> coefficient = std::nullopt);

struct ConcavityOptions {
    /// Samples with tau below this fraction of the last valid tau are
    /// treated as transient.
    double transient_fraction = 0.05;
    /// |J''| <= band * |J| counts as neutral.
    double band = 1e-10;
};

struct ConcavityReport {
    std::vector<double> tau;
    std::vector<double> J;
    std::vector<double> dJ;
    std::vector<double> d2J;
    /// Number of samples kept (A finite and positive).
    std::size_t valid = 0;
    bool concave_everywhere = false;
    double fraction_concave = 0.0;
    double fraction_decreasing = 0.0;
    /// Root of J extrapolated from the last linear segment.
    std::optional<double> root_estimate;
};

/// J = A^{-k}, k = (p-1)/4, with centered derivatives on a uniform tau grid.
ConcavityReport concavity_series(std::span<const double> tau, std::span<const double> A, double p,
                                 const ConcavityOptions& options = {});

/// All diagnostics at every step; the recorded series is a subsample.
DiagnosticSeries diagnose(const Trajectory& traj, const RelaxationKernel& kernel);

/// Keeps every `every`-th row plus the last one.
DiagnosticSeries subsample(const DiagnosticSeries& full, int every);

} // namespace efviz
