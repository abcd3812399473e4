#include "efviz/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace efviz {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

double sum_sq(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v)
        s += x * x;
    return s;
}

// int |w_x(tau_m) - w_x(tau_k)|^2 dx over cell faces.
double gradient_gap(const HistoryStore& h, std::size_t m, std::size_t k, double dx)
{
    const auto& a = h.grad(m);
    const auto& b = h.grad(k);
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        s += d * d;
    }
    return s * dx;
}

double potential_integral(std::span<const double> w, const Grid1D& g, double p, PowerMode mode)
{
    double s = 0.0;
    for (double v : w)
        s += power_potential(v, p, mode);
    return s * g.dx();
}

// History sums at step m that feed both the energy and the memory identity.
struct HistorySums {
    double W = 0.0;        // int w_x^2
    double damped = 0.0;   // sum_k w_k e^{-(tau-s)/2} mu(tau-s) D(m,k)
    double S1 = 0.0;       // sum_k w_k e^{s/2} mu(tau-s) D(m,k)
    double S2 = 0.0;       // sum_k w_k e^{s/2} mu'(tau-s) D(m,k)
    double G = 0.0;        // sum_k w_k e^{s/2} mu(tau-s)
    double Gp = 0.0;       // e^{tau/2} mu(0) + sum_k w_k e^{s/2} mu'(tau-s)
    double lhs_inner = 0.0; // sum_k w_k e^{s/2} mu(tau-s) int w_xx(s) w_tau(tau)
};

HistorySums history_sums(const Trajectory& traj, const RelaxationKernel& kernel, std::size_t m,
                         std::span<const double> velocity, bool with_identity)
{
    HistorySums out;
    const double dx = traj.grid.dx();
    const HistoryStore& h = traj.history;
    out.W = sum_sq(h.grad(m)) * dx;
    const double tau = traj.tau(m);
    if (with_identity)
        out.Gp = std::exp(0.5 * tau) * kernel(0.0);
    if (kernel.is_null() || m == 0)
        return out;
    for (std::size_t k = 0; k <= m; ++k) {
        const double wk = trapezoid_weight(k, m, traj.dt);
        const double s = traj.tau(k);
        const double lag = tau - s;
        const double mu = kernel(lag);
        const double gap = k == m ? 0.0 : gradient_gap(h, m, k, dx);
        out.damped += wk * std::exp(-0.5 * lag) * mu * gap;
        if (!with_identity)
            continue;
        const double grow = std::exp(0.5 * s);
        const double dmu = kernel.derivative(lag);
        out.S1 += wk * grow * mu * gap;
        out.S2 += wk * grow * dmu * gap;
        out.G += wk * grow * mu;
        out.Gp += wk * grow * dmu;
        const Field& lap = h.lap(k);
        double inner = 0.0;
        for (std::size_t i = 0; i < lap.size(); ++i)
            inner += lap[i] * velocity[i];
        out.lhs_inner += wk * grow * mu * inner * dx;
    }
    return out;
}

EnergyBreakdown energy_from(const Trajectory& traj, const RelaxationKernel& kernel, std::size_t m,
                            std::span<const double> velocity, double W, double damped_history)
{
    const Field& w = traj.frames[m];
    const double tau = traj.tau(m);
    EnergyBreakdown e;
    e.kinetic = integrate_abs_pow(velocity, traj.grid, 2.0);
    e.elastic = (1.0 - kernel.damped_mass(tau)) * W;
    e.history = damped_history;
    if (traj.model.mass_term)
        e.mass = 0.25 * integrate_abs_pow(w, traj.grid, 2.0);
    if (traj.model.nonlinear)
        e.potential = 2.0 / (traj.p + 1.0) * std::exp(0.5 * (traj.p - 1.0) * tau) *
                      potential_integral(w, traj.grid, traj.p, traj.power_mode);
    return e;
}

// First and second derivatives of uniformly spaced samples; second-order
// one-sided stencils at the ends.
void differentiate(std::span<const double> y, double h, std::vector<double>& d1, std::vector<double>& d2)
{
    const std::size_t n = y.size();
    d1.assign(n, nan);
    d2.assign(n, nan);
    if (n >= 3) {
        for (std::size_t i = 1; i + 1 < n; ++i) {
            d1[i] = (y[i + 1] - y[i - 1]) / (2.0 * h);
            d2[i] = (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (h * h);
        }
        d1[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h);
        d1[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * h);
    }
    if (n >= 4) {
        d2[0] = (2.0 * y[0] - 5.0 * y[1] + 4.0 * y[2] - y[3]) / (h * h);
        d2[n - 1] = (2.0 * y[n - 1] - 5.0 * y[n - 2] + 4.0 * y[n - 3] - y[n - 4]) / (h * h);
    }
}

} // namespace

Field time_derivative(const Trajectory& traj, std::size_t m)
{
    const std::size_t last = traj.size() - 1;
    if (m > last)
        throw std::out_of_range("time_derivative: step beyond trajectory");
    if (m == 0)
        return traj.initial_velocity;
    const Field& f = traj.frames[m];
    Field out(f.size());
    const double dt = traj.dt;
    if (m < last) {
        const Field& a = traj.frames[m + 1];
        const Field& b = traj.frames[m - 1];
        for (std::size_t i = 0; i < f.size(); ++i)
            out[i] = (a[i] - b[i]) / (2.0 * dt);
    } else if (m >= 2) {
        const Field& b = traj.frames[m - 1];
        const Field& c = traj.frames[m - 2];
        for (std::size_t i = 0; i < f.size(); ++i)
            out[i] = (3.0 * f[i] - 4.0 * b[i] + c[i]) / (2.0 * dt);
    } else {
        const Field& b = traj.frames[m - 1];
        for (std::size_t i = 0; i < f.size(); ++i)
            out[i] = (f[i] - b[i]) / dt;
    }
    return out;
}

EnergyBreakdown energy_w(const Trajectory& traj, const RelaxationKernel& kernel, std::size_t m)
{
    const Field velocity = time_derivative(traj, m);
    const HistorySums sums = history_sums(traj, kernel, m, velocity, false);
    return energy_from(traj, kernel, m, velocity, sums.W, sums.damped);
}

EnergyBreakdown initial_energy(const Grid1D& grid, std::span<const double> u0, std::span<const double> u1, double p,
                               PowerMode mode, ModelTerms model)
{
    Field velocity(u0.size());
    for (std::size_t i = 0; i < u0.size(); ++i)
        velocity[i] = u1[i] - 0.5 * u0[i];
    EnergyBreakdown e;
    e.kinetic = integrate_abs_pow(velocity, grid, 2.0);
    e.elastic = sum_sq(gradient(u0, grid)) * grid.dx();
    if (model.mass_term)
        e.mass = 0.25 * integrate_abs_pow(u0, grid, 2.0);
    if (model.nonlinear)
        e.potential = 2.0 / (p + 1.0) * potential_integral(u0, grid, p, mode);
    return e;
}

double initial_energy_cross_term(const Grid1D& grid, std::span<const double> u0, std::span<const double> u1,
                                 double p, PowerMode mode)
{
    Field velocity(u0.size());
    double cross = 0.0;
    for (std::size_t i = 0; i < u0.size(); ++i) {
        velocity[i] = u1[i] - 0.5 * u0[i];
        cross += u0[i] * u1[i];
    }
    const double twice = integrate_abs_pow(velocity, grid, 2.0) + sum_sq(gradient(u0, grid)) * grid.dx() +
                         cross * grid.dx() - 2.0 / (p + 1.0) * potential_integral(u0, grid, p, mode);
    return 0.5 * twice;
}

MonotonicityReport energy_monotonicity_report(std::span<const double> tau, std::span<const double> energy)
{
    MonotonicityReport r;
    r.max_jump = -std::numeric_limits<double>::infinity();
    if (energy.size() < 2) {
        r.max_jump = 0.0;
        return r;
    }
    for (std::size_t m = 0; m + 1 < energy.size(); ++m) {
        const double jump = energy[m + 1] - energy[m];
        if (jump > r.max_jump || std::isnan(jump)) {
            r.max_jump = jump;
            r.tau_at = tau[m + 1];
            if (std::isnan(jump))
                break;
        }
    }
    return r;
}

MonotonicityReport energy_monotonicity_report(const DiagnosticSeries& series, double tau_limit)
{
    std::vector<double> tau;
    std::vector<double> e;
    for (const auto& row : series) {
        if (tau_limit >= 0.0 && row.tau > tau_limit)
            break;
        tau.push_back(row.tau);
        e.push_back(row.E_w);
    }
    return energy_monotonicity_report(tau, e);
}

Weight Weight::exponential_decay()
{
    return {[](double t) { return std::exp(-0.5 * t); }, [](double t) { return -0.5 * std::exp(-0.5 * t); }};
}

double Lemma1Terms::rhs_total() const noexcept
{
    double s = 0.0;
    for (double v : rhs)
        s += v;
    return s;
}

double Lemma1Terms::residual() const noexcept { return std::abs(lhs - rhs_total()) / (1.0 + std::abs(lhs)); }

Lemma1Terms lemma1_terms(const Trajectory& traj, const RelaxationKernel& kernel, std::size_t m, const Weight& alpha)
{
    if (m < 2)
        throw std::domain_error("memory identity needs tau >= 2 dt");
    if (m + 1 >= traj.size())
        throw std::domain_error("memory identity needs the step after tau");
    const double dt = traj.dt;
    const Field velocity = time_derivative(traj, m);
    const HistorySums here = history_sums(traj, kernel, m, velocity, true);
    const Field none(velocity.size(), 0.0);
    const HistorySums before = history_sums(traj, kernel, m - 1, none, true);
    const HistorySums after = history_sums(traj, kernel, m + 1, none, true);

    const double t = traj.tau(m);
    const double a = alpha.value(t);
    const double ap = alpha.derivative(t);
    const double a_before = alpha.value(t - dt);
    const double a_after = alpha.value(t + dt);

    Lemma1Terms out;
    out.lhs = a * here.lhs_inner;
    out.rhs[0] = 0.5 * (a_after * after.S1 - a_before * before.S1) / (2.0 * dt);
    out.rhs[1] = -0.5 * (a_after * after.G * after.W - a_before * before.G * before.W) / (2.0 * dt);
    out.rhs[2] = -0.5 * a * here.S2;
    out.rhs[3] = 0.5 * a * here.Gp * here.W;
    out.rhs[4] = -0.5 * ap * here.S1;
    out.rhs[5] = 0.5 * ap * here.G * here.W;
    return out;
}

double lemma1_residual(const Trajectory& traj, const RelaxationKernel& kernel, std::size_t m, const Weight& alpha)
{
    return lemma1_terms(traj, kernel, m, alpha).residual();
}

BoundCheck lemma22_bound_check(const DiagnosticSeries& series, double p, std::optional<double> coefficient)
{
    BoundCheck out;
    if (series.empty())
        return out;
    const double c = coefficient ? *coefficient : (p - 1.0) / (p + 1.0);
    const double e0 = series.front().E_w;
    out.tau_at = series.front().tau;
    out.worst_violation = series.front().E_w - e0;
    for (const auto& row : series) {
        // int_0^tau e^{(p-1)s/2} int |w|^{p+1} = (p + 1) L(tau)
        const double bound = e0 - c * (p + 1.0) * row.L;
        const double v = row.E_w - bound;
        if (v > out.worst_violation || std::isnan(v)) {
            out.worst_violation = v;
            out.tau_at = row.tau;
        }
    }
    return out;
}

ConcavityReport concavity_series(std::span<const double> tau, std::span<const double> A, double p,
                                 const ConcavityOptions& options)
{
    if (tau.size() != A.size())
        throw std::invalid_argument("concavity_series: tau and A sizes differ");
    const double k = 0.25 * (p - 1.0);
    ConcavityReport r;
    std::size_t valid = 0;
    while (valid < A.size() && std::isfinite(A[valid]) && A[valid] > 0.0)
        ++valid;
    r.valid = valid;
    r.tau.assign(tau.begin(), tau.begin() + static_cast<std::ptrdiff_t>(valid));
    r.J.resize(valid);
    for (std::size_t i = 0; i < valid; ++i)
        r.J[i] = std::pow(A[i], -k);
    const double h = valid >= 2 ? r.tau[1] - r.tau[0] : 1.0;
    differentiate(r.J, h, r.dJ, r.d2J);
    if (valid < 3)
        return r;

    const double start = options.transient_fraction * r.tau[valid - 1];
    std::size_t considered = 0;
    std::size_t concave = 0;
    std::size_t decreasing = 0;
    for (std::size_t i = 1; i + 1 < valid; ++i) {
        if (r.tau[i] < start)
            continue;
        ++considered;
        if (r.d2J[i] < 0.0 || std::abs(r.d2J[i]) <= options.band * std::abs(r.J[i]))
            ++concave;
        if (r.dJ[i] < 0.0)
            ++decreasing;
    }
    if (considered > 0) {
        r.fraction_concave = static_cast<double>(concave) / static_cast<double>(considered);
        r.fraction_decreasing = static_cast<double>(decreasing) / static_cast<double>(considered);
        r.concave_everywhere = concave == considered;
    }
    const double j1 = r.J[valid - 1];
    const double j0 = r.J[valid - 2];
    if (j1 < j0) {
        const double slope = (j1 - j0) / (r.tau[valid - 1] - r.tau[valid - 2]);
        r.root_estimate = r.tau[valid - 1] - j1 / slope;
    }
    return r;
}

DiagnosticSeries diagnose(const Trajectory& traj, const RelaxationKernel& kernel)
{
    const std::size_t n = traj.size();
    DiagnosticSeries rows(n);
    if (n == 0)
        return rows;
    const double k = 0.25 * (traj.p - 1.0);
    const double dt = traj.dt;
    const Weight alpha = Weight::exponential_decay();

    std::vector<HistorySums> sums(n);
    std::vector<double> potential_rate(n, 0.0);
    for (std::size_t m = 0; m < n; ++m) {
        const Field velocity = time_derivative(traj, m);
        sums[m] = history_sums(traj, kernel, m, velocity, true);
        DiagnosticRow& row = rows[m];
        row.tau = traj.tau(m);
        row.sup_norm = sup_norm(traj.frames[m]);
        row.A = integrate_abs_pow(traj.frames[m], traj.grid, 2.0);
        row.J = row.A > 0.0 && std::isfinite(row.A) ? std::pow(row.A, -k) : nan;
        row.parts = energy_from(traj, kernel, m, velocity, sums[m].W, sums[m].damped);
        row.E_w = row.parts.energy();
        row.F = row.parts.kinetic + row.parts.elastic - row.parts.mass + row.parts.history;
        potential_rate[m] = 0.5 * row.parts.potential;
    }

    double L = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        if (m > 0)
            L += 0.5 * dt * (potential_rate[m - 1] + potential_rate[m]);
        rows[m].L = L;
    }

    std::vector<double> J(n);
    for (std::size_t m = 0; m < n; ++m)
        J[m] = rows[m].J;
    std::vector<double> dJ;
    std::vector<double> d2J;
    differentiate(J, dt, dJ, d2J);
    for (std::size_t m = 0; m < n; ++m) {
        rows[m].dJ = dJ[m];
        rows[m].d2J = d2J[m];
        rows[m].lemma1_residual = nan;
    }

    for (std::size_t m = 2; m + 1 < n; ++m) {
        const double t = traj.tau(m);
        const double a = alpha.value(t);
        const double ap = alpha.derivative(t);
        const HistorySums& here = sums[m];
        const HistorySums& before = sums[m - 1];
        const HistorySums& after = sums[m + 1];
        Lemma1Terms terms;
        terms.lhs = a * here.lhs_inner;
        terms.rhs[0] = 0.5 * (alpha.value(t + dt) * after.S1 - alpha.value(t - dt) * before.S1) / (2.0 * dt);
        terms.rhs[1] = -0.5 *
                       (alpha.value(t + dt) * after.G * after.W - alpha.value(t - dt) * before.G * before.W) /
                       (2.0 * dt);
        terms.rhs[2] = -0.5 * a * here.S2;
        terms.rhs[3] = 0.5 * a * here.Gp * here.W;
        terms.rhs[4] = -0.5 * ap * here.S1;
        terms.rhs[5] = 0.5 * ap * here.G * here.W;
        rows[m].lemma1_residual = terms.residual();
    }
    return rows;
}

DiagnosticSeries subsample(const DiagnosticSeries& full, int every)
{
    if (every <= 1)
        return full;
    DiagnosticSeries out;
    for (std::size_t m = 0; m < full.size(); ++m)
        if (m % static_cast<std::size_t>(every) == 0 || m + 1 == full.size())
            out.push_back(full[m]);
    return out;
}

} // namespace efviz
