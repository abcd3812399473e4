#include "efviz/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace efviz {

namespace {

bool use_recurrence(const ScenarioConfig& cfg)
{
    switch (cfg.memory) {
    case MemoryPath::recurrence: return true;
    case MemoryPath::full_history: return false;
    case MemoryPath::automatic: return cfg.kernel.family() == KernelFamily::exponential_sum;
    }
    return false;
}

MemoryWeight weight_for(Form form) { return form == Form::w_form ? MemoryWeight::damped : MemoryWeight::plain; }

// Right-hand side of u_tt = R(u) without the memory term and, for the v-form,
// without the first-order v_tau term (handled by the stencil).
Field reaction(const ScenarioConfig& cfg, std::span<const double> f, std::span<const double> lap, double tau)
{
    Field r(lap.begin(), lap.end());
    if (cfg.form == Form::w_form) {
        const double growth = std::exp(0.5 * (cfg.p - 1.0) * tau);
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (cfg.model.mass_term)
                r[i] += 0.25 * f[i];
            if (cfg.model.nonlinear)
                r[i] += growth * power(f[i], cfg.p, cfg.power_mode);
        }
        if (cfg.manufactured.enabled) {
            const Field s = manufactured_source(cfg, tau);
            for (std::size_t i = 0; i < r.size(); ++i)
                r[i] += s[i];
        }
    } else if (cfg.model.nonlinear) {
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] += power(f[i], cfg.p, cfg.power_mode);
    }
    return r;
}

} // namespace

std::string to_string(Termination t)
{
    switch (t) {
    case Termination::horizon_reached: return "horizon_reached";
    case Termination::blowup_detected: return "blowup_detected";
    case Termination::nan_detected: return "nan_detected";
    }
    return "unknown";
}

Field manufactured_solution(const ScenarioConfig& cfg, double tau)
{
    return InitialProfile::sine(cfg.manufactured.amplitude * std::cos(tau)).evaluate(cfg.grid);
}

Field manufactured_source(const ScenarioConfig& cfg, double tau)
{
    const double k = std::numbers::pi / cfg.grid.length();
    const double a = cfg.manufactured.amplitude;
    // int_0^tau a_i e^{-beta_i (tau-s)} cos(s) ds, beta_i = b_i + 1/2
    double memory = 0.0;
    for (const auto& t : cfg.kernel.terms()) {
        const double beta = t.rate + 0.5;
        memory += t.amplitude * (beta * std::cos(tau) + std::sin(tau) - beta * std::exp(-beta * tau)) /
                  (beta * beta + 1.0);
    }
    const double growth = std::exp(0.5 * (cfg.p - 1.0) * tau);
    const auto n = static_cast<std::size_t>(cfg.grid.n());
    Field s(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double phase = std::sin(k * (cfg.grid.node(static_cast<int>(i)) - cfg.grid.r1()));
        const double w = a * std::cos(tau) * phase;
        double v = -w + k * k * w - k * k * a * phase * memory;
        if (cfg.model.mass_term)
            v -= 0.25 * w;
        if (cfg.model.nonlinear)
            v -= growth * power(w, cfg.p, cfg.power_mode);
        s[i] = v;
    }
    return s;
}

RunState initialize(const ScenarioConfig& cfg)
{
    const double dt = cfg.time_step();
    auto [u0, u1] = initial_data(cfg);

    RunState st{0, 0.0, dt, {}, {}, HistoryStore(dt, cfg.grid.n()), std::nullopt};
    if (use_recurrence(cfg))
        st.modal.emplace(cfg.kernel, weight_for(cfg.form), dt, cfg.grid.n());

    Field velocity = u1;
    if (cfg.form == Form::w_form)
        for (std::size_t i = 0; i < velocity.size(); ++i)
            velocity[i] = u1[i] - 0.5 * u0[i];

    const Field lap0 = second_derivative(u0, cfg.grid);
    Field accel = reaction(cfg, u0, lap0, 0.0);
    if (cfg.form == Form::v_form)
        for (std::size_t i = 0; i < accel.size(); ++i)
            accel[i] += velocity[i];

    Field u_first(u0.size());
    for (std::size_t i = 0; i < u0.size(); ++i)
        u_first[i] = u0[i] + dt * velocity[i] + 0.5 * dt * dt * accel[i];

    st.history.append(0.0, gradient(u0, cfg.grid), lap0);
    if (st.modal)
        st.modal->push(lap0);
    if (all_finite(u_first)) {
        Field lap1 = second_derivative(u_first, cfg.grid);
        if (st.modal)
            st.modal->push(lap1);
        st.history.append(dt, gradient(u_first, cfg.grid), std::move(lap1));
    }
    st.prev = std::move(u0);
    st.curr = std::move(u_first);
    st.step = 1;
    st.tau = dt;
    return st;
}

Field current_memory(const RunState& state, const ScenarioConfig& cfg)
{
    if (state.modal)
        return state.modal->value();
    return memory_convolution(state.history, cfg.kernel, state.tau, weight_for(cfg.form));
}

bool step(RunState& state, const ScenarioConfig& cfg)
{
    const double dt = state.dt;
    const Field memory = current_memory(state, cfg);
    const Field& lap = state.history.lap(state.step);
    const Field r = reaction(cfg, state.curr, lap, state.tau);

    Field next(state.curr.size());
    if (cfg.form == Form::w_form) {
        for (std::size_t i = 0; i < next.size(); ++i)
            next[i] = 2.0 * state.curr[i] - state.prev[i] + dt * dt * (r[i] - memory[i]);
    } else {
        // (v+ - 2v + v-)/dt^2 - (v+ - v-)/(2dt) = R - M
        const double lo = 1.0 - 0.5 * dt;
        const double hi = 1.0 + 0.5 * dt;
        for (std::size_t i = 0; i < next.size(); ++i)
            next[i] = (2.0 * state.curr[i] - hi * state.prev[i] + dt * dt * (r[i] - memory[i])) / lo;
    }
    if (!all_finite(next))
        return false;

    const double tau_next = static_cast<double>(state.step + 1) * dt;
    Field lap_next = second_derivative(next, cfg.grid);
    if (state.modal)
        state.modal->push(lap_next);
    state.history.append(tau_next, gradient(next, cfg.grid), std::move(lap_next));
    state.prev = std::move(state.curr);
    state.curr = std::move(next);
    ++state.step;
    state.tau = tau_next;
    return true;
}

namespace {

Trajectory to_trajectory(const ScenarioConfig& cfg, std::vector<Field> frames, HistoryStore history)
{
    Trajectory traj;
    traj.grid = cfg.grid;
    traj.dt = cfg.time_step();
    traj.p = cfg.p;
    traj.power_mode = cfg.power_mode;
    traj.model = cfg.model;
    traj.forced = cfg.manufactured.enabled;
    auto [u0, u1] = initial_data(cfg);
    traj.initial_velocity = u1;
    for (std::size_t i = 0; i < u1.size(); ++i)
        traj.initial_velocity[i] = u1[i] - 0.5 * u0[i];

    if (cfg.form == Form::w_form) {
        traj.frames = std::move(frames);
        traj.history = std::move(history);
        return traj;
    }
    traj.history = HistoryStore(traj.dt, cfg.grid.n());
    for (std::size_t m = 0; m < frames.size(); ++m) {
        const double tau = traj.tau(m);
        const double scale = std::exp(-0.5 * tau);
        for (double& v : frames[m])
            v *= scale;
        traj.history.append(tau, gradient(frames[m], cfg.grid), second_derivative(frames[m], cfg.grid));
    }
    traj.frames = std::move(frames);
    return traj;
}

} // namespace

RunResult run(const ScenarioConfig& cfg)
{
    cfg.validate();
    const double dt = cfg.time_step();
    const auto total_steps = static_cast<std::size_t>(std::max(1.0, std::ceil(cfg.tau_max / dt - 1e-9)));
    const double threshold = cfg.blowup_threshold;

    RunResult result;
    result.config = cfg;

    RunState st = initialize(cfg);
    std::vector<Field> frames;
    frames.push_back(st.prev);
    result.sup_norms.push_back(sup_norm(st.prev));

    const auto crossing = [&](double s_before, double s_after, double tau_before) {
        if (!(s_before > 0.0) || !(s_after > s_before))
            return tau_before + dt;
        const double f = (std::log(threshold) - std::log(s_before)) / (std::log(s_after) - std::log(s_before));
        return tau_before + dt * std::clamp(f, 0.0, 1.0);
    };

    bool done = false;
    if (result.sup_norms.back() > threshold) {
        result.termination = Termination::blowup_detected;
        result.tau_b = 0.0;
        done = true;
    } else if (!all_finite(st.curr)) {
        result.termination = Termination::nan_detected;
        result.tau_b = dt;
        done = true;
    } else {
        frames.push_back(st.curr);
        result.sup_norms.push_back(sup_norm(st.curr));
        if (result.sup_norms.back() > threshold) {
            result.termination = Termination::blowup_detected;
            result.tau_b = crossing(result.sup_norms[0], result.sup_norms[1], 0.0);
            done = true;
        }
    }

    while (!done && st.step < total_steps) {
        const double tau_before = st.tau;
        if (!step(st, cfg)) {
            result.termination = Termination::nan_detected;
            result.tau_b = tau_before + dt;
            break;
        }
        const double s_before = result.sup_norms.back();
        frames.push_back(st.curr);
        result.sup_norms.push_back(sup_norm(st.curr));
        if (result.sup_norms.back() > threshold) {
            result.termination = Termination::blowup_detected;
            result.tau_b = crossing(s_before, result.sup_norms.back(), tau_before);
            break;
        }
    }

    result.tau_end = static_cast<double>(frames.size() - 1) * dt;
    // The history may hold one more snapshot than accepted frames only when the
    // Taylor start was non-finite; that case keeps just the initial frame.
    HistoryStore history = std::move(st.history);
    if (history.size() != frames.size()) {
        history = HistoryStore(dt, cfg.grid.n());
        for (std::size_t m = 0; m < frames.size(); ++m)
            history.append(static_cast<double>(m) * dt, gradient(frames[m], cfg.grid),
                           second_derivative(frames[m], cfg.grid));
    }
    result.trajectory = to_trajectory(cfg, std::move(frames), std::move(history));
    result.diagnostics = subsample(diagnose(result.trajectory, cfg.kernel), cfg.record_every);
    return result;
}

std::vector<Field> pullback_to_t(const RunResult& result, const std::vector<double>& t)
{
    const Trajectory& traj = result.trajectory;
    std::vector<Field> out;
    out.reserve(t.size());
    for (double ti : t) {
        if (!(ti >= 1.0))
            throw std::domain_error("pullback requires t >= 1");
        const double tau = std::log(ti);
        if (tau > result.tau_end * (1.0 + 1e-12) + 1e-14)
            throw std::domain_error("pullback time lies beyond the computed horizon");
        const double pos = tau / traj.dt;
        auto j = static_cast<std::size_t>(std::floor(pos));
        if (j + 1 >= traj.size())
            j = traj.size() >= 2 ? traj.size() - 2 : 0;
        const double f = traj.size() >= 2 ? std::clamp(pos - static_cast<double>(j), 0.0, 1.0) : 0.0;
        const double scale = std::sqrt(ti);
        const Field& a = traj.frames[j];
        const Field& b = traj.size() >= 2 ? traj.frames[j + 1] : a;
        Field u(a.size());
        for (std::size_t i = 0; i < u.size(); ++i)
            u[i] = scale * ((1.0 - f) * a[i] + f * b[i]);
        out.push_back(std::move(u));
    }
    return out;
}

} // namespace efviz
