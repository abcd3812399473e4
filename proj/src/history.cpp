#include "efviz/history.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace efviz {

double memory_kernel(const RelaxationKernel& kernel, MemoryWeight weight, double sigma)
{
    const double mu = kernel(sigma);
    return weight == MemoryWeight::damped ? std::exp(-0.5 * sigma) * mu : mu;
}

HistoryStore::HistoryStore(double dt, int n) : dt_(dt), n_(n)
{
    if (!(dt > 0.0))
        throw std::invalid_argument("history spacing must be positive");
}

void HistoryStore::append(double tau, std::vector<double> grad, Field lap)
{
    const double expected = static_cast<double>(lap_.size()) * dt_;
    if (std::abs(tau - expected) > 1e-9 * dt_ + 1e-12 * std::abs(expected))
        throw std::logic_error("history gap: expected snapshot at tau=" + std::to_string(expected) +
                               ", got " + std::to_string(tau));
    if (lap.size() != static_cast<std::size_t>(n_) || grad.size() != static_cast<std::size_t>(n_) + 1)
        throw std::logic_error("history snapshot has wrong length");
    grad_.push_back(std::move(grad));
    lap_.push_back(std::move(lap));
}

double HistoryStore::last_tau() const
{
    if (lap_.empty())
        throw std::logic_error("empty history");
    return tau(lap_.size() - 1);
}

std::size_t HistoryStore::index_of(double tau) const
{
    const double k = std::round(tau / dt_);
    if (k < 0.0 || std::abs(tau - k * dt_) > 1e-9 * dt_ + 1e-12 * std::abs(tau))
        throw std::logic_error("history gap: tau=" + std::to_string(tau) + " is not a snapshot time");
    const auto idx = static_cast<std::size_t>(k);
    if (idx >= lap_.size())
        throw std::logic_error("history gap: no snapshot at tau=" + std::to_string(tau));
    return idx;
}

double trapezoid_weight(std::size_t k, std::size_t m, double dt) noexcept
{
    if (m == 0)
        return 0.0;
    return (k == 0 || k == m) ? 0.5 * dt : dt;
}

Field memory_convolution(const HistoryStore& history, const RelaxationKernel& kernel, double tau,
                         MemoryWeight weight)
{
    const std::size_t m = history.index_of(tau);
    Field out(static_cast<std::size_t>(history.n()), 0.0);
    if (m == 0 || kernel.is_null())
        return out;
    for (std::size_t k = 0; k <= m; ++k) {
        const double c = trapezoid_weight(k, m, history.dt()) *
                         memory_kernel(kernel, weight, history.tau(m) - history.tau(k));
        const Field& lap = history.lap(k);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += c * lap[i];
    }
    return out;
}

ModalMemory::ModalMemory(const RelaxationKernel& kernel, MemoryWeight weight, double dt, int n)
    : dt_(dt), n_(n)
{
    if (kernel.family() != KernelFamily::exponential_sum)
        throw std::invalid_argument("modal memory requires an exponential-sum kernel");
    for (const auto& t : kernel.terms()) {
        if (t.amplitude == 0.0)
            continue;
        amp_.push_back(t.amplitude);
        decay_.push_back(weight == MemoryWeight::damped ? t.rate + 0.5 : t.rate);
    }
    y_.assign(amp_.size(), Field(static_cast<std::size_t>(n), 0.0));
}

void ModalMemory::push(std::span<const double> lap)
{
    if (lap.size() != static_cast<std::size_t>(n_))
        throw std::logic_error("modal memory snapshot has wrong length");
    if (pushed_ > 0) {
        for (std::size_t i = 0; i < amp_.size(); ++i) {
            const double decay = std::exp(-decay_[i] * dt_);
            const double h = 0.5 * dt_ * amp_[i];
            Field& y = y_[i];
            for (std::size_t j = 0; j < y.size(); ++j)
                y[j] = decay * y[j] + h * (decay * last_lap_[j] + lap[j]);
        }
    }
    last_lap_.assign(lap.begin(), lap.end());
    ++pushed_;
}

Field ModalMemory::value() const
{
    Field out(static_cast<std::size_t>(n_), 0.0);
    for (const auto& y : y_)
        for (std::size_t j = 0; j < out.size(); ++j)
            out[j] += y[j];
    return out;
}

} // namespace efviz
