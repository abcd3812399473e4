#pragma once

#include <span>
#include <vector>

#include "efviz/grid.hpp"
#include "efviz/kernel.hpp"

namespace efviz {

/// Which kernel the memory integral convolves against.
///   damped: e^{-sigma/2} mu(sigma), the transformed (w-form) equation, i.e.
///           e^{-tau/2} int_0^tau e^{s/2} mu(tau - s) w_xx(s) ds
///   plain:  mu(sigma), the v-form equation int_0^tau mu(tau - s) v_xx(s) ds
enum class MemoryWeight { damped, plain };

double memory_kernel(const RelaxationKernel& kernel, MemoryWeight weight, double sigma);

/// Snapshots (tau_k, u_x(tau_k), u_xx(tau_k)) at tau_k = k * dt.
class HistoryStore {
public:
    HistoryStore(double dt, int n);

    /// Appends the snapshot for tau. Throws std::logic_error unless
    /// tau == size() * dt (no gaps, no repeats).
    void append(double tau, std::vector<double> grad, Field lap);

    std::size_t size() const noexcept { return lap_.size(); }
    bool empty() const noexcept { return lap_.empty(); }
    double dt() const noexcept { return dt_; }
    int n() const noexcept { return n_; }
    double tau(std::size_t k) const noexcept { return static_cast<double>(k) * dt_; }
    double last_tau() const;
    const std::vector<double>& grad(std::size_t k) const { return grad_.at(k); }
    const Field& lap(std::size_t k) const { return lap_.at(k); }

    /// Index of the snapshot at tau; throws std::logic_error when tau is not on
    /// the stored grid.
    std::size_t index_of(double tau) const;

private:
    double dt_;
    int n_;
    std::vector<std::vector<double>> grad_;
    std::vector<Field> lap_;
};

/// Trapezoid weights for a uniform grid with m+1 points on [0, m*dt].
double trapezoid_weight(std::size_t k, std::size_t m, double dt) noexcept;

/// Full-history evaluation of int_0^tau K(tau - s) u_xx(s) ds by composite
/// trapezoid over the stored snapshots 0..index_of(tau).
Field memory_convolution(const HistoryStore& history, const RelaxationKernel& kernel, double tau,
                         MemoryWeight weight = MemoryWeight::damped);

/// O(1)-per-step recurrence for exponential-sum kernels. Each mode
/// y_i(tau) = int_0^tau a_i e^{-beta_i (tau - s)} u_xx(s) ds is advanced by
///     y_i(tau + dt) = e^{-beta_i dt} y_i(tau)
///                     + dt/2 a_i (e^{-beta_i dt} u_xx(tau) + u_xx(tau + dt)),
/// which reproduces the full-history trapezoid sum exactly.
class ModalMemory {
public:
    ModalMemory(const RelaxationKernel& kernel, MemoryWeight weight, double dt, int n);

    /// Feeds the next snapshot (the first call corresponds to tau = 0).
    void push(std::span<const double> lap);

    /// Current value of the memory integral at the last pushed time.
    Field value() const;

    std::size_t steps() const noexcept { return pushed_; }
    std::size_t modes() const noexcept { return amp_.size(); }
    const Field& mode(std::size_t i) const { return y_.at(i); }

private:
    std::vector<double> amp_;
    std::vector<double> decay_;
    double dt_;
    int n_;
    std::vector<Field> y_;
    Field last_lap_;
    std::size_t pushed_ = 0;
};

} // namespace efviz
