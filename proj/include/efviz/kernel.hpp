#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace efviz {

/// One term a * exp(-b s) of an exponential-sum (Prony) kernel.
struct ExpTerm {
    double amplitude;
    double rate;
};

enum class KernelFamily { exponential_sum, tabulated };

enum class KernelViolation {
    nonpositive_at_zero, ///< mu(0) <= 0 for a kernel that is not identically zero
    negative_value,      ///< some amplitude or sample is negative
    increasing,          ///< samples are not nonincreasing
    divergent,           ///< int e^{s/2} mu(s) ds diverges (some rate <= 1/2)
    mass_too_large,      ///< l = 1 - int_0^inf e^{s/2} mu(s) ds <= 0
    malformed,           ///< table shape problems (sizes, abscissae)
};

std::string to_string(KernelViolation v);

/// Raised when a kernel fails the admissibility conditions at construction.
class AdmissibilityError : public std::invalid_argument {
public:
    AdmissibilityError(KernelViolation clause, const std::string& detail);
    KernelViolation clause() const noexcept { return clause_; }

private:
    KernelViolation clause_;
};

/// Relaxation kernel mu(s), s >= 0.
///
/// Instances are validated on construction: mu(0) > 0 (unless the kernel is
/// identically zero), mu nonincreasing, and
///     l = 1 - int_0^inf e^{s/2} mu(s) ds > 0.
/// Tabulated kernels interpolate linearly and are zero past the last sample.
/// Immutable after construction.
class RelaxationKernel {
public:
    /// The null kernel, mu == 0 (l = 1).
    RelaxationKernel();

    static RelaxationKernel exponential_sum(std::vector<ExpTerm> terms);
    static RelaxationKernel tabulated(std::vector<double> s, std::vector<double> mu);

    KernelFamily family() const noexcept { return family_; }
    bool is_null() const noexcept { return null_; }
    const std::vector<ExpTerm>& terms() const noexcept { return terms_; }
    const std::vector<double>& sample_times() const noexcept { return s_; }
    const std::vector<double>& sample_values() const noexcept { return mu_; }

    /// mu(s). Throws std::domain_error for s < 0.
    double operator()(double s) const;

    /// d mu / ds; one-sided (right) slope at table nodes, 0 past the table.
    double derivative(double s) const;

    /// int_0^tau e^{s/2} mu(s) ds.
    double weighted_mass(double tau) const;

    /// int_0^tau e^{-s/2} mu(s) ds, the mass of the kernel e^{-s/2} mu(s)
    /// that the transformed equation actually convolves against.
    double damped_mass(double tau) const;

    /// l = 1 - int_0^inf e^{s/2} mu(s) ds.
    double admissibility() const noexcept { return l_; }

    /// True when e^{s/2} mu(s) increases somewhere. Only possible for tables.
    bool weighted_kernel_increasing() const noexcept { return weighted_increasing_; }

private:
    void validate();
    double segment_integral(double tau, double sign) const;

    KernelFamily family_ = KernelFamily::exponential_sum;
    std::vector<ExpTerm> terms_;
    std::vector<double> s_;
    std::vector<double> mu_;
    bool null_ = true;
    double l_ = 1.0;
    bool weighted_increasing_ = false;
};

double eval_kernel(const RelaxationKernel& kernel, double s);
double weighted_mass(const RelaxationKernel& kernel, double tau);

/// Re-checks a kernel and returns its admissibility constant l.
double check_admissible(const RelaxationKernel& kernel);

} // namespace efviz
