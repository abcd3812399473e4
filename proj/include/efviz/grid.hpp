#pragma once

#include <span>
#include <vector>

namespace efviz {

/// Nodal values at the interior nodes of a Grid1D. Boundary values are
/// implicitly zero (homogeneous Dirichlet).
using Field = std::vector<double>;

/// Uniform mesh on (r1, r2) with n interior nodes x_i = r1 + (i+1) dx,
/// i = 0..n-1, and dx = (r2 - r1) / (n + 1).
class Grid1D {
public:
    Grid1D(double r1, double r2, int n);

    double r1() const noexcept { return r1_; }
    double r2() const noexcept { return r2_; }
    int n() const noexcept { return n_; }
    double dx() const noexcept { return dx_; }
    double length() const noexcept { return r2_ - r1_; }
    double node(int i) const noexcept { return r1_ + (i + 1) * dx_; }
    std::vector<double> nodes() const;

    /// 0 < r2 - r1 <= 1, the interval-width hypothesis of the blow-up theorems.
    bool narrow() const noexcept { return length() > 0.0 && length() <= 1.0; }

    /// Grid with dx halved: n -> 2n + 1. Every coarse node i maps to fine
    /// node 2i + 1.
    Grid1D refined() const { return Grid1D(r1_, r2_, 2 * n_ + 1); }

private:
    double r1_;
    double r2_;
    int n_;
    double dx_;
};

/// 3-point central second difference with zero Dirichlet ghosts.
Field second_derivative(std::span<const double> f, const Grid1D& g);

/// Forward differences on the n + 1 cell faces, boundary zeros included.
/// Face j sits between nodes j-1 and j.
std::vector<double> gradient(std::span<const double> f, const Grid1D& g);

/// Composite trapezoid over [r1, r2] with zero boundary values.
double integrate(std::span<const double> f, const Grid1D& g);

/// Trapezoid with explicit boundary values, for fields that do not vanish at
/// the endpoints.
double integrate_with_boundary(std::span<const double> f, const Grid1D& g, double left, double right);

/// Midpoint sum over face values (gradient quantities).
double integrate_faces(std::span<const double> faces, const Grid1D& g);

/// (int |f|^q dx)^{1/q}, trapezoid, q >= 1.
double lp_norm(std::span<const double> f, const Grid1D& g, double q);

/// int |f|^q dx without the outer root.
double integrate_abs_pow(std::span<const double> f, const Grid1D& g, double q);

double sup_norm(std::span<const double> f) noexcept;

bool all_finite(std::span<const double> f) noexcept;

} // namespace efviz
