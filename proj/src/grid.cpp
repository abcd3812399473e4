#include "efviz/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace efviz {

Grid1D::Grid1D(double r1, double r2, int n) : r1_(r1), r2_(r2), n_(n), dx_(0.0)
{
    if (!std::isfinite(r1) || !std::isfinite(r2) || !(r2 > r1))
        throw std::invalid_argument("grid requires finite r1 < r2");
    if (n < 3)
        throw std::invalid_argument("grid requires at least 3 interior nodes");
    dx_ = (r2 - r1) / (n + 1);
}

std::vector<double> Grid1D::nodes() const
{
    std::vector<double> x(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i)
        x[static_cast<std::size_t>(i)] = node(i);
    return x;
}

Field second_derivative(std::span<const double> f, const Grid1D& g)
{
    const std::size_t n = f.size();
    Field out(n);
    const double inv = 1.0 / (g.dx() * g.dx());
    for (std::size_t i = 0; i < n; ++i) {
        const double left = i > 0 ? f[i - 1] : 0.0;
        const double right = i + 1 < n ? f[i + 1] : 0.0;
        out[i] = (left - 2.0 * f[i] + right) * inv;
    }
    return out;
}

std::vector<double> gradient(std::span<const double> f, const Grid1D& g)
{
    const std::size_t n = f.size();
    std::vector<double> out(n + 1);
    const double inv = 1.0 / g.dx();
    for (std::size_t j = 0; j <= n; ++j) {
        const double left = j > 0 ? f[j - 1] : 0.0;
        const double right = j < n ? f[j] : 0.0;
        out[j] = (right - left) * inv;
    }
    return out;
}

double integrate(std::span<const double> f, const Grid1D& g)
{
    double s = 0.0;
    for (double v : f)
        s += v;
    return s * g.dx();
}

double integrate_with_boundary(std::span<const double> f, const Grid1D& g, double left, double right)
{
    return integrate(f, g) + 0.5 * g.dx() * (left + right);
}

double integrate_faces(std::span<const double> faces, const Grid1D& g)
{
    double s = 0.0;
    for (double v : faces)
        s += v;
    return s * g.dx();
}

double integrate_abs_pow(std::span<const double> f, const Grid1D& g, double q)
{
    double s = 0.0;
    if (q == 2.0) {
        for (double v : f)
            s += v * v;
    } else {
        for (double v : f)
            s += std::pow(std::abs(v), q);
    }
    return s * g.dx();
}

double lp_norm(std::span<const double> f, const Grid1D& g, double q)
{
    if (!(q >= 1.0))
        throw std::invalid_argument("lp_norm requires q >= 1");
    return std::pow(integrate_abs_pow(f, g, q), 1.0 / q);
}

double sup_norm(std::span<const double> f) noexcept
{
    double m = 0.0;
    for (double v : f) {
        const double a = std::abs(v);
        if (a > m || std::isnan(a))
            m = a;
    }
    return m;
}

bool all_finite(std::span<const double> f) noexcept
{
    for (double v : f)
        if (!std::isfinite(v))
            return false;
    return true;
}

} // namespace efviz
