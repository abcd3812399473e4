#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

// Adaptive Simpson on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-12, int depth = 40)
{
    const auto rule = [&](double l, double r, double fl, double fm, double fr) {
        return (r - l) / 6.0 * (fl + 4.0 * fm + fr);
    };
    std::function<double(double, double, double, double, double, double, double, int)> rec =
        [&](double l, double r, double fl, double fm, double fr, double whole, double eps, int d) {
            const double m = 0.5 * (l + r);
            const double lm = 0.5 * (l + m);
            const double rm = 0.5 * (m + r);
            const double flm = f(lm);
            const double frm = f(rm);
            const double left = rule(l, m, fl, flm, fm);
            const double right = rule(m, r, fm, frm, fr);
            if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps)
                return left + right + (left + right - whole) / 15.0;
            return rec(l, m, fl, flm, fm, left, eps / 2, d - 1) + rec(m, r, fm, frm, fr, right, eps / 2, d - 1);
        };
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    return rec(a, b, fa, fm, fb, rule(a, b, fa, fm, fb), tol, depth);
}

// Interior nodes of an n-node Dirichlet grid on (r1, r2).
inline std::vector<double> nodes(double r1, double r2, int n)
{
    std::vector<double> x(n);
    const double dx = (r2 - r1) / (n + 1);
    for (int i = 0; i < n; ++i)
        x[i] = r1 + (i + 1) * dx;
    return x;
}

inline std::vector<double> sample(const std::function<double(double)>& f, double r1, double r2, int n)
{
    std::vector<double> out;
    for (double x : nodes(r1, r2, n))
        out.push_back(f(x));
    return out;
}

// Deterministic generator for property tests.
struct Gen {
    std::mt19937_64 rng;
    explicit Gen(unsigned long long seed) : rng(seed) {}
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }
};

} // namespace oracle
