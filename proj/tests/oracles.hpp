#pragma once

// Independent reference computations used only by the tests.

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <functional>
#include <vector>

#include "hrsurf/symfun.hpp"

namespace oracle {

/// e_r by summing over every r-subset of the expanded list.
inline double brute_elem_sym(const std::vector<double> &values, int r) {
    int n = static_cast<int>(values.size());
    if (r == 0) return 1.0;
    if (r > n) return 0.0;
    double total = 0.0;
    for (unsigned mask = 0; mask < (1u << n); mask++) {
        if (__builtin_popcount(mask) != r) continue;
        double prod = 1.0;
        for (int i = 0; i < n; i++) {
            if (mask & (1u << i)) prod *= values[i];
        }
        total += prod;
    }
    return total;
}

inline std::vector<double> expand(const hrsurf::CurvatureSpectrum &spectrum) {
    std::vector<double> out;
    for (const auto &e : spectrum.entries()) {
        for (int k = 0; k < e.multiplicity; k++) out.push_back(e.value);
    }
    return out;
}

/// Fixed-step classical RK4 for τ′ = a(s)τ + b(s) from (s0, τ0) to s1.
inline double rk4(const std::function<double(double)> &a, const std::function<double(double)> &b, double s0,
                  double tau0, double s1, double h = 1e-4) {
    auto f = [&](double s, double t) { return a(s) * t + b(s); };
    int steps = static_cast<int>(std::ceil(std::abs(s1 - s0) / h));
    double dh = (s1 - s0) / steps;
    double s = s0, t = tau0;
    for (int i = 0; i < steps; i++) {
        double k1 = f(s, t);
        double k2 = f(s + dh / 2, t + dh / 2 * k1);
        double k3 = f(s + dh / 2, t + dh / 2 * k2);
        double k4 = f(s + dh, t + dh * k3);
        t += dh / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        s = s0 + (i + 1) * dh;
    }
    return t;
}

/// Tanh-sinh quadrature, a different rule family from the library's Gauss–Kronrod.
inline double integrate(const std::function<double(double)> &f, double a, double b) {
    if (a == b) return 0.0;
    if (a > b) return -integrate(f, b, a);
    static boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate(f, a, b, 1e-14);
}

/// Fourth-order central difference.
inline double derivative(const std::function<double(double)> &f, double s, double h) {
    return (-f(s + 2 * h) + 8 * f(s + h) - 8 * f(s - h) + f(s - 2 * h)) / (12 * h);
}

/// Fourth-order one-sided difference; h < 0 looks to the left.
inline double derivative_one_sided(const std::function<double(double)> &f, double s, double h) {
    return (-25 * f(s) + 48 * f(s + h) - 36 * f(s + 2 * h) + 16 * f(s + 3 * h) - 3 * f(s + 4 * h)) / (12 * h);
}

/// n Chebyshev points of the first kind mapped to (lo, hi).
inline std::vector<double> chebyshev(double lo, double hi, int n) {
    std::vector<double> out;
    for (int k = 0; k < n; k++) {
        double x = std::cos(M_PI * (2 * k + 1) / (2.0 * n));
        out.push_back(0.5 * (lo + hi) + 0.5 * (hi - lo) * x);
    }
    return out;
}

}  // namespace oracle
