#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <vector>

namespace hrsurf::quad {

/// Nodes and weights on [−1, 1].
struct Rule {
    std::vector<double> x;
    std::vector<double> w;

    template <class F>
    double apply(F &&f, double a, double b) const {
        double half = 0.5 * (b - a);
        double mid = 0.5 * (a + b);
        double sum = 0.0;
        for (size_t i = 0; i < x.size(); i++) {
            sum += w[i] * f(mid + half * x[i]);
        }
        return half * sum;
    }
};

namespace detail {
template <class Abscissa, class Weights>
Rule symmetric_rule(const Abscissa &abscissa, const Weights &weights) {
    Rule rule;
    bool has_center = abscissa[0] == 0.0;
    for (size_t i = abscissa.size(); i-- > 0;) {
        if (i == 0 && has_center) {
            continue;
        }
        rule.x.push_back(-abscissa[i]);
        rule.w.push_back(weights[i]);
    }
    for (size_t i = 0; i < abscissa.size(); i++) {
        rule.x.push_back(abscissa[i]);
        rule.w.push_back(weights[i]);
    }
    return rule;
}
}  // namespace detail

inline const Rule &kronrod15() {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    static const Rule rule = detail::symmetric_rule(GK::abscissa(), GK::weights());
    return rule;
}

inline const Rule &gauss7() {
    using G = boost::math::quadrature::gauss<double, 7>;
    static const Rule rule = detail::symmetric_rule(G::abscissa(), G::weights());
    return rule;
}

namespace detail {
/// G7 weights laid out on the K15 nodes (zero where the node is Kronrod-only).
inline const std::vector<double> &embedded_gauss_weights() {
    static const std::vector<double> gw = [] {
        const auto &k = kronrod15();
        const auto &g = gauss7();
        std::vector<double> out(k.x.size(), 0.0);
        for (size_t i = 0; i < k.x.size(); i++) {
            for (size_t j = 0; j < g.x.size(); j++) {
                if (std::abs(k.x[i] - g.x[j]) < 1e-14) out[i] = g.w[j];
            }
        }
        return out;
    }();
    return gw;
}

template <class F>
double adapt(F &f, double a, double b, double &whole, double tol, int depth, double &err, int &budget) {
    const auto &k15 = kronrod15();
    const auto &gw = embedded_gauss_weights();
    double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double k = 0.0, g = 0.0, l1 = 0.0;
    for (size_t i = 0; i < k15.x.size(); i++) {
        double v = f(mid + half * k15.x[i]);
        k += k15.w[i] * v;
        g += gw[i] * v;
        l1 += k15.w[i] * std::abs(v);
    }
    k *= half;
    g *= half;
    if (whole < 0.0) whole = std::abs(half) * l1;
    double e = std::abs(k - g);
    // Below ~100 ulps of the whole integral the difference is roundoff, not truncation.
    // The budget caps total panels when noise keeps the estimate from settling.
    if (e <= std::max(tol * std::abs(k), 100 * std::numeric_limits<double>::epsilon() * whole) || depth == 0 ||
        --budget <= 0) {
        err += e;
        return k;
    }
    return adapt(f, a, mid, whole, tol, depth - 1, err, budget) + adapt(f, mid, b, whole, tol, depth - 1, err, budget);
}
}  // namespace detail

/// Adaptive Gauss–Kronrod (15/7) integral of f over a finite [a, b].
template <class F>
double integrate(F &&f, double a, double b, double tol = 1e-13, double *error = nullptr) {
    if (a == b) {
        if (error) {
            *error = 0.0;
        }
        return 0.0;
    }
    if (a > b) {
        return -integrate(f, b, a, tol, error);
    }
    double whole = -1.0;
    double err = 0.0;
    int budget = 2000;
    double value = detail::adapt(f, a, b, whole, tol, 30, err, budget);
    if (error) {
        *error = err;
    }
    return value;
}

}  // namespace hrsurf::quad
