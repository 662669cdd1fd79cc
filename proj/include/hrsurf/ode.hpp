#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hrsurf/ambient.hpp"
#include "hrsurf/error.hpp"
#include "hrsurf/quadrature.hpp"

namespace hrsurf {

enum class Provenance { ClosedForm, NumericIF };

enum class SolveMethod { Auto, Numeric };

namespace detail {

/// Piecewise integrating-factor propagation of τ′ = aτ + b.
///
/// Knots are laid out from the anchor outward. On a panel starting at knot x,
///   τ(y) = e^{A(y)} τ(x) + ∫_x^y b(u) e^{A(y)−A(u)} du,   A(t) = ∫_x^t a,
/// so the integrating factor is re-anchored at every knot and the exponents
/// stay bounded by the panel width times max|a|.
class PanelSolver {
   public:
    static constexpr double kMaxPanel = 0.5;
    static constexpr double kTol = 1e-13;

    PanelSolver(const OdeCoefficients &coeffs, double s0, double tau0, double lo, double hi)
        : coeffs_(coeffs), s0_(s0), tau0_(tau0) {
        build(hi, right_);
        build(lo, left_);
    }

    double operator()(double s) const {
        const auto &knots = s >= s0_ ? right_ : left_;
        // Knots run away from s0; pick the last one not beyond s.
        size_t k = 0;
        size_t lo = 0, hi = knots.size();
        while (hi - lo > 1) {
            size_t mid = (lo + hi) / 2;
            if (std::abs(knots[mid].s - s0_) <= std::abs(s - s0_)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        k = lo;
        return step(quad::kronrod15(), knots[k].s, knots[k].tau, s);
    }

   private:
    struct Knot {
        double s;
        double tau;
    };

    double step(const quad::Rule &rule, double x, double tau_x, double y) const {
        if (y == x) {
            return tau_x;
        }
        auto A = [&](double t) { return rule.apply([&](double v) { return coeffs_.a(v); }, x, t); };
        double Ay = A(y);
        double forced = 0.0;
        if (coeffs_.target_hr() != 0.0) {
            forced = rule.apply([&](double u) { return coeffs_.b(u) * std::exp(Ay - A(u)); }, x, y);
        }
        return std::exp(Ay) * tau_x + forced;
    }

    void build(double end, std::vector<Knot> &knots) {
        knots.push_back({s0_, tau0_});
        double dir = end >= s0_ ? 1.0 : -1.0;
        auto [dlo, dhi] = coeffs_.domain();
        double x = s0_;
        double tau = tau0_;
        double h = kMaxPanel;
        while (dir * (end - x) > 0.0) {
            double room = kInf;
            if (std::isfinite(dlo)) room = std::min(room, x - dlo);
            if (std::isfinite(dhi)) room = std::min(room, dhi - x);
            h = std::min({h, kMaxPanel, 0.5 * room});
            double y = x + dir * h;
            if (dir * (y - end) > 0.0 || std::abs(end - y) < 1e-3 * h) {
                y = end;
            }
            double fine = step(quad::kronrod15(), x, tau, y);
            double coarse = step(quad::gauss7(), x, tau, y);
            if (std::abs(fine - coarse) > kTol * std::max(1.0, std::abs(fine)) && h > 1e-14 * std::max(1.0, std::abs(x))) {
                h *= 0.5;
                continue;
            }
            knots.push_back({y, fine});
            x = y;
            tau = fine;
            h *= 1.6;
        }
    }

    OdeCoefficients coeffs_;
    double s0_;
    double tau0_;
    std::vector<Knot> right_;
    std::vector<Knot> left_;
};

/// Start value at s_ε for the regular solution: implicit Euler from τ(0) = 0
/// with 1, 2, 4, … steps, combined by Richardson extrapolation in the step size.
inline double regular_start(const OdeCoefficients &c, double eps) {
    auto euler = [&](int steps) {
        double h = eps / steps;
        double tau = 0.0;
        for (int k = 1; k <= steps; k++) {
            double s = k * h;
            tau = (tau + h * c.b(s)) / (1.0 - h * c.a(s));
        }
        return tau;
    };
    constexpr int kLevels = 8;
    double table[kLevels][kLevels];
    for (int i = 0; i < kLevels; i++) {
        table[i][0] = euler(1 << i);
        for (int j = 1; j <= i; j++) {
            double f = std::ldexp(1.0, j);
            table[i][j] = (f * table[i][j - 1] - table[i - 1][j - 1]) / (f - 1.0);
        }
    }
    return table[kLevels - 1][kLevels - 1];
}

}  // namespace detail

/// Solution τ of τ′ = a(s)τ + b(s) on a closed interval.
class TauSolution {
   public:
    using Evaluator = std::function<double(double)>;

    TauSolution(OdeCoefficients coeffs, double lo, double hi, Provenance provenance, std::string name,
                std::optional<std::pair<double, double>> initial, Evaluator eval)
        : coeffs_(std::move(coeffs)),
          lo_(lo),
          hi_(hi),
          provenance_(provenance),
          name_(std::move(name)),
          initial_(initial),
          eval_(std::move(eval)) {}

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    Provenance provenance() const { return provenance_; }
    /// Closed-form name, or "numeric-if".
    const std::string &method_name() const { return name_; }
    /// (s0, τ0), or empty for the regular-at-zero solution.
    const std::optional<std::pair<double, double>> &initial() const { return initial_; }
    bool regular_at_zero() const { return !initial_.has_value(); }
    const OdeCoefficients &coefficients() const { return coeffs_; }

    double eval(double s) const {
        double slack = 1e-12 * std::max(1.0, std::abs(s));
        if (s < lo_ - slack || s > hi_ + slack) {
            throw Error(ErrorKind::DomainExceeded, "s = " + std::to_string(s) + " outside solution interval [" +
                                                       std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
        }
        return eval_(std::clamp(s, lo_, hi_));
    }
    double operator()(double s) const { return eval(s); }

    /// τ′ from the equation itself.
    double deriv(double s) const { return coeffs_.a(s) * eval(s) + coeffs_.b(s); }

   private:
    OdeCoefficients coeffs_;
    double lo_;
    double hi_;
    Provenance provenance_;
    std::string name_;
    std::optional<std::pair<double, double>> initial_;
    Evaluator eval_;
};

namespace detail {

/// ∫_x^y sin^{n−1}u / cos^{r−1}u du on S^n. Above π/4 the integral runs in
/// v = π/2 − u on a log scale, which keeps the 1/cos^{r−1} end smooth.
inline double sn_power_integral(int n, int r, double x, double y) {
    if (y < x) {
        return -sn_power_integral(n, r, y, x);
    }
    auto lower = [=](double u) { return std::pow(std::sin(u), n - 1) / std::pow(std::cos(u), r - 1); };
    if (r == 1) {
        return quad::integrate(lower, x, y);
    }
    constexpr double quarter = std::numbers::pi / 4;
    // π/2 split into a double and its rounding error.
    constexpr double half_hi = std::numbers::pi / 2;
    constexpr double half_lo = 6.123233995736766e-17;
    double total = 0.0;
    if (x < quarter) {
        total += quad::integrate(lower, x, std::min(y, quarter));
    }
    if (y > quarter) {
        auto gap = [&](double u) { return (half_hi - u) + half_lo; };
        double t_lo = std::log(gap(y));
        double t_hi = std::log(gap(std::max(x, quarter)));
        total += quad::integrate(
            [=](double t) {
                double v = std::exp(t);
                return std::pow(std::cos(v), n - 1) / std::pow(std::sin(v), r - 1) * v;
            },
            t_lo, t_hi);
    }
    return total;
}

inline void check_interval(const OdeCoefficients &c, double lo, double hi) {
    auto [dlo, dhi] = c.domain();
    if (!(lo <= hi) || !(lo > dlo) || !(hi < dhi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw Error(ErrorKind::DomainExceeded, "interval [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                                   "] leaves the open domain (" + std::to_string(dlo) + ", " +
                                                   std::to_string(dhi) + ")");
    }
}

inline TauSolution numeric_initial(const OdeCoefficients &c, double s0, double tau0, double lo, double hi) {
    auto solver = std::make_shared<PanelSolver>(c, s0, tau0, lo, hi);
    return TauSolution(c, lo, hi, Provenance::NumericIF, "numeric-if", std::make_pair(s0, tau0),
                       [solver](double s) { return (*solver)(s); });
}

}  // namespace detail

/// Solution with τ(s0) = τ0 on [lo, hi]; closed forms are used where available
/// unless `method` forces the numeric integrating-factor route.
inline TauSolution solve_initial(const OdeCoefficients &c, double s0, double tau0, double lo, double hi,
                                 SolveMethod method = SolveMethod::Auto) {
    detail::check_interval(c, lo, hi);
    if (s0 < lo || s0 > hi) {
        throw Error(ErrorKind::DomainExceeded, "initial point outside the interval");
    }
    if (method == SolveMethod::Numeric) {
        return detail::numeric_initial(c, s0, tau0, lo, hi);
    }
    const int n = c.n();
    const int r = c.r();
    const double H = c.target_hr();
    const auto &family = c.family();
    auto closed = [&](std::string name, TauSolution::Evaluator f) {
        return TauSolution(c, lo, hi, Provenance::ClosedForm, std::move(name), std::make_pair(s0, tau0), std::move(f));
    };

    if (r == n && H == 0.0) {
        return closed("constant", [tau0](double) { return tau0; });
    }
    switch (family.kind()) {
        case FamilyKind::Horospheres: {
            double a = c.a(0.0);
            double b = c.b(0.0);
            if (a == 0.0) {
                return closed("linear", [=](double s) { return tau0 + b * (s - s0); });
            }
            return closed(b == 0.0 ? "horosphere-minimal" : "horosphere",
                          [=](double s) { return (tau0 + b / a) * std::exp(a * (s - s0)) - b / a; });
        }
        case FamilyKind::Equidistants:
            if (H == 0.0) {
                return closed("equidistant-minimal",
                              [=](double s) { return tau0 * std::pow(std::cosh(s0) / std::cosh(s), n - r); });
            }
            break;
        case FamilyKind::GeodesicSpheres:
            if (!family.space().is_hyperbolic()) {
                if (H == 0.0) {
                    return closed("sn-minimal",
                                  [=](double s) { return tau0 * std::pow(std::sin(s0) / std::sin(s), n - r); });
                }
                double br = c.b_r();
                return closed("sn-general", [=](double s) {
                    double integral = detail::sn_power_integral(n, r, s0, s);
                    return std::pow(std::sin(s0) / std::sin(s), n - r) * tau0 +
                           br * integral / std::pow(std::sin(s), n - r);
                });
            }
            if (H == 0.0) {
                return closed("catenoid", [c, s0, tau0](double s) {
                    return tau0 * std::exp(quad::integrate([&](double u) { return c.a(u); }, s0, s));
                });
            }
            break;
    }
    return detail::numeric_initial(c, s0, tau0, lo, hi);
}

/// Solution of a geodesic-sphere family that is regular at s = 0 (τ(0) = 0), on [0, hi].
inline TauSolution solve_regular_at_zero(const OdeCoefficients &c, double hi, SolveMethod method = SolveMethod::Auto) {
    if (c.family().kind() != FamilyKind::GeodesicSpheres) {
        throw Error(ErrorKind::UnsupportedCombination, "the regular-at-zero solution exists for geodesic spheres only");
    }
    detail::check_interval(c, 1e-300, hi);
    const int n = c.n();
    const int r = c.r();
    if (method == SolveMethod::Auto && !c.family().space().is_hyperbolic()) {
        double br = c.b_r();
        return TauSolution(c, 0.0, hi, Provenance::ClosedForm, "sn-regular", std::nullopt, [=](double s) {
            if (s == 0.0) {
                return 0.0;
            }
            double integral = detail::sn_power_integral(n, r, 0.0, s);
            return br * integral / std::pow(std::sin(s), n - r);
        });
    }
    constexpr double eps = 1e-8;
    double tau_eps = detail::regular_start(c, eps);
    auto solver = std::make_shared<detail::PanelSolver>(c, eps, tau_eps, eps, std::max(hi, eps));
    return TauSolution(c, 0.0, hi, Provenance::NumericIF, "numeric-if", std::nullopt, [solver, c, eps](double s) {
        if (s >= eps) {
            return (*solver)(s);
        }
        if (s <= 0.0) {
            return 0.0;
        }
        return s * c.b(s) / (1.0 - s * c.a(s));
    });
}

/// Limit of τ at the far end of the family domain (s → ∞ on ℍ_F^m spheres and
namespace detail {

/// Piecewise Chebyshev interpolant of a solution; each panel is checked against the solution at
/// off-node points and split until they agree to about 1e−14.
class DenseTau {
   public:
    static constexpr int kDegree = 24;

    DenseTau(const TauSolution &sol, double lo, double hi) {
        auto [dlo, dhi] = sol.coefficients().domain();
        double x = lo;
        while (x < hi) {
            double w = std::min(0.5, hi - x);
            if (std::isfinite(dhi)) w = std::min(w, 0.5 * (dhi - x));
            if (x == dlo) w = std::min(w, 0.25);  // regular start at the axis
            else if (std::isfinite(dlo)) w = std::min(w, 0.5 * (x - dlo));
            add(sol, x, std::min(x + w, hi), 0);
            x = panels_.back().b;
        }
    }

    double operator()(double s) const {
        size_t lo = 0, hi = panels_.size();
        while (hi - lo > 1) {
            size_t mid = (lo + hi) / 2;
            (panels_[mid].a <= s ? lo : hi) = mid;
        }
        return panels_[lo].eval(s);
    }

   private:
    struct Panel {
        double a, b;
        std::vector<double> v;

        double eval(double s) const {
            double t = (2.0 * s - a - b) / (b - a);
            double num = 0.0, den = 0.0;
            for (int j = 0; j <= kDegree; j++) {
                double x = std::cos(std::numbers::pi * j / kDegree);
                double diff = t - x;
                if (diff == 0.0) return v[j];
                double w = ((j % 2) ? -1.0 : 1.0) * ((j == 0 || j == kDegree) ? 0.5 : 1.0) / diff;
                num += w * v[j];
                den += w;
            }
            return num / den;
        }
    };

    void add(const TauSolution &sol, double a, double b, int depth) {
        Panel p{a, b, std::vector<double>(kDegree + 1)};
        for (int j = 0; j <= kDegree; j++) {
            double x = std::cos(std::numbers::pi * j / kDegree);
            p.v[j] = sol(0.5 * (a + b) + 0.5 * (b - a) * x);
        }
        bool ok = true;
        for (double t : {-0.93, -0.41, 0.17, 0.77}) {
            double s = 0.5 * (a + b) + 0.5 * (b - a) * t;
            double exact = sol(s);
            // Relative, since τ ~ s^r near the axis; plus the rounding of s itself, which dominates
            // near a singular end.
            double tol = 1e-14 * std::abs(exact) + 4e-16 * std::abs(s * sol.deriv(s)) + 1e-300;
            if (std::abs(p.eval(s) - exact) > tol) ok = false;
        }
        if (ok || depth >= 20) {
            panels_.push_back(std::move(p));
            return;
        }
        double mid = 0.5 * (a + b);
        add(sol, a, mid, depth + 1);
        add(sol, mid, b, depth + 1);
    }

    std::vector<Panel> panels_;
};

}  // namespace detail

/// The same solution restricted to [lo, hi] behind a fast interpolant.
inline TauSolution densify(const TauSolution &sol, double lo, double hi) {
    if (!(lo >= sol.lo() && hi <= sol.hi() && lo < hi)) {
        throw Error(ErrorKind::DomainExceeded, "densify interval must lie inside the solution interval");
    }
    auto dense = std::make_shared<detail::DenseTau>(sol, lo, hi);
    return TauSolution(sol.coefficients(), lo, hi, sol.provenance(), sol.method_name(), sol.initial(),
                       [dense](double s) { return (*dense)(s); });
}

/// equidistants, s → 𝓡 on S^n, s → −∞ on horospheres).
inline double tau_limit(const TauSolution &solution) {
    const auto &c = solution.coefficients();
    const int n = c.n();
    const int r = c.r();
    const double H = c.target_hr();
    const auto &family = c.family();
    switch (family.kind()) {
        case FamilyKind::GeodesicSpheres:
            if (!family.space().is_hyperbolic()) {
                return (r == n && H == 0.0) ? solution.eval(solution.lo()) : kInf;
            }
            if (r == n) {
                return H > 0.0 ? kInf : solution.eval(solution.lo());
            }
            return H / c_limit(family.space(), r);
        case FamilyKind::Equidistants:
            if (r == n) {
                return H > 0.0 ? kInf : solution.eval(solution.lo());
            }
            return H / cr_constant(n, r);
        case FamilyKind::Horospheres: {
            double a = c.a(0.0);
            double b = c.b(0.0);
            if (a == 0.0) {
                return b == 0.0 ? solution.eval(solution.lo()) : (b > 0.0 ? -kInf : kInf);
            }
            return -b / a;
        }
    }
    return kInf;
}

/// τ(π/2) = H_1·S(n) for the regular solution on S^n with r = 1.
inline double sphere_equator_limit(const OdeCoefficients &c) {
    if (c.family().space().is_hyperbolic() || c.family().kind() != FamilyKind::GeodesicSpheres || c.r() != 1) {
        throw Error(ErrorKind::InvalidArgument, "the equator limit is defined for S^n spheres with r = 1");
    }
    return c.target_hr() * sn_constant(c.n());
}

/// Bisection for τ(s) = level on a bracket whose endpoints straddle the level.
inline double find_crossing(const TauSolution &solution, double level, double lo, double hi) {
    double flo = solution(lo) - level;
    double fhi = solution(hi) - level;
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw Error(ErrorKind::NoBracket, "tau - " + std::to_string(level) + " has no sign change on [" +
                                              std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    // Bisect to full double resolution; the 1e−12 contract is met long before.
    for (int it = 0; it < 200; it++) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        double fm = solution(mid) - level;
        if (fm == 0.0) {
            return mid;
        }
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// First crossing of `level` met when scanning from `from` toward `to` in steps of `step`.
inline double scan_crossing(const TauSolution &solution, double level, double from, double to, double step) {
    double dir = to >= from ? 1.0 : -1.0;
    double x = from;
    double fx = solution(x) - level;
    while (dir * (to - x) > 0.0) {
        double y = x + dir * step;
        if (dir * (y - to) > 0.0) {
            y = to;
        }
        double fy = solution(y) - level;
        if (fy == 0.0 || (fx > 0.0) != (fy > 0.0)) {
            return find_crossing(solution, level, std::min(x, y), std::max(x, y));
        }
        x = y;
        fx = fy;
    }
    throw Error(ErrorKind::NoBracket, "no crossing of tau = " + std::to_string(level) + " between " +
                                          std::to_string(from) + " and " + std::to_string(to));
}

}  // namespace hrsurf
