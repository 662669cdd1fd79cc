#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hrsurf/profile.hpp"

namespace hrsurf {

struct CheckResult {
    std::string name;
    bool pass = true;
    std::string detail;
};

struct VerificationReport {
    double max_hr_residual = 0.0;
    double residual_location = std::numeric_limits<double>::quiet_NaN();
    double max_rho_prime_mismatch = 0.0;
    double max_two_route_gap = 0.0;
    double tol = 0.0;
    bool relative = true;
    double rho_prime_tol = 1e-6;
    double two_route_tol = 1e-10;
    std::vector<CheckResult> checks;

    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult &c) { return c.pass; });
    }
};

/// Finite-difference weights for f′(z) on arbitrary distinct nodes (Fornberg's recursion).
inline std::vector<double> fd_weights(const std::vector<double> &x, double z) {
    const size_t n = x.size();
    std::vector<std::vector<double>> c(n, std::vector<double>(2, 0.0));
    double c1 = 1.0;
    double c4 = x[0] - z;
    c[0][0] = 1.0;
    for (size_t i = 1; i < n; i++) {
        size_t mn = std::min<size_t>(i, 1);
        double c2 = 1.0;
        double c5 = c4;
        c4 = x[i] - z;
        for (size_t j = 0; j < i; j++) {
            double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (size_t k = mn; k >= 1; k--) {
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (size_t k = mn; k >= 1; k--) {
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (size_t i = 0; i < n; i++) w[i] = c[i][1];
    return w;
}

/// ρ′ at every sample from the stored (s, ρ) alone. Stencils take `points` nodes grown outward
/// from the sample, skipping neighbours closer than `min_gap` so that graded ends do not amplify
/// roundoff; near an end the stencil becomes one-sided. Close to `singular_end` the gap shrinks
/// with the distance to it.
inline std::vector<double> fd_rho_prime(const ProfileCurve &curve, int points = 9, double min_gap = 2e-3,
                                        double singular_end = kInf) {
    const auto &smp = curve.samples;
    const int n = static_cast<int>(smp.size());
    const int m = std::min(points, n);
    std::vector<double> out(n);
    const double base_gap = min_gap;
    for (int i = 0; i < n; i++) {
        min_gap = std::min(base_gap, 5e-3 * std::abs(singular_end - smp[i].s));
        std::vector<int> idx{i};
        int l = i, r = i;
        auto next_left = [&] {
            int k = l - 1;
            while (k >= 0 && smp[l].s - smp[k].s < min_gap) k--;
            return k;
        };
        auto next_right = [&] {
            int k = r + 1;
            while (k < n && smp[k].s - smp[r].s < min_gap) k++;
            return k < n ? k : -1;
        };
        bool left_turn = true;
        while (static_cast<int>(idx.size()) < m) {
            int kl = next_left(), kr = next_right();
            if (kl < 0 && kr < 0) break;
            if ((left_turn && kl >= 0) || kr < 0) {
                idx.push_back(kl);
                l = kl;
            } else {
                idx.push_back(kr);
                r = kr;
            }
            left_turn = !left_turn;
        }
        std::vector<double> x;
        for (int k : idx) x.push_back(smp[k].s);
        auto w = fd_weights(x, smp[i].s);
        double d = 0.0;
        for (size_t k = 0; k < idx.size(); k++) d += w[k] * smp[idx[k]].rho;
        out[i] = d;
    }
    return out;
}

namespace detail {

inline bool is_cylinder(const ProfileCurve &c) {
    return c.samples.size() >= 2 && c.samples.front().s == c.samples.back().s;
}

/// ρ′ from the equation τ′ = aτ + b at a sample.
inline double ode_rho_prime(const OdeCoefficients &c, const ProfileSample &p) {
    double tau_prime = c.a(p.s) * p.tau + c.b(p.s);
    return tau_prime / (c.r() * std::pow(p.rho, c.r() - 1));
}

}  // namespace detail

/// Rebuilds the principal curvatures at every sample and compares H_r with the target.
inline VerificationReport verify_constancy(const HypersurfaceModel &m, std::optional<double> tol = std::nullopt) {
    VerificationReport rep;
    rep.relative = !m.is_minimal();
    rep.tol = tol.value_or(rep.relative ? 1e-8 : 1e-9);
    auto family = m.make_family();
    auto coeffs = m.coefficients();
    const int r = m.r;
    const double target = m.hr;
    auto residual = [&](double h) {
        double d = std::abs(h - target);
        return rep.relative ? d / std::abs(target) : d;
    };

    CheckResult range{"rho_range", true, ""};
    CheckResult mono{"phi_monotone", true, ""};
    CheckResult dfd{"rho_prime_consistency", true, ""};
    CheckResult two{"two_route", true, ""};
    CheckResult hr{"hr_constancy", true, ""};
    size_t count = 0;

    auto note = [&](double value, double where) {
        if (!(value <= rep.max_hr_residual) || count == 0) {
            rep.max_hr_residual = value;
            rep.residual_location = where;
        }
        count++;
    };

    for (const auto &piece : m.pieces) {
        const auto &curve = piece.curve;
        if (curve.samples.size() < 2) {
            hr.pass = false;
            hr.detail = "piece with fewer than 2 samples";
            continue;
        }
        for (size_t i = 1; i < curve.samples.size(); i++) {
            // φ′ can fall below one ulp of φ far out, so only a decrease counts.
            if (!(curve.samples[i].phi >= curve.samples[i - 1].phi)) {
                mono.pass = false;
                mono.detail = "phi decreases at s = " + detail::num(curve.samples[i].s);
                break;
            }
        }
        for (const auto &p : curve.samples) {
            if (!(p.rho >= 0.0 && p.rho <= 1.0)) {
                range.pass = false;
                range.detail = "rho = " + detail::num(p.rho) + " outside [0, 1] at s = " + detail::num(p.s);
                break;
            }
        }
        if (detail::is_cylinder(curve)) {
            // Only the leaf contributes; the sign of H_r depends on the normal, which is free here.
            double R = curve.samples.front().s;
            auto spec = family.spectrum(R);
            double h_full = std::abs(full_array_hr(spec, 1.0, 0.0, r));
            double h_graph = std::abs(graph_hr(spec, 1.0, 0.0, r));
            note(residual(h_full), R);
            rep.max_two_route_gap = std::max(rep.max_two_route_gap, std::abs(h_full - h_graph));
            continue;
        }
        double end = coeffs.domain().second;
        auto fd = fd_rho_prime(curve, 9, 2e-3, std::isfinite(end) ? end : kInf);
        for (size_t i = 0; i < curve.samples.size(); i++) {
            const auto &p = curve.samples[i];
            if (p.s == 0.0 && family.kind() == FamilyKind::GeodesicSpheres) continue;  // axis point
            double ode = detail::ode_rho_prime(coeffs, p);
            double mismatch = std::abs(fd[i] - ode) / std::max(1.0, std::abs(ode));
            rep.max_rho_prime_mismatch = std::max(rep.max_rho_prime_mismatch, mismatch);
            auto spec = family.spectrum(p.s);
            double h_full = full_array_hr(spec, p.rho, fd[i], r);
            double h_graph = graph_hr(spec, p.rho, fd[i], r);
            double gap = std::abs(h_full - h_graph) / std::max(1.0, std::abs(h_full));
            rep.max_two_route_gap = std::max(rep.max_two_route_gap, gap);
            note(residual(h_full), p.s);
        }
    }
    auto flag = [](CheckResult &c, bool ok, std::string text) {
        c.pass = c.pass && ok;
        if (!ok) c.detail = std::move(text);
    };
    flag(hr, rep.max_hr_residual <= rep.tol,
         "max " + std::string(rep.relative ? "relative" : "absolute") + " H_r residual " +
             detail::num(rep.max_hr_residual) + " > tol " + detail::num(rep.tol) + " at s = " +
             detail::num(rep.residual_location));
    flag(dfd, rep.max_rho_prime_mismatch <= rep.rho_prime_tol,
         "finite-difference rho' differs from (a tau + b)/(r rho^(r-1)) by " +
             detail::num(rep.max_rho_prime_mismatch) + " > " + detail::num(rep.rho_prime_tol));
    flag(two, rep.max_two_route_gap <= rep.two_route_tol,
         "graph formula and full curvature array differ by " + detail::num(rep.max_two_route_gap));
    if (hr.pass) hr.detail = "max residual " + detail::num(rep.max_hr_residual) + " over " + std::to_string(count) +
                             " samples";
    rep.checks = {hr, dfd, two, range, mono};
    return rep;
}

struct ConvexityProfile {
    std::vector<std::vector<Convexity>> per_piece;  // one entry per sample; axis samples count as their neighbour
    size_t strict = 0;
    size_t convex = 0;
    size_t nonconvex = 0;

    Convexity aggregate() const {
        if (nonconvex > 0) return Convexity::Nonconvex;
        return convex > 0 ? Convexity::Convex : Convexity::Strict;
    }
};

/// Principal curvatures −ρ·k_i^s (leaf) and ρ′ at a sample, sorted; ρ′ from the equation.
inline std::vector<double> principal_curvatures(const HypersurfaceModel &m, const ProfileSample &p,
                                                bool cylinder = false) {
    auto family = m.make_family();
    std::vector<double> k;
    auto spec = family.spectrum(p.s);
    for (const auto &e : spec.entries()) {
        for (int i = 0; i < e.multiplicity; i++) k.push_back(-p.rho * e.value);
    }
    k.push_back(cylinder ? 0.0 : detail::ode_rho_prime(m.coefficients(), p));
    std::sort(k.begin(), k.end());
    return k;
}

inline ConvexityProfile verify_convexity(const HypersurfaceModel &m, double zero_tol = 1e-12) {
    ConvexityProfile out;
    for (const auto &piece : m.pieces) {
        std::vector<Convexity> row;
        const auto &smp = piece.curve.samples;
        for (size_t i = 0; i < smp.size(); i++) {
            const auto *p = &smp[i];
            if (p->s == 0.0 && m.family == FamilyKind::GeodesicSpheres && smp.size() > 1) p = &smp[1];
            auto k = principal_curvatures(m, *p, detail::is_cylinder(piece.curve));
            Convexity c = Convexity::Strict;
            for (double v : k) {
                if (v < -zero_tol) {
                    c = Convexity::Nonconvex;
                    break;
                }
                if (v <= zero_tol) c = Convexity::Convex;
            }
            row.push_back(c);
            (c == Convexity::Strict ? out.strict : c == Convexity::Convex ? out.convex : out.nonconvex)++;
        }
        out.per_piece.push_back(std::move(row));
    }
    return out;
}

struct HeightEstimate {
    double height = 0.0;
    double bound = 0.0;
    double slack = 0.0;
    bool pass = false;
};

/// Height of the upper half of a strictly convex sphere against 1/min k₁.
inline HeightEstimate verify_height_estimate(const HypersurfaceModel &m) {
    if (m.classification != Classification::C1_Sphere) {
        throw Error(ErrorKind::NotApplicable, std::string("height estimate needs a compact strictly convex graph; got ") +
                                                  classification_name(m.classification));
    }
    auto conv = verify_convexity(m);
    if (conv.aggregate() != Convexity::Strict) {
        throw Error(ErrorKind::NotApplicable, "height estimate needs strict convexity at every sample");
    }
    const auto &smp = m.pieces.front().curve.samples;
    double kmin = kInf;
    for (const auto &p : smp) {
        if (p.s == 0.0) continue;
        kmin = std::min(kmin, principal_curvatures(m, p).front());
    }
    HeightEstimate h;
    h.height = smp.back().phi - smp.front().phi;
    h.bound = 1.0 / kmin;
    h.slack = h.bound - h.height;
    h.pass = h.slack >= 0.0;
    return h;
}

}  // namespace hrsurf
