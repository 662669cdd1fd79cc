#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "hrsurf/error.hpp"
#include "hrsurf/quadrature.hpp"
#include "hrsurf/symfun.hpp"

namespace hrsurf {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Field { R, C, K, O };

inline int field_dim(Field f) {
    switch (f) {
        case Field::R: return 1;
        case Field::C: return 2;
        case Field::K: return 4;
        case Field::O: return 8;
    }
    return 0;
}

inline char field_letter(Field f) { return "RCKO"[static_cast<int>(f)]; }

/// ℍ_F^m (real dimension n = m·dim F) or the round sphere S^n.
struct AmbientSpace {
    enum class Kind { Hyperbolic, Sphere };

    Kind kind = Kind::Hyperbolic;
    Field field = Field::R;
    int m = 0;
    int n = 0;

    static AmbientSpace hyperbolic(Field f, int m) {
        if (m < 1) {
            throw Error(ErrorKind::InvalidArgument, "hyperbolic rank m must be >= 1");
        }
        if (f == Field::O && m != 2) {
            throw Error(ErrorKind::InvalidArgument, "the octonionic hyperbolic space exists only for m = 2");
        }
        int n = m * field_dim(f);
        if (n < 2) {
            throw Error(ErrorKind::InvalidArgument, "real hyperbolic space needs dimension n >= 2");
        }
        return {Kind::Hyperbolic, f, m, n};
    }

    static AmbientSpace sphere(int n) {
        if (n < 2) {
            throw Error(ErrorKind::InvalidArgument, "sphere dimension n must be >= 2");
        }
        return {Kind::Sphere, Field::R, 1, n};
    }

    /// Parses "hfm:<F>:<m>" or "sn:<n>".
    static AmbientSpace parse(const std::string &text) {
        auto bad = [&]() { return Error(ErrorKind::InvalidArgument, "malformed space '" + text + "' (expected hfm:<F>:<m> or sn:<n>)"); };
        try {
            if (text.rfind("sn:", 0) == 0) {
                size_t used = 0;
                int n = std::stoi(text.substr(3), &used);
                if (used != text.size() - 3) {
                    throw bad();
                }
                return sphere(n);
            }
            if (text.rfind("hfm:", 0) == 0 && text.size() >= 7 && text[5] == ':') {
                Field f;
                switch (text[4]) {
                    case 'R': f = Field::R; break;
                    case 'C': f = Field::C; break;
                    case 'K': f = Field::K; break;
                    case 'O': f = Field::O; break;
                    default: throw bad();
                }
                size_t used = 0;
                int m = std::stoi(text.substr(6), &used);
                if (used != text.size() - 6) {
                    throw bad();
                }
                return hyperbolic(f, m);
            }
        } catch (const std::logic_error &) {
            throw bad();
        }
        throw bad();
    }

    bool is_hyperbolic() const { return kind == Kind::Hyperbolic; }

    std::string spec() const {
        if (kind == Kind::Sphere) {
            return "sn:" + std::to_string(n);
        }
        return std::string("hfm:") + field_letter(field) + ":" + std::to_string(m);
    }

    bool operator==(const AmbientSpace &) const = default;
};

enum class FamilyKind { GeodesicSpheres, Horospheres, Equidistants };

inline const char *family_name(FamilyKind k) {
    switch (k) {
        case FamilyKind::GeodesicSpheres: return "spheres";
        case FamilyKind::Horospheres: return "horospheres";
        case FamilyKind::Equidistants: return "equidistants";
    }
    return "?";
}

inline FamilyKind parse_family(const std::string &text) {
    if (text == "spheres") return FamilyKind::GeodesicSpheres;
    if (text == "horospheres") return FamilyKind::Horospheres;
    if (text == "equidistants") return FamilyKind::Equidistants;
    throw Error(ErrorKind::InvalidArgument, "unknown family '" + text + "' (spheres|horospheres|equidistants)");
}

/// A family of parallel isoparametric hypersurfaces {f_s} of the base space.
class IsoparametricFamily {
   public:
    IsoparametricFamily(AmbientSpace space, FamilyKind kind) : space_(space), kind_(kind) {
        if (!space.is_hyperbolic() && kind != FamilyKind::GeodesicSpheres) {
            throw Error(ErrorKind::UnsupportedCombination, std::string(family_name(kind)) + " exist only in hyperbolic spaces");
        }
        if (kind == FamilyKind::Equidistants && space.field != Field::R) {
            throw Error(ErrorKind::UnsupportedCombination, "equidistant families are taken in real hyperbolic space only");
        }
    }

    const AmbientSpace &space() const { return space_; }
    FamilyKind kind() const { return kind_; }
    int n() const { return space_.n; }

    /// Open interval of admissible s.
    std::pair<double, double> domain() const {
        if (kind_ == FamilyKind::GeodesicSpheres) {
            return {0.0, space_.is_hyperbolic() ? kInf : std::numbers::pi};
        }
        return {-kInf, kInf};
    }

    bool in_domain(double s) const {
        auto [lo, hi] = domain();
        return s > lo && s < hi;
    }

    /// Multiplicity p of the coth s curvature on geodesic spheres of ℍ_F^m.
    int p() const {
        switch (space_.field) {
            case Field::R: return space_.n - 1;
            case Field::C: return 1;
            case Field::K: return 3;
            case Field::O: return 7;
        }
        return 0;
    }

    CurvatureSpectrum spectrum(double s) const {
        int n = space_.n;
        switch (kind_) {
            case FamilyKind::GeodesicSpheres:
                if (!space_.is_hyperbolic()) {
                    return {{-std::cos(s) / std::sin(s), n - 1}};
                }
                return {{-0.5 / std::tanh(0.5 * s), n - p() - 1}, {-1.0 / std::tanh(s), p()}};
            case FamilyKind::Horospheres:
                if (space_.field == Field::R) {
                    return {{1.0, n - 1}};
                }
                return {{1.0, 1}, {0.5, n - 2}};
            case FamilyKind::Equidistants:
                return {{-std::tanh(s), n - 1}};
        }
        return {};
    }

    std::string orientation_note() const {
        switch (kind_) {
            case FamilyKind::GeodesicSpheres: return "outward unit normal; every principal curvature negative";
            case FamilyKind::Horospheres: return "normal toward the center at infinity; curvatures 1 (and 1/2)";
            case FamilyKind::Equidistants: return "normal pointing away from the totally geodesic leaf; curvature -tanh s";
        }
        return {};
    }

   private:
    AmbientSpace space_;
    FamilyKind kind_;
};

inline double leaf_hr(const IsoparametricFamily &family, int r, double s) {
    if (!family.in_domain(s)) {
        throw Error(ErrorKind::OutOfDomain, "s = " + std::to_string(s) + " lies outside the family domain");
    }
    if (r < 0 || r > family.n() - 1) {
        throw Error(ErrorKind::InvalidArgument, "leaf order r must lie in 0..n-1");
    }
    return elem_sym(family.spectrum(s), r);
}

/// b_r = r·H_r / C(n−1, r−1).
inline double b_r_constant(int n, int r, double hr) { return r * hr / binomial(n - 1, r - 1); }

/// C_r = ((n−r)/n)·C(n, r).
inline double cr_constant(int n, int r) {
    if (r < 1 || r >= n) {
        throw Error(ErrorKind::InvalidArgument, "C_r needs 1 <= r < n");
    }
    return (n - r) * binomial(n, r) / n;
}

/// S(n) = ∫_0^{π/2} sin^{n−1}.
inline double sn_constant(int n) {
    return quad::integrate([n](double u) { return std::pow(std::sin(u), n - 1); }, 0.0, std::numbers::pi / 2);
}

/// C_F(r) = lim_{s→∞} |H_r^s| on geodesic spheres of ℍ_F^m.
inline double c_limit(const AmbientSpace &space, int r) {
    if (!space.is_hyperbolic()) {
        throw Error(ErrorKind::InvalidArgument, "C_F(r) is defined for hyperbolic spaces only");
    }
    int n = space.n;
    if (r < 1 || r > n) {
        throw Error(ErrorKind::InvalidArgument, "C_F(r) needs 1 <= r <= n");
    }
    if (r == n) {
        return 0.0;
    }
    switch (space.field) {
        case Field::R: return binomial(n - 1, r);
        case Field::C:
            if (r == n - 1) {
                return std::ldexp(1.0, -(n - 2));
            }
            return std::ldexp(binomial(n - 2, r), -r) + std::ldexp(binomial(n - 2, r - 1), -(r - 1));
        default: {
            int p = IsoparametricFamily(space, FamilyKind::GeodesicSpheres).p();
            return elem_sym(CurvatureSpectrum{{0.5, n - p - 1}, {1.0, p}}, r);
        }
    }
}

/// H_r^0 of a horosphere of ℍ_F^m.
inline double horosphere_hr0(const AmbientSpace &space, int r) {
    IsoparametricFamily horo(space, FamilyKind::Horospheres);
    if (r < 0 || r > space.n - 1) {
        throw Error(ErrorKind::InvalidArgument, "horosphere order r must lie in 0..n-1");
    }
    return elem_sym(horo.spectrum(0.0), r);
}

/// s_r = arctanh((H_r/C_r)^{1/r}) for equidistants of ℍ^n.
inline double s_r_constant(int n, int r, double hr) {
    double c = cr_constant(n, r);
    if (!(hr > 0.0 && hr < c)) {
        throw Error(ErrorKind::OutOfRange, "s_r needs 0 < H_r < C_r = " + std::to_string(c));
    }
    return std::atanh(std::pow(hr / c, 1.0 / r));
}

/// s^r·|H_r^s| for a geodesic-sphere family.
inline double small_s_asymptotics_check(const IsoparametricFamily &family, int r, double s) {
    return std::pow(s, r) * std::abs(leaf_hr(family, r, s));
}

/// Largest λ with τ′(λ) < 0 for the unit-initial-value solution of the sphere family.
inline double delta_hr(const IsoparametricFamily &family, int r, double hr) {
    int n = family.n();
    if (family.kind() != FamilyKind::GeodesicSpheres) {
        throw Error(ErrorKind::UnsupportedCombination, "delta_hr is defined for geodesic-sphere families");
    }
    if (r < 1 || r > n - 1 || !(hr > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "delta_hr needs 1 <= r <= n-1 and H_r > 0");
    }
    if (!family.space().is_hyperbolic()) {
        return std::atan(std::pow(cr_constant(n, r) / hr, 1.0 / r));
    }
    if (hr <= c_limit(family.space(), r)) {
        return kInf;
    }
    auto g = [&](double s) { return std::abs(leaf_hr(family, r, s)) - hr; };
    double lo = 1.0;
    while (g(lo) <= 0.0) {
        lo *= 0.5;
    }
    double hi = 1.0;
    while (g(hi) > 0.0 && hi < 1e4) {
        hi *= 2.0;
    }
    if (g(hi) > 0.0) {
        return kInf;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12; it++) {
        double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Coefficients of τ′ = a(s)·τ + b(s) for a family, an order r and a target H_r.
class OdeCoefficients {
   public:
    OdeCoefficients(IsoparametricFamily family, int r, double target_hr)
        : family_(std::move(family)), r_(r), target_(target_hr) {
        int n = family_.n();
        if (r < 1 || r > n) {
            throw Error(ErrorKind::InvalidArgument, "r must lie in 1..n");
        }
        if (!(target_hr >= 0.0) || !std::isfinite(target_hr)) {
            throw Error(ErrorKind::InvalidArgument, "target H_r must be finite and >= 0");
        }
        if (family_.kind() == FamilyKind::Horospheres) {
            h0_r_ = r < n ? horosphere_hr0(family_.space(), r) : 0.0;
            h0_rm1_ = horosphere_hr0(family_.space(), r - 1);
        }
        b_r_ = b_r_constant(n, r, target_hr);
    }

    const IsoparametricFamily &family() const { return family_; }
    int r() const { return r_; }
    int n() const { return family_.n(); }
    double target_hr() const { return target_; }
    bool singular_at_zero() const { return family_.kind() == FamilyKind::GeodesicSpheres && r_ < n(); }

    /// Open interval on which a and b are finite.
    std::pair<double, double> domain() const {
        auto dom = family_.domain();
        bool b_blows = target_ > 0.0 && r_ > 1;
        if (b_blows && family_.kind() == FamilyKind::GeodesicSpheres && !family_.space().is_hyperbolic()) {
            dom.second = std::numbers::pi / 2;
        }
        if (b_blows && family_.kind() == FamilyKind::Equidistants) {
            dom.first = 0.0;
        }
        return dom;
    }

    double a(double s) const {
        int n = this->n();
        switch (family_.kind()) {
            case FamilyKind::GeodesicSpheres:
                if (r_ == n) {
                    return 0.0;
                }
                if (!family_.space().is_hyperbolic()) {
                    return -(n - r_) * std::cos(s) / std::sin(s);
                } else {
                    auto e = elem_sym_all(family_.spectrum(s), r_);
                    return -r_ * std::abs(e[r_]) / std::abs(e[r_ - 1]);
                }
            case FamilyKind::Horospheres: return r_ * h0_r_ / h0_rm1_;
            case FamilyKind::Equidistants: return -(n - r_) * std::tanh(s);
        }
        return 0.0;
    }

    double b(double s) const {
        if (target_ == 0.0) {
            return 0.0;
        }
        switch (family_.kind()) {
            case FamilyKind::GeodesicSpheres:
                if (!family_.space().is_hyperbolic()) {
                    return b_r_ * std::pow(std::tan(s), r_ - 1);
                } else {
                    auto e = elem_sym_all(family_.spectrum(s), r_ - 1);
                    return r_ * target_ / std::abs(e[r_ - 1]);
                }
            case FamilyKind::Horospheres: return ((r_ % 2 == 1) ? 1.0 : -1.0) * r_ * target_ / h0_rm1_;
            case FamilyKind::Equidistants: return b_r_ * std::pow(std::tanh(s), 1 - r_);
        }
        return 0.0;
    }

    double b_r() const { return b_r_; }

   private:
    IsoparametricFamily family_;
    int r_;
    double target_;
    double b_r_ = 0.0;
    double h0_r_ = 0.0;
    double h0_rm1_ = 1.0;
};

inline OdeCoefficients ode_coefficients(const IsoparametricFamily &family, int r, double target_hr) {
    return OdeCoefficients(family, r, target_hr);
}

}  // namespace hrsurf
