#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hrsurf/ode.hpp"

namespace hrsurf {

enum class EndpointType { AxisPoint, VerticalTangent, Asymptotic, OpenEnd };

inline const char *endpoint_name(EndpointType t) {
    switch (t) {
        case EndpointType::AxisPoint: return "AxisPoint";
        case EndpointType::VerticalTangent: return "VerticalTangent";
        case EndpointType::Asymptotic: return "Asymptotic";
        case EndpointType::OpenEnd: return "OpenEnd";
    }
    return "";
}

inline EndpointType parse_endpoint(const std::string &text) {
    for (auto t : {EndpointType::AxisPoint, EndpointType::VerticalTangent, EndpointType::Asymptotic,
                   EndpointType::OpenEnd}) {
        if (text == endpoint_name(t)) return t;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown endpoint type '" + text + "'");
}

struct ProfileSample {
    double s;
    double tau;
    double rho;
    double phi;
    double phi_prime;
};

struct ProfileCurve {
    std::vector<ProfileSample> samples;
    EndpointType lo_type = EndpointType::OpenEnd;
    EndpointType hi_type = EndpointType::OpenEnd;

    double lo() const { return samples.front().s; }
    double hi() const { return samples.back().s; }
    size_t size() const { return samples.size(); }
};

/// Height of a sample in the assembled model: offset ± φ.
struct Placement {
    bool reflect = false;
    double offset = 0.0;

    double height(double phi) const { return offset + (reflect ? -phi : phi); }
    bool operator==(const Placement &) const = default;
};

struct ModelPiece {
    ProfileCurve curve;
    Placement placement;
};

enum class Classification {
    C1_Sphere,
    C2_EntireGraph,
    C3_Delaunay,
    C4_SymmetricUnboundedAnnulus,
    Catenoid,
    MinimalDelaunay,
    HorosphereBigraph,
    EquidistantBigraph,
    EquidistantAsymptoticGraph,
    MinimalEquidistantSlab,
    MinimalEquidistantAsymptotic,
    MinimalEntireConstantAngle,
    MinimalParabolicSlab,
    Cylinder,
};

inline constexpr Classification kAllClassifications[] = {
    Classification::C1_Sphere,
    Classification::C2_EntireGraph,
    Classification::C3_Delaunay,
    Classification::C4_SymmetricUnboundedAnnulus,
    Classification::Catenoid,
    Classification::MinimalDelaunay,
    Classification::HorosphereBigraph,
    Classification::EquidistantBigraph,
    Classification::EquidistantAsymptoticGraph,
    Classification::MinimalEquidistantSlab,
    Classification::MinimalEquidistantAsymptotic,
    Classification::MinimalEntireConstantAngle,
    Classification::MinimalParabolicSlab,
    Classification::Cylinder,
};

inline const char *classification_name(Classification c) {
    switch (c) {
        case Classification::C1_Sphere: return "C1_Sphere";
        case Classification::C2_EntireGraph: return "C2_EntireGraph";
        case Classification::C3_Delaunay: return "C3_Delaunay";
        case Classification::C4_SymmetricUnboundedAnnulus: return "C4_SymmetricUnboundedAnnulus";
        case Classification::Catenoid: return "Catenoid";
        case Classification::MinimalDelaunay: return "MinimalDelaunay";
        case Classification::HorosphereBigraph: return "HorosphereBigraph";
        case Classification::EquidistantBigraph: return "EquidistantBigraph";
        case Classification::EquidistantAsymptoticGraph: return "EquidistantAsymptoticGraph";
        case Classification::MinimalEquidistantSlab: return "MinimalEquidistantSlab";
        case Classification::MinimalEquidistantAsymptotic: return "MinimalEquidistantAsymptotic";
        case Classification::MinimalEntireConstantAngle: return "MinimalEntireConstantAngle";
        case Classification::MinimalParabolicSlab: return "MinimalParabolicSlab";
        case Classification::Cylinder: return "Cylinder";
    }
    return "";
}

inline Classification parse_classification(const std::string &text) {
    for (auto c : kAllClassifications) {
        if (text == classification_name(c)) return c;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown classification '" + text + "'");
}

enum class Scenario {
    Sphere,
    EntireGraph,
    Delaunay,
    Annulus,
    Catenoid,
    MinimalDelaunay,
    HorosphereBigraph,
    EquidistantBigraph,
    EquidistantGraph,
    MinimalEquidistant,
    MinimalParabolic,
    ConstantAngle,
    Cylinder,
};

inline constexpr Scenario kAllScenarios[] = {
    Scenario::Sphere,           Scenario::EntireGraph,       Scenario::Delaunay,
    Scenario::Annulus,          Scenario::Catenoid,          Scenario::MinimalDelaunay,
    Scenario::HorosphereBigraph, Scenario::EquidistantBigraph, Scenario::EquidistantGraph,
    Scenario::MinimalEquidistant, Scenario::MinimalParabolic,  Scenario::ConstantAngle,
    Scenario::Cylinder,
};

inline const char *scenario_name(Scenario s) {
    switch (s) {
        case Scenario::Sphere: return "sphere";
        case Scenario::EntireGraph: return "entire-graph";
        case Scenario::Delaunay: return "delaunay";
        case Scenario::Annulus: return "annulus";
        case Scenario::Catenoid: return "catenoid";
        case Scenario::MinimalDelaunay: return "minimal-delaunay";
        case Scenario::HorosphereBigraph: return "horosphere-bigraph";
        case Scenario::EquidistantBigraph: return "equidistant-bigraph";
        case Scenario::EquidistantGraph: return "equidistant-graph";
        case Scenario::MinimalEquidistant: return "minimal-equidistant";
        case Scenario::MinimalParabolic: return "minimal-parabolic";
        case Scenario::ConstantAngle: return "constant-angle";
        case Scenario::Cylinder: return "cylinder";
    }
    return "";
}

inline Scenario parse_scenario(const std::string &text) {
    for (auto s : kAllScenarios) {
        if (text == scenario_name(s)) return s;
    }
    std::string all;
    for (auto s : kAllScenarios) {
        all += (all.empty() ? "" : "|") + std::string(scenario_name(s));
    }
    throw Error(ErrorKind::InvalidArgument, "unknown scenario '" + text + "' (" + all + ")");
}

enum class Convexity { Strict, Convex, Nonconvex };

inline const char *convexity_name(Convexity c) {
    switch (c) {
        case Convexity::Strict: return "strict";
        case Convexity::Convex: return "convex";
        case Convexity::Nonconvex: return "nonconvex";
    }
    return "";
}

inline Convexity parse_convexity(const std::string &text) {
    for (auto c : {Convexity::Strict, Convexity::Convex, Convexity::Nonconvex}) {
        if (text == convexity_name(c)) return c;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown convexity '" + text + "'");
}

struct HypersurfaceModel {
    AmbientSpace space;
    FamilyKind family = FamilyKind::GeodesicSpheres;
    int r = 1;
    double hr = 0.0;
    Scenario scenario = Scenario::Sphere;
    Classification classification = Classification::C1_Sphere;
    std::optional<double> lambda;
    std::optional<double> symmetry;  // mirror height
    std::optional<double> period;
    std::optional<double> slab;      // half-width α of the slab (−α, α)
    std::optional<Convexity> convexity;
    std::vector<ModelPiece> pieces;

    IsoparametricFamily make_family() const { return IsoparametricFamily(space, family); }
    OdeCoefficients coefficients() const { return OdeCoefficients(make_family(), r, hr); }
    bool is_minimal() const { return hr == 0.0; }
};

// ---------------------------------------------------------------------------
// ρ and φ

/// ρ together with an accurate 1 − ρ² and ρ′.
struct RhoFunction {
    std::function<double(double)> rho;
    std::function<double(double)> gap;
    std::function<double(double)> rho_prime;
    /// 1 − ρ² at s = p + d with the offset d kept exact; optional.
    std::function<double(double, double)> gap_near;

    double gap_at(double p, double d) const { return gap_near ? gap_near(p, d) : gap(p + d); }
};

namespace detail {

inline std::string num(double x) {
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}

/// 1 − ρ² from 1 − τ without cancellation.
inline double gap_from(double one_minus_tau, double rho, int r) {
    double sum = 0.0, pk = 1.0;
    for (int k = 0; k < r; k++) {
        sum += pk;
        pk *= rho;
    }
    return one_minus_tau / sum * (1.0 + rho);
}

}  // namespace detail

/// ρ-function of a τ solution. Near each point of `unit_points` (where τ = 1 exactly) 1 − τ is
/// integrated directly from the equation for w = τ − 1, which keeps the relative accuracy of 1 − ρ².
inline RhoFunction rho_function(const TauSolution &sol, std::vector<double> unit_points = {}) {
    const auto &c = sol.coefficients();
    const int r = c.r();
    auto [dlo, dhi] = c.domain();
    struct Near {
        double p, width;
    };
    std::vector<Near> near;
    for (double p : unit_points) {
        double w = std::min({0.01, 0.2 * (p - dlo), 0.2 * (dhi - p)});
        if (w > 0.0) near.push_back({p, w});
    }
    // w(p + d) = ∫_p^{p+d} exp(∫_u^{p+d} a) (a(u) + b(u)) du, with w = τ − 1
    auto w_from = [c](double p, double d) {
        // Node offsets are formed from d itself so that w keeps full relative accuracy as d → 0.
        const auto &k15 = quad::kronrod15();
        const auto &g7 = quad::gauss7();
        double outer = 0.0;
        for (size_t i = 0; i < k15.x.size(); i++) {
            double t = 0.5 * d * (1.0 + k15.x[i]);  // u − p
            double len = d - t;                      // s − u
            double A = 0.0;
            for (size_t j = 0; j < g7.x.size(); j++) {
                A += g7.w[j] * c.a(p + t + 0.5 * len * (1.0 + g7.x[j]));
            }
            A *= 0.5 * len;
            outer += k15.w[i] * std::exp(A) * (c.a(p + t) + c.b(p + t));
        }
        return 0.5 * d * outer;
    };
    auto one_minus_tau = [sol, near, w_from](double p, double d) {
        for (const auto &nz : near) {
            if (p == nz.p && std::abs(d) < nz.width) {
                return d == 0.0 ? 0.0 : -w_from(p, d);
            }
        }
        double s = p + d;
        for (const auto &nz : near) {
            if (std::abs(s - nz.p) < nz.width) {
                return s == nz.p ? 0.0 : -w_from(nz.p, s - nz.p);
            }
        }
        return 1.0 - sol(s);
    };
    RhoFunction f;
    f.rho = [sol, r](double s) { return std::pow(std::max(sol(s), 0.0), 1.0 / r); };
    f.gap = [sol, r, one_minus_tau](double s) {
        double rho = std::pow(std::max(sol(s), 0.0), 1.0 / r);
        return detail::gap_from(one_minus_tau(s, 0.0), rho, r);
    };
    f.gap_near = [sol, r, one_minus_tau](double p, double d) {
        double rho = std::pow(std::max(sol(p + d), 0.0), 1.0 / r);
        return detail::gap_from(one_minus_tau(p, d), rho, r);
    };
    f.rho_prime = [sol, r](double s) {
        double tau = sol(s);
        double rho = std::pow(std::max(tau, 0.0), 1.0 / r);
        return sol.deriv(s) / (r * std::pow(rho, r - 1));
    };
    return f;
}

/// φ at every grid point, with φ(grid[anchor]) = 0. Intervals within min(1, L/2) of a
/// VerticalTangent end are integrated in u = √|s − s*|, which removes the inverse square root.
inline std::vector<double> phi_quadrature(const RhoFunction &f, const std::vector<double> &grid, EndpointType lo_type,
                                          EndpointType hi_type, size_t anchor = 0) {
    if (grid.size() < 2 || anchor >= grid.size()) {
        throw Error(ErrorKind::InvalidArgument, "phi_quadrature needs at least two grid points and a valid anchor");
    }
    for (size_t i = 1; i < grid.size(); i++) {
        if (!(grid[i] > grid[i - 1])) {
            throw Error(ErrorKind::InvalidArgument, "phi_quadrature grid must be strictly increasing");
        }
    }
    const double lo = grid.front();
    const double hi = grid.back();
    const double zone = std::min(1.0, 0.5 * (hi - lo));
    const bool lo_v = lo_type == EndpointType::VerticalTangent;
    const bool hi_v = hi_type == EndpointType::VerticalTangent;
    for (auto [v, p] : {std::pair{lo_v, lo}, std::pair{hi_v, hi}}) {
        if (v && !(std::abs(f.rho_prime(p)) > 1e-10)) {
            throw Error(ErrorKind::DivergentEndpoint, "rho -> 1 with rho' = " + detail::num(f.rho_prime(p)) +
                                                          " at s = " + detail::num(p) +
                                                          "; the height integral may diverge");
        }
    }
    auto integrand = [&](double s) { return f.rho(s) / std::sqrt(f.gap(s)); };
    auto panel = [&](double a, double b) {
        double mid = 0.5 * (a + b);
        if (lo_v && mid - lo < zone) {
            // s = lo + u²
            return quad::integrate(
                [&](double u) {
                    return 2.0 * u * f.rho(lo + u * u) / std::sqrt(f.gap_at(lo, u * u));
                },
                std::sqrt(a - lo), std::sqrt(b - lo), 1e-13);
        }
        if (hi_v && hi - mid < zone) {
            // s = hi − u²
            return quad::integrate(
                [&](double u) {
                    return 2.0 * u * f.rho(hi - u * u) / std::sqrt(f.gap_at(hi, -u * u));
                },
                std::sqrt(hi - b), std::sqrt(hi - a), 1e-13);
        }
        return quad::integrate(integrand, a, b, 1e-13);
    };
    std::vector<double> phi(grid.size(), 0.0);
    for (size_t i = anchor + 1; i < grid.size(); i++) {
        phi[i] = phi[i - 1] + panel(grid[i - 1], grid[i]);
    }
    for (size_t i = anchor; i-- > 0;) {
        phi[i] = phi[i + 1] - panel(grid[i], grid[i + 1]);
    }
    return phi;
}

// ---------------------------------------------------------------------------
// Sampling grids

struct GridZone {
    enum class Map { Uniform, FineAtA, FineAtB, FineBoth, Geometric };
    double a;
    double b;
    Map map = Map::Uniform;
    double pivot = 0.0;  // singular point outside [a, b], for Geometric
};

/// Concatenated zone grids with roughly `intervals` intervals in total. Each zone gets a share
/// proportional to its coarsest spacing so the spacing is continuous across zone boundaries.
inline std::vector<double> zone_grid(const std::vector<GridZone> &zones, int intervals) {
    using Map = GridZone::Map;
    auto weight = [](const GridZone &z) {
        double L = z.b - z.a;
        switch (z.map) {
            case Map::Uniform: return L;
            case Map::FineAtA:
            case Map::FineAtB:
            case Map::FineBoth: return L * std::numbers::pi / 2;
            case Map::Geometric: {
                double x0 = z.a - z.pivot, x1 = z.b - z.pivot;
                return std::max(std::abs(x0), std::abs(x1)) * std::abs(std::log(x1 / x0));
            }
        }
        return L;
    };
    double total = 0.0;
    for (const auto &z : zones) total += weight(z);
    double delta = total / std::max(intervals, 1);
    std::vector<double> out;
    for (const auto &z : zones) {
        int count = std::max(4, static_cast<int>(std::lround(weight(z) / delta)));
        double L = z.b - z.a;
        for (int k = out.empty() ? 0 : 1; k <= count; k++) {
            double t = static_cast<double>(k) / count;
            double s = z.a;
            switch (z.map) {
                case Map::Uniform: s = z.a + L * t; break;
                case Map::FineAtA: s = z.a + L * (1.0 - std::cos(0.5 * std::numbers::pi * t)); break;
                case Map::FineAtB: s = z.a + L * std::sin(0.5 * std::numbers::pi * t); break;
                case Map::FineBoth: s = z.a + 0.5 * L * (1.0 - std::cos(std::numbers::pi * t)); break;
                case Map::Geometric: {
                    double x0 = z.a - z.pivot, x1 = z.b - z.pivot;
                    s = z.pivot + x0 * std::pow(x1 / x0, t);
                    break;
                }
            }
            if (k == 0) s = z.a;
            if (k == count) s = z.b;
            out.push_back(s);
        }
    }
    return out;
}

namespace detail {

/// Zones for [a, b] with sqrt grading at vertical ends; the graded zone matches phi_quadrature's.
inline std::vector<GridZone> vertical_zones(double a, double b, bool a_vertical, bool b_vertical) {
    using Map = GridZone::Map;
    double L = b - a;
    double z = std::min(1.0, 0.5 * L);
    if (a_vertical && b_vertical) {
        if (L <= 2.0) return {{a, b, Map::FineBoth}};
        return {{a, a + z, Map::FineAtA}, {a + z, b - z, Map::Uniform}, {b - z, b, Map::FineAtB}};
    }
    if (a_vertical) return {{a, a + z, Map::FineAtA}, {a + z, b, Map::Uniform}};
    if (b_vertical) return {{a, b - z, Map::Uniform}, {b - z, b, Map::FineAtB}};
    return {{a, b, Map::Uniform}};
}

inline size_t nearest_index(const std::vector<double> &grid, double s) {
    size_t best = 0;
    for (size_t i = 1; i < grid.size(); i++) {
        if (std::abs(grid[i] - s) < std::abs(grid[best] - s)) best = i;
    }
    return best;
}

}  // namespace detail

/// Samples a τ solution on the zone grid and integrates φ from `anchor_s`.
inline ProfileCurve build_profile(const TauSolution &sol_in, const std::vector<GridZone> &zones, EndpointType lo_type,
                                  EndpointType hi_type, double anchor_s, int intervals,
                                  std::vector<double> unit_points = {}) {
    auto grid = zone_grid(zones, intervals);
    size_t anchor = detail::nearest_index(grid, anchor_s);
    auto dense = densify(sol_in, grid.front(), grid.back());
    const TauSolution &sol = dense;
    if (lo_type == EndpointType::VerticalTangent) unit_points.push_back(grid.front());
    if (hi_type == EndpointType::VerticalTangent) unit_points.push_back(grid.back());
    auto f = rho_function(sol, unit_points);
    auto phi = phi_quadrature(f, grid, lo_type, hi_type, anchor);
    const int r = sol.coefficients().r();
    ProfileCurve curve;
    curve.lo_type = lo_type;
    curve.hi_type = hi_type;
    curve.samples.reserve(grid.size());
    for (size_t i = 0; i < grid.size(); i++) {
        double s = grid[i];
        bool vertical = (i == 0 && lo_type == EndpointType::VerticalTangent) ||
                        (i + 1 == grid.size() && hi_type == EndpointType::VerticalTangent);
        bool axis = i == 0 && lo_type == EndpointType::AxisPoint;
        ProfileSample p{};
        p.s = s;
        p.phi = phi[i];
        if (vertical) {
            p.tau = p.rho = 1.0;
            p.phi_prime = kInf;
        } else if (axis) {
            p.tau = p.rho = p.phi_prime = 0.0;
        } else {
            p.tau = sol(s);
            p.rho = std::pow(std::max(p.tau, 0.0), 1.0 / r);
            p.phi_prime = p.rho / std::sqrt(f.gap(s));
        }
        curve.samples.push_back(p);
    }
    return curve;
}

/// θ = 1/√(1 + φ′²) from the slope.
inline double angle_from_slope(double phi_prime) {
    if (std::isinf(phi_prime)) return 0.0;
    return 1.0 / std::sqrt(1.0 + phi_prime * phi_prime);
}

/// θ = √(1 − ρ²) from ρ.
inline double angle_from_rho(double rho) { return std::sqrt(std::max(0.0, (1.0 - rho) * (1.0 + rho))); }

// ---------------------------------------------------------------------------
// Classification

struct InitialCondition {
    enum class Kind { RegularAtZero, UnitAt };
    Kind kind = Kind::RegularAtZero;
    double lambda = 0.0;

    static InitialCondition regular_at_zero() { return {}; }
    static InitialCondition unit_at(double lambda) { return {Kind::UnitAt, lambda}; }
};

struct ClassifyResult {
    std::optional<Classification> label;
    std::optional<Convexity> convexity;
    std::string note;
};

namespace detail {

inline bool close(double a, double b, double rel = 1e-10) {
    if (!std::isfinite(a) || !std::isfinite(b)) return a == b;
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

inline Convexity sphere_convexity(int n, int r, double hr) {
    if (r > 1) return Convexity::Strict;
    double threshold = 1.0 / sn_constant(n);
    if (close(hr, threshold)) return Convexity::Convex;
    return hr > threshold ? Convexity::Strict : Convexity::Nonconvex;
}

}  // namespace detail

/// Label of the hypersurface generated by the given initial condition.
/// For r-minimal equidistants λ is τ(0); for the r = n constant-angle case λ is the slope.
inline ClassifyResult classify(const IsoparametricFamily &family, int r, double hr, InitialCondition init) {
    using C = Classification;
    const int n = family.n();
    const bool regular = init.kind == InitialCondition::Kind::RegularAtZero;
    const double lambda = init.lambda;
    ClassifyResult out;
    auto none = [&](std::string why) {
        out.note = std::move(why);
        return out;
    };
    auto label = [&](C c) {
        out.label = c;
        return out;
    };
    if (r < 1 || r > n || !(hr >= 0.0)) return none("needs 1 <= r <= n and H_r >= 0");
    if (r == n && hr > 0.0 && family.kind() != FamilyKind::GeodesicSpheres) return none("no H_n > 0 model here");
    switch (family.kind()) {
        case FamilyKind::GeodesicSpheres: {
            const bool hyp = family.space().is_hyperbolic();
            if (regular) {
                if (hr == 0.0) return none("the regular solution vanishes identically");
                if (!hyp) {
                    out.convexity = detail::sphere_convexity(n, r, hr);
                    return label(C::C1_Sphere);
                }
                out.convexity = Convexity::Strict;
                if (r == n || hr > c_limit(family.space(), r)) return label(C::C1_Sphere);
                return label(C::C2_EntireGraph);
            }
            if (!(lambda > 0.0) || !family.in_domain(lambda)) return none("lambda outside the family domain");
            if (r == n) {
                if (hr == 0.0) return label(C::Cylinder);
                return none("tau' > 0 at lambda: no graph leaves s = lambda");
            }
            if (hr == 0.0) {
                if (hyp) return label(C::Catenoid);
                if (detail::close(lambda, std::numbers::pi / 2)) return label(C::Cylinder);
                if (lambda < std::numbers::pi / 2) return label(C::MinimalDelaunay);
                return none("lambda > pi/2: the mirror of a lambda < pi/2 minimal Delaunay block");
            }
            double delta = delta_hr(family, r, hr);
            if (detail::close(lambda, delta)) return label(C::Cylinder);
            if (lambda > delta) return none("lambda > delta: tau' > 0 at lambda");
            if (!hyp || hr > c_limit(family.space(), r)) return label(C::C3_Delaunay);
            return label(C::C4_SymmetricUnboundedAnnulus);
        }
        case FamilyKind::Horospheres: {
            if (hr == 0.0) return label(r == n ? C::MinimalEntireConstantAngle : C::MinimalParabolicSlab);
            double h0 = horosphere_hr0(family.space(), r);
            if (detail::close(hr, h0, 1e-12)) return label(C::Cylinder);
            if (hr < h0 && r % 2 == 0) return label(C::HorosphereBigraph);
            if (hr < h0) return none("odd r: no horosphere-type bigraph");
            return none("H_r > H_r^0: no horosphere-type model");
        }
        case FamilyKind::Equidistants: {
            if (hr == 0.0) {
                if (r == n) return label(C::MinimalEntireConstantAngle);
                if (!(lambda > 0.0)) return none("r-minimal equidistant models need tau(0) = lambda > 0");
                return label(lambda == 1.0 ? C::MinimalEquidistantAsymptotic : C::MinimalEquidistantSlab);
            }
            double cr = cr_constant(n, r);
            if (!(hr < cr)) return none("H_r >= C_r: no equidistant-type model");
            if (regular) return none("equidistant families have no regular start");
            double sr = s_r_constant(n, r, hr);
            if (detail::close(lambda, sr)) return label(C::EquidistantAsymptoticGraph);
            if (lambda > sr) return label(C::EquidistantBigraph);
            return none("lambda < s_r: tau' > 0 at lambda");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Construction

struct ConstructParams {
    std::optional<double> lambda;
    int samples = 2048;
    double s_max = 40.0;
    double asymptotic_offset = 1e-6;
    SolveMethod method = SolveMethod::Auto;
};

namespace detail {

[[noreturn]] inline void regime(const std::string &msg) { throw Error(ErrorKind::ParameterOutOfRegime, msg); }

inline void require_family(FamilyKind have, FamilyKind want, Scenario sc) {
    if (have != want) {
        regime(std::string("scenario ") + scenario_name(sc) + " needs the " + family_name(want) + " family");
    }
}

inline void require_r_below_n(int r, int n, Scenario sc) {
    if (r >= n) regime(std::string("scenario ") + scenario_name(sc) + " needs r < n");
}

inline double upper_search(const OdeCoefficients &c) {
    double hi = c.domain().second;
    return std::isfinite(hi) ? hi - 8 * std::numeric_limits<double>::epsilon() * hi : 200.0;
}

inline ModelPiece piece(ProfileCurve curve, bool reflect = false, double offset = 0.0) {
    return {std::move(curve), Placement{reflect, offset}};
}

inline double sup_abs_height(const HypersurfaceModel &m) {
    double sup = 0.0;
    for (const auto &p : m.pieces) {
        for (const auto &smp : p.curve.samples) sup = std::max(sup, std::abs(p.placement.height(smp.phi)));
    }
    return sup;
}

inline ProfileCurve cylinder_curve(double R) {
    ProfileCurve c;
    c.lo_type = c.hi_type = EndpointType::OpenEnd;
    c.samples = {{R, 1.0, 1.0, -1.0, kInf}, {R, 1.0, 1.0, 1.0, kInf}};
    return c;
}

}  // namespace detail

inline HypersurfaceModel construct(const AmbientSpace &space, FamilyKind family_kind, int r, double hr, Scenario sc,
                                   const ConstructParams &params = {}) {
    using detail::num;
    using detail::regime;
    using C = Classification;
    using ET = EndpointType;
    IsoparametricFamily family(space, family_kind);
    const int n = family.n();
    if (r < 1 || r > n) throw Error(ErrorKind::InvalidArgument, "r must lie in 1..n = " + std::to_string(n));
    if (!(hr >= 0.0) || !std::isfinite(hr)) throw Error(ErrorKind::InvalidArgument, "H_r must be finite and >= 0");
    if (params.samples < 16) throw Error(ErrorKind::InvalidArgument, "samples must be >= 16");
    if (!(params.s_max > 0.0)) throw Error(ErrorKind::InvalidArgument, "s_max must be > 0");
    OdeCoefficients c(family, r, hr);
    const bool hyp = space.is_hyperbolic();
    const double s_max = params.s_max;
    const int N = params.samples;
    const auto method = params.method;

    HypersurfaceModel m;
    m.space = space;
    m.family = family_kind;
    m.r = r;
    m.hr = hr;
    m.scenario = sc;
    m.lambda = params.lambda;

    auto need_positive = [&] {
        if (!(hr > 0.0)) regime(std::string("scenario ") + scenario_name(sc) + " needs H_r > 0");
    };
    auto need_minimal = [&] {
        if (hr != 0.0) regime(std::string("scenario ") + scenario_name(sc) + " needs H_r = 0");
    };
    auto lambda_or = [&](double fallback) { return params.lambda.value_or(fallback); };
    auto check_below_smax = [&](double s, const char *what) {
        if (!(s < s_max)) regime(std::string(what) + " = " + num(s) + " must lie below s_max = " + num(s_max));
    };
    auto mirror_pair = [&](ProfileCurve curve, double mirror) {
        m.pieces.push_back(detail::piece(curve));
        m.pieces.push_back(detail::piece(std::move(curve), true, 2.0 * mirror));
        m.symmetry = mirror;
    };

    switch (sc) {
        case Scenario::Sphere: {
            detail::require_family(family_kind, FamilyKind::GeodesicSpheres, sc);
            need_positive();
            if (hyp) {
                double cf = c_limit(space, r);
                if (hr <= cf) {
                    regime("H_r <= C_F(r): no compact sphere exists (H_r = " + num(hr) + ", C_F(r) = " + num(cf) +
                           "); try scenario entire-graph");
                }
            }
            double hi = detail::upper_search(c);
            if (hyp && r == n) hi = 700.0;  // a ≡ 0: τ grows linearly and s0 ≈ 1/(n H_r)
            auto sol = solve_regular_at_zero(c, hi, method);
            double s0;
            try {
                s0 = scan_crossing(sol, 1.0, 1e-6, hi, hyp ? 0.25 : hi / 256);
            } catch (const Error &e) {
                if (hyp || e.kind() != ErrorKind::NoBracket) throw;
                // Only r = 2 gets here: τ grows like −log cos s, so the equator sits about exp(−1/b_r) below π/2.
                throw Error(ErrorKind::NoBracket, "tau = 1 is reached closer to the singular end " + num(hi) +
                                                      " than double precision resolves (tau there = " + num(sol(hi)) +
                                                      "); increase H_r");
            }
            std::vector<GridZone> zones{{0.0, s0, GridZone::Map::FineAtB}};
            if (hyp && s0 > 8.0) {
                // Large spheres (r = n, small H_r): keep the axis resolved.
                zones = {{0.0, s0 - 1.0, GridZone::Map::Geometric, -1.0}, {s0 - 1.0, s0, GridZone::Map::FineAtB}};
            }
            if (!hyp) {
                // Near the singular end R (π/2, or π when r = 1) τ′ varies on the scale d = R − s0;
                // grade geometrically toward R.
                double end = r > 1 ? std::numbers::pi / 2 : std::numbers::pi;
                double d = (end - s0) + (r > 1 ? 6.123233995736766e-17 : 1.2246467991473532e-16);
                double w = std::min(0.25, 0.5 * s0);
                if (d < 1e-9) {
                    throw Error(ErrorKind::OutOfRange, "the equator lies " + num(d) + " below " + num(end) +
                                                           ", beyond what double precision resolves; increase H_r");
                }
                if (d < w / 20) {
                    zones = {{0.0, s0 - w, GridZone::Map::Uniform}, {s0 - w, s0, GridZone::Map::Geometric, end}};
                }
            }
            auto curve = build_profile(sol, zones, ET::AxisPoint, ET::VerticalTangent, 0.0, N);
            double equator = curve.samples.back().phi;
            mirror_pair(std::move(curve), equator);
            m.classification = C::C1_Sphere;
            m.convexity = hyp ? Convexity::Strict : detail::sphere_convexity(n, r, hr);
            break;
        }
        case Scenario::EntireGraph: {
            detail::require_family(family_kind, FamilyKind::GeodesicSpheres, sc);
            detail::require_r_below_n(r, n, sc);
            need_positive();
            if (!hyp) regime("S^n x R has no entire graphs: every H_r > 0 gives a sphere");
            double cf = c_limit(space, r);
            if (hr > cf) {
                regime("H_r > C_F(r): the regular solution closes up into a sphere (H_r = " + num(hr) +
                       ", C_F(r) = " + num(cf) + ")");
            }
            auto sol = solve_regular_at_zero(c, s_max, method);
            auto curve = build_profile(sol, {{0.0, s_max}}, ET::AxisPoint, ET::Asymptotic, 0.0, N);
            m.pieces.push_back(detail::piece(std::move(curve)));
            m.classification = C::C2_EntireGraph;
            m.convexity = Convexity::Strict;
            break;
        }
        case Scenario::Delaunay:
        case Scenario::Annulus: {
            detail::require_family(family_kind, FamilyKind::GeodesicSpheres, sc);
            detail::require_r_below_n(r, n, sc);
            need_positive();
            bool compact_regime = !hyp || hr > c_limit(space, r);
            if (sc == Scenario::Delaunay && !compact_regime) {
                regime("H_r <= C_F(r): the solution through tau(lambda) = 1 never returns to 1 (H_r = " + num(hr) +
                       ", C_F(r) = " + num(c_limit(space, r)) + "); try scenario annulus");
            }
            if (sc == Scenario::Annulus && compact_regime) {
                regime(hyp ? "H_r > C_F(r): the block closes up; try scenario delaunay (H_r = " + num(hr) +
                                 ", C_F(r) = " + num(c_limit(space, r)) + ")"
                           : "S^n x R has no unbounded annuli; try scenario delaunay");
            }
            double delta = delta_hr(family, r, hr);
            double lambda = lambda_or(std::isfinite(delta) ? 0.5 * delta : 1.0);
            if (!(lambda > 0.0 && lambda < delta)) {
                regime("lambda must lie in (0, delta_{H_r}) = (0, " + num(delta) + "), got " + num(lambda));
            }
            m.lambda = lambda;
            if (sc == Scenario::Delaunay) {
                double hi = detail::upper_search(c);
                auto sol = solve_initial(c, lambda, 1.0, lambda, hi, method);
                double start = lambda + 1e-6 * std::max(1.0, lambda);
                double lbar = scan_crossing(sol, 1.0, start, hi, hyp ? 0.05 : (hi - lambda) / 256);
                auto curve = build_profile(sol, detail::vertical_zones(lambda, lbar, true, true), ET::VerticalTangent,
                                           ET::VerticalTangent, lambda, N);
                double top = curve.samples.back().phi;
                mirror_pair(std::move(curve), top);
                m.period = 2.0 * top;
                m.classification = C::C3_Delaunay;
            } else {
                check_below_smax(lambda, "lambda");
                auto sol = solve_initial(c, lambda, 1.0, lambda, s_max, method);
                auto curve = build_profile(sol, detail::vertical_zones(lambda, s_max, true, false),
                                           ET::VerticalTangent, ET::Asymptotic, lambda, N);
                mirror_pair(std::move(curve), 0.0);
                m.classification = C::C4_SymmetricUnboundedAnnulus;
            }
            break;
        }
        case Scenario::Catenoid: {
            detail::require_family(family_kind, FamilyKind::GeodesicSpheres, sc);
            detail::require_r_below_n(r, n, sc);
            need_minimal();
            if (!hyp) regime("catenoids live in H_F^m x R; in S^n x R try scenario minimal-delaunay");
            double lambda = lambda_or(1.0);
            if (!(lambda > 0.0)) regime("lambda must be > 0, got " + num(lambda));
            check_below_smax(lambda, "lambda");
            m.lambda = lambda;
            auto sol = solve_initial(c, lambda, 1.0, lambda, s_max, method);
            auto curve = build_profile(sol, detail::vertical_zones(lambda, s_max, true, false), ET::VerticalTangent,
                                       ET::Asymptotic, lambda, N);
            mirror_pair(std::move(curve), 0.0);
            m.classification = C::Catenoid;
            break;
        }
        case Scenario::MinimalDelaunay: {
            detail::require_family(family_kind, FamilyKind::GeodesicSpheres, sc);
            detail::require_r_below_n(r, n, sc);
            need_minimal();
            if (hyp) regime("minimal Delaunay-type annuli live in S^n x R; in H_F^m x R try scenario catenoid");
            double lambda = lambda_or(std::numbers::pi / 4);
            if (!(lambda > 0.0 && lambda < std::numbers::pi / 2)) {
                regime("lambda must lie in (0, pi/2), got " + num(lambda));
            }
            m.lambda = lambda;
            double hi = std::numbers::pi - 0.5 * lambda;
            auto sol = solve_initial(c, lambda, 1.0, lambda, hi, method);
            double lbar = find_crossing(sol, 1.0, std::numbers::pi / 2, hi);
            auto curve = build_profile(sol, detail::vertical_zones(lambda, lbar, true, true), ET::VerticalTangent,
                                       ET::VerticalTangent, lambda, N);
            double top = curve.samples.back().phi;
            mirror_pair(std::move(curve), top);
            m.period = 2.0 * top;
            m.classification = C::MinimalDelaunay;
            break;
        }
        case Scenario::HorosphereBigraph: {
            detail::require_family(family_kind, FamilyKind::Horospheres, sc);
            detail::require_r_below_n(r, n, sc);
            need_positive();
            if (r % 2 != 0) regime("r = " + std::to_string(r) + " is odd: horosphere-type bigraphs need even r");
            double h0 = horosphere_hr0(space, r);
            if (!(hr < h0)) regime("H_r must lie in (0, H_r^0) = (0, " + num(h0) + "), got " + num(hr));
            auto sol = solve_initial(c, 0.0, 1.0, -s_max, 0.0, method);
            auto curve = build_profile(sol, detail::vertical_zones(-s_max, 0.0, false, true), ET::Asymptotic,
                                       ET::VerticalTangent, 0.0, N);
            mirror_pair(std::move(curve), 0.0);
            m.classification = C::HorosphereBigraph;
            m.convexity = Convexity::Nonconvex;
            break;
        }
        case Scenario::EquidistantBigraph:
        case Scenario::EquidistantGraph: {
            detail::require_family(family_kind, FamilyKind::Equidistants, sc);
            detail::require_r_below_n(r, n, sc);
            need_positive();
            double cr = cr_constant(n, r);
            if (!(hr < cr)) regime("H_r must lie in (0, C_r) = (0, " + num(cr) + "), got " + num(hr));
            double sr = s_r_constant(n, r, hr);
            if (sc == Scenario::EquidistantBigraph) {
                double lambda = lambda_or(sr + 0.5);
                if (!(lambda > sr)) regime("lambda must exceed s_r = " + num(sr) + ", got " + num(lambda));
                check_below_smax(lambda, "lambda");
                m.lambda = lambda;
                auto sol = solve_initial(c, lambda, 1.0, lambda, s_max, method);
                auto curve = build_profile(sol, detail::vertical_zones(lambda, s_max, true, false),
                                           ET::VerticalTangent, ET::Asymptotic, lambda, N);
                mirror_pair(std::move(curve), 0.0);
                m.classification = C::EquidistantBigraph;
            } else {
                check_below_smax(sr + 1.0, "s_r + 1");
                m.lambda = sr;
                auto sol = solve_initial(c, sr, 1.0, sr, s_max, method);
                std::vector<GridZone> zones{{sr + params.asymptotic_offset, sr + 1.0, GridZone::Map::Geometric, sr},
                                            {sr + 1.0, s_max}};
                auto curve = build_profile(sol, zones, ET::Asymptotic, ET::Asymptotic, sr + 1.0, N, {sr});
                m.pieces.push_back(detail::piece(std::move(curve)));
                m.classification = C::EquidistantAsymptoticGraph;
            }
            m.convexity = Convexity::Nonconvex;
            break;
        }
        case Scenario::MinimalEquidistant: {
            detail::require_family(family_kind, FamilyKind::Equidistants, sc);
            detail::require_r_below_n(r, n, sc);
            need_minimal();
            double lambda = lambda_or(2.0);
            if (!(lambda > 0.0)) regime("lambda = tau(0) must be > 0, got " + num(lambda));
            m.lambda = lambda;
            if (lambda > 1.0) {
                double sl = std::acosh(std::pow(lambda, 1.0 / (n - r)));
                check_below_smax(sl, "s_lambda");
                auto sol = solve_initial(c, sl, 1.0, sl, s_max, method);
                auto curve = build_profile(sol, detail::vertical_zones(sl, s_max, true, false), ET::VerticalTangent,
                                           ET::Asymptotic, sl, N);
                mirror_pair(std::move(curve), 0.0);
                m.classification = C::MinimalEquidistantSlab;
            } else if (lambda == 1.0) {
                check_below_smax(1.0, "anchor s");
                auto sol = solve_initial(c, 0.0, 1.0, 0.0, s_max, method);
                std::vector<GridZone> zones{{params.asymptotic_offset, 1.0, GridZone::Map::Geometric, 0.0},
                                            {1.0, s_max}};
                auto curve = build_profile(sol, zones, ET::Asymptotic, ET::Asymptotic, 1.0, N, {0.0});
                m.pieces.push_back(detail::piece(std::move(curve)));
                m.classification = C::MinimalEquidistantAsymptotic;
            } else {
                auto sol = solve_initial(c, 0.0, lambda, -s_max, s_max, method);
                auto curve =
                    build_profile(sol, {{-s_max, 0.0}, {0.0, s_max}}, ET::Asymptotic, ET::Asymptotic, 0.0, N);
                m.pieces.push_back(detail::piece(std::move(curve)));
                m.classification = C::MinimalEquidistantSlab;
            }
            if (m.classification == C::MinimalEquidistantSlab) m.slab = detail::sup_abs_height(m);
            break;
        }
        case Scenario::MinimalParabolic: {
            detail::require_family(family_kind, FamilyKind::Horospheres, sc);
            detail::require_r_below_n(r, n, sc);
            need_minimal();
            auto sol = solve_initial(c, 0.0, 1.0, -s_max, 0.0, method);
            auto curve = build_profile(sol, detail::vertical_zones(-s_max, 0.0, false, true), ET::Asymptotic,
                                       ET::VerticalTangent, 0.0, N);
            mirror_pair(std::move(curve), 0.0);
            m.classification = C::MinimalParabolicSlab;
            m.slab = detail::sup_abs_height(m);
            break;
        }
        case Scenario::ConstantAngle: {
            if (family_kind == FamilyKind::GeodesicSpheres) {
                regime("constant-angle entire graphs are built over horospheres or equidistants");
            }
            if (r != n) regime("constant-angle graphs need r = n");
            need_minimal();
            double slope = lambda_or(1.0);
            if (!(slope > 0.0)) regime("lambda (the slope) must be > 0, got " + num(slope));
            m.lambda = slope;
            double rho = slope / std::sqrt(1.0 + slope * slope);
            auto sol = solve_initial(c, 0.0, std::pow(rho, n), -s_max, s_max, method);
            auto curve = build_profile(sol, {{-s_max, 0.0}, {0.0, s_max}}, ET::OpenEnd, ET::OpenEnd, 0.0, N);
            m.pieces.push_back(detail::piece(std::move(curve)));
            m.classification = C::MinimalEntireConstantAngle;
            break;
        }
        case Scenario::Cylinder: {
            double R = 0.0;
            if (r == n) {
                need_minimal();
                R = lambda_or(1.0);
            } else {
                switch (family_kind) {
                    case FamilyKind::GeodesicSpheres:
                        if (hr == 0.0) {
                            if (hyp) regime("no geodesic sphere of H_F^m has H_r = 0 for r < n");
                            R = std::numbers::pi / 2;
                        } else {
                            if (hyp && hr <= c_limit(space, r)) {
                                regime("H_r <= C_F(r): no geodesic sphere has H_r^s = H_r (C_F(r) = " +
                                       num(c_limit(space, r)) + ")");
                            }
                            R = delta_hr(family, r, hr);
                        }
                        break;
                    case FamilyKind::Horospheres: {
                        double h0 = horosphere_hr0(space, r);
                        if (!detail::close(hr, h0, 1e-12)) {
                            regime("horosphere cylinders need H_r = H_r^0 = " + num(h0) + ", got " + num(hr));
                        }
                        R = lambda_or(0.0);
                        break;
                    }
                    case FamilyKind::Equidistants: {
                        if (hr == 0.0) {
                            R = 0.0;
                            break;
                        }
                        double cr = cr_constant(n, r);
                        if (!(hr < cr)) regime("H_r must lie in [0, C_r) = [0, " + num(cr) + "), got " + num(hr));
                        R = s_r_constant(n, r, hr);
                        break;
                    }
                }
            }
            if (!family.in_domain(R)) regime("cylinder radius " + num(R) + " lies outside the family domain");
            m.lambda = R;
            m.pieces.push_back(detail::piece(detail::cylinder_curve(R)));
            m.classification = C::Cylinder;
            break;
        }
    }
    return m;
}

/// Vertical period 2(φ(λ̄) − φ(λ)) of a Delaunay-type block.
inline double delaunay_period(const HypersurfaceModel &m) {
    if (m.classification != Classification::C3_Delaunay && m.classification != Classification::MinimalDelaunay) {
        throw Error(ErrorKind::NotApplicable, std::string("no period for ") + classification_name(m.classification));
    }
    const auto &s = m.pieces.front().curve.samples;
    return 2.0 * (s.back().phi - s.front().phi);
}

/// sup |height| of a slab model; +∞ for the constant-angle entire graph.
inline double slab_halfwidth(const HypersurfaceModel &m) {
    switch (m.classification) {
        case Classification::MinimalEquidistantSlab:
        case Classification::MinimalParabolicSlab: return detail::sup_abs_height(m);
        case Classification::MinimalEntireConstantAngle: return kInf;
        default:
            throw Error(ErrorKind::NotApplicable,
                        std::string("slab half-width is undefined for ") + classification_name(m.classification));
    }
}

}  // namespace hrsurf
