#pragma once

// Profile files ("hrsurf/1" JSON), CSV tables and OBJ meshes of n = 2 rotational models.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "hrsurf/profile.hpp"
#include "hrsurf/verify.hpp"

namespace hrsurf {

using ojson = nlohmann::ordered_json;

inline constexpr const char *kProfileSchema = "hrsurf/1";

namespace detail {

// Non-finite values are written as null. The only one a model carries is +∞
// (vertical slope, unbounded slab), so null reads back as +∞.
inline ojson jnum(double x) { return std::isfinite(x) ? ojson(x) : ojson(nullptr); }

inline double jget(const ojson &j) {
    if (j.is_null()) return kInf;
    if (!j.is_number()) throw Error(ErrorKind::InvalidArgument, "expected a number, got " + j.dump());
    return j.get<double>();
}

inline const ojson &field(const ojson &j, const char *key) {
    auto it = j.find(key);
    if (it == j.end()) throw Error(ErrorKind::InvalidArgument, std::string("profile is missing '") + key + "'");
    return *it;
}

}  // namespace detail

inline ojson profile_to_json(const HypersurfaceModel &m) {
    ojson j;
    j["schema"] = kProfileSchema;
    j["space"] = m.space.spec();
    j["family"] = family_name(m.family);
    j["r"] = m.r;
    j["hr"] = m.hr;
    j["scenario"] = scenario_name(m.scenario);
    j["classification"] = classification_name(m.classification);
    if (m.lambda) j["lambda"] = detail::jnum(*m.lambda);
    if (m.convexity) j["convexity"] = convexity_name(*m.convexity);
    if (m.symmetry) j["symmetry"] = detail::jnum(*m.symmetry);
    if (m.period) j["period"] = detail::jnum(*m.period);
    if (m.slab) j["slab_halfwidth"] = detail::jnum(*m.slab);
    ojson pieces = ojson::array();
    for (const auto &p : m.pieces) {
        ojson jp;
        jp["placement"] = {{"reflect", p.placement.reflect}, {"offset", p.placement.offset}};
        jp["endpoints"] = {endpoint_name(p.curve.lo_type), endpoint_name(p.curve.hi_type)};
        ojson smp = ojson::array();
        for (const auto &s : p.curve.samples) {
            smp.push_back({{"s", detail::jnum(s.s)},
                           {"tau", detail::jnum(s.tau)},
                           {"rho", detail::jnum(s.rho)},
                           {"phi", detail::jnum(s.phi)},
                           {"phi_prime", detail::jnum(s.phi_prime)}});
        }
        jp["samples"] = std::move(smp);
        pieces.push_back(std::move(jp));
    }
    j["pieces"] = std::move(pieces);
    return j;
}

/// Deterministic text: fixed key order, shortest round-trip numbers, trailing newline.
inline std::string write_profile(const HypersurfaceModel &m) { return profile_to_json(m).dump(1) + "\n"; }

/// Throws nlohmann::json::exception on malformed JSON and Error(InvalidArgument) on a schema mismatch.
inline HypersurfaceModel profile_from_json(const ojson &j) {
    using detail::field;
    using detail::jget;
    if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, "profile must be a JSON object");
    if (field(j, "schema") != kProfileSchema) {
        throw Error(ErrorKind::InvalidArgument, "unsupported schema " + field(j, "schema").dump());
    }
    HypersurfaceModel m;
    m.space = AmbientSpace::parse(field(j, "space").get<std::string>());
    m.family = parse_family(field(j, "family").get<std::string>());
    m.r = field(j, "r").get<int>();
    m.hr = jget(field(j, "hr"));
    m.scenario = parse_scenario(field(j, "scenario").get<std::string>());
    m.classification = parse_classification(field(j, "classification").get<std::string>());
    if (m.r < 1 || m.r > m.space.n) throw Error(ErrorKind::InvalidArgument, "r out of range for the space");
    if (j.contains("lambda")) m.lambda = jget(j["lambda"]);
    if (j.contains("convexity")) m.convexity = parse_convexity(j["convexity"].get<std::string>());
    if (j.contains("symmetry")) m.symmetry = jget(j["symmetry"]);
    if (j.contains("period")) m.period = jget(j["period"]);
    if (j.contains("slab_halfwidth")) m.slab = jget(j["slab_halfwidth"]);
    for (const auto &jp : field(j, "pieces")) {
        ModelPiece p;
        const auto &pl = field(jp, "placement");
        p.placement.reflect = field(pl, "reflect").get<bool>();
        p.placement.offset = jget(field(pl, "offset"));
        const auto &ends = field(jp, "endpoints");
        if (!ends.is_array() || ends.size() != 2) throw Error(ErrorKind::InvalidArgument, "endpoints must be a pair");
        p.curve.lo_type = parse_endpoint(ends[0].get<std::string>());
        p.curve.hi_type = parse_endpoint(ends[1].get<std::string>());
        for (const auto &js : field(jp, "samples")) {
            p.curve.samples.push_back({jget(field(js, "s")), jget(field(js, "tau")), jget(field(js, "rho")),
                                       jget(field(js, "phi")), jget(field(js, "phi_prime"))});
        }
        if (p.curve.samples.empty()) throw Error(ErrorKind::InvalidArgument, "piece without samples");
        m.pieces.push_back(std::move(p));
    }
    if (m.pieces.empty()) throw Error(ErrorKind::InvalidArgument, "profile has no pieces");
    return m;
}

inline HypersurfaceModel read_profile(const std::string &text) { return profile_from_json(ojson::parse(text)); }

inline ojson report_to_json(const VerificationReport &rep) {
    ojson j;
    j["schema"] = "hrsurf-report/1";
    j["passed"] = rep.passed();
    j["tol"] = rep.tol;
    j["relative"] = rep.relative;
    j["max_hr_residual"] = detail::jnum(rep.max_hr_residual);
    j["residual_location"] = detail::jnum(rep.residual_location);
    j["max_rho_prime_mismatch"] = detail::jnum(rep.max_rho_prime_mismatch);
    j["max_two_route_gap"] = detail::jnum(rep.max_two_route_gap);
    ojson checks = ojson::array();
    for (const auto &c : rep.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    j["checks"] = std::move(checks);
    return j;
}

// ---------------------------------------------------------------------------
// CSV

/// Shortest round-trip decimal.
inline std::string shortest(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

/// One row per stored sample, pieces in order; phi is the placed height.
inline void write_csv(const HypersurfaceModel &m, std::ostream &os) {
    os << "s,tau,rho,phi,theta,k_min,k_max\r\n";
    for (const auto &piece : m.pieces) {
        const auto &smp = piece.curve.samples;
        bool cyl = detail::is_cylinder(piece.curve);
        for (size_t i = 0; i < smp.size(); i++) {
            const auto &p = smp[i];
            const auto &q = (p.s == 0.0 && m.family == FamilyKind::GeodesicSpheres && smp.size() > 1) ? smp[1] : p;
            auto k = principal_curvatures(m, q, cyl);
            os << shortest(p.s) << ',' << shortest(p.tau) << ',' << shortest(p.rho) << ','
               << shortest(piece.placement.height(p.phi)) << ',' << shortest(angle_from_slope(p.phi_prime)) << ','
               << shortest(k.front()) << ',' << shortest(k.back()) << "\r\n";
        }
    }
}

// ---------------------------------------------------------------------------
// OBJ

struct Mesh {
    std::vector<std::array<double, 3>> vertices;
    std::vector<std::array<int, 3>> triangles;  // 0-based
};

struct ObjOptions {
    int azimuthal = 128;
    int profile_points = 256;  // target count along each profile polyline
};

namespace detail {

struct ChartPoint {
    double radius;  // chart radius of the leaf circle
    double z;
    bool axis;
};

/// Radial chart of the base surface: Poincaré disk tanh(s/2) on ℍ², geodesic polar radius s on S².
inline double chart_radius(const AmbientSpace &space, double s) {
    return space.is_hyperbolic() ? std::tanh(s / 2) : s;
}

/// Joins pieces that share an endpoint into polylines in the (radius, z) chart.
inline std::vector<std::vector<ChartPoint>> profile_polylines(const HypersurfaceModel &m) {
    std::vector<std::vector<ChartPoint>> lines;
    auto same = [](const ChartPoint &a, const ChartPoint &b) {
        return std::abs(a.radius - b.radius) <= 1e-12 && std::abs(a.z - b.z) <= 1e-12 * std::max(1.0, std::abs(a.z));
    };
    for (const auto &piece : m.pieces) {
        std::vector<ChartPoint> pts;
        for (const auto &p : piece.curve.samples) {
            pts.push_back({chart_radius(m.space, p.s), piece.placement.height(p.phi), p.s == 0.0});
        }
        if (!lines.empty()) {
            auto &cur = lines.back();
            if (same(cur.back(), pts.front())) {
                cur.insert(cur.end(), pts.begin() + 1, pts.end());
                continue;
            }
            if (same(cur.back(), pts.back())) {
                cur.insert(cur.end(), pts.rbegin() + 1, pts.rend());
                continue;
            }
        }
        lines.push_back(std::move(pts));
    }
    return lines;
}

/// Keeps points at least `h` apart in the chart; the last point always survives.
inline std::vector<ChartPoint> thin(const std::vector<ChartPoint> &pts, int target) {
    double length = 0.0;
    for (size_t i = 1; i < pts.size(); i++) length += std::hypot(pts[i].radius - pts[i - 1].radius, pts[i].z - pts[i - 1].z);
    double h = length / std::max(1, target);
    std::vector<ChartPoint> out{pts.front()};
    for (size_t i = 1; i + 1 < pts.size(); i++) {
        if (std::hypot(pts[i].radius - out.back().radius, pts[i].z - out.back().z) >= h) out.push_back(pts[i]);
    }
    if (out.size() > 1 &&
        std::hypot(pts.back().radius - out.back().radius, pts.back().z - out.back().z) < 0.5 * h) {
        out.pop_back();
    }
    out.push_back(pts.back());
    return out;
}

}  // namespace detail

/// Surface of revolution over S² or ℍ² (Poincaré disk), z = height.
inline Mesh revolution_mesh(const HypersurfaceModel &m, ObjOptions opt = {}) {
    bool ok = m.space.n == 2 && m.space.field == Field::R && m.family == FamilyKind::GeodesicSpheres;
    if (!ok) {
        throw Error(ErrorKind::UnsupportedExport, "obj export needs a rotational model in hfm:R:2 or sn:2; got " +
                                                      m.space.spec() + " with " + family_name(m.family));
    }
    if (opt.azimuthal < 3) throw Error(ErrorKind::InvalidArgument, "azimuthal resolution must be >= 3");
    Mesh mesh;
    const int N = opt.azimuthal;
    for (const auto &line : detail::profile_polylines(m)) {
        auto pts = detail::thin(line, opt.profile_points);
        std::vector<int> first_index;  // first vertex of each ring (or the pole)
        for (const auto &p : pts) {
            first_index.push_back(static_cast<int>(mesh.vertices.size()));
            if (p.axis) {
                mesh.vertices.push_back({0.0, 0.0, p.z});
                continue;
            }
            for (int k = 0; k < N; k++) {
                double a = 2 * std::numbers::pi * k / N;
                mesh.vertices.push_back({p.radius * std::cos(a), p.radius * std::sin(a), p.z});
            }
        }
        for (size_t i = 0; i + 1 < pts.size(); i++) {
            int a0 = first_index[i], b0 = first_index[i + 1];
            for (int k = 0; k < N; k++) {
                int k1 = (k + 1) % N;
                if (pts[i].axis) {
                    mesh.triangles.push_back({a0, b0 + k, b0 + k1});
                } else if (pts[i + 1].axis) {
                    mesh.triangles.push_back({a0 + k, b0, a0 + k1});
                } else {
                    mesh.triangles.push_back({a0 + k, b0 + k, b0 + k1});
                    mesh.triangles.push_back({a0 + k, b0 + k1, a0 + k1});
                }
            }
        }
    }
    return mesh;
}

/// V − E + F.
inline long euler_characteristic(const Mesh &mesh) {
    std::set<std::pair<int, int>> edges;
    for (const auto &t : mesh.triangles) {
        for (int e = 0; e < 3; e++) {
            int a = t[e], b = t[(e + 1) % 3];
            edges.insert({std::min(a, b), std::max(a, b)});
        }
    }
    return static_cast<long>(mesh.vertices.size()) - static_cast<long>(edges.size()) +
           static_cast<long>(mesh.triangles.size());
}

inline double min_triangle_area(const Mesh &mesh) {
    double best = kInf;
    for (const auto &t : mesh.triangles) {
        const auto &a = mesh.vertices[t[0]], &b = mesh.vertices[t[1]], &c = mesh.vertices[t[2]];
        double u[3], v[3];
        for (int i = 0; i < 3; i++) {
            u[i] = b[i] - a[i];
            v[i] = c[i] - a[i];
        }
        double cx = u[1] * v[2] - u[2] * v[1], cy = u[2] * v[0] - u[0] * v[2], cz = u[0] * v[1] - u[1] * v[0];
        best = std::min(best, 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz));
    }
    return best;
}

inline void write_obj(const HypersurfaceModel &m, const Mesh &mesh, std::ostream &os) {
    os << "# hrsurf surface of revolution: " << m.space.spec() << " r=" << shortest(m.r) << " H_r=" << shortest(m.hr)
       << " " << classification_name(m.classification) << "\n";
    if (m.space.is_hyperbolic()) {
        os << "# chart: Poincare disk model of H^2 in the (x, y) plane (leaf at distance s has radius tanh(s/2)),\n"
              "# z = height. The disk chart is a visualization convention only; it is not isometric.\n";
    } else {
        os << "# chart: geodesic polar coordinates on S^2 around the axis point (leaf at distance s has radius s),\n"
              "# z = height. The chart is a visualization convention only; it is not isometric.\n";
    }
    for (const auto &v : mesh.vertices) {
        os << "v " << shortest(v[0]) << ' ' << shortest(v[1]) << ' ' << shortest(v[2]) << '\n';
    }
    for (const auto &t : mesh.triangles) os << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

}  // namespace hrsurf
