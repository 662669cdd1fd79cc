#include "hrsurf/verify.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace hrsurf;

namespace {

const double kPi = std::numbers::pi;
const AmbientSpace H3 = AmbientSpace::hyperbolic(Field::R, 3);
const AmbientSpace S3 = AmbientSpace::sphere(3);
const AmbientSpace HC2 = AmbientSpace::hyperbolic(Field::C, 2);

HypersurfaceModel build(const AmbientSpace &space, FamilyKind f, int r, double hr, Scenario sc,
                        std::optional<double> lambda = std::nullopt, int samples = 1024) {
    ConstructParams p;
    p.lambda = lambda;
    p.samples = samples;
    return construct(space, f, r, hr, sc, p);
}

const CheckResult &check(const VerificationReport &rep, const std::string &name) {
    for (const auto &c : rep.checks) {
        if (c.name == name) return c;
    }
    throw std::runtime_error("no check " + name);
}

}  // namespace

TEST(FdWeights, ExactOnPolynomials) {
    std::vector<double> x{0.0, 0.1, 0.35, 0.4, 0.9};
    for (double z : {0.0, 0.3, 0.9}) {
        auto w = fd_weights(x, z);
        for (int deg = 0; deg <= 4; deg++) {
            double d = 0.0;
            for (size_t i = 0; i < x.size(); i++) d += w[i] * std::pow(x[i], deg);
            double exact = deg == 0 ? 0.0 : deg * std::pow(z, deg - 1);
            EXPECT_NEAR(d, exact, 1e-11) << "deg " << deg << " z " << z;
        }
    }
}

TEST(FdRhoPrime, SineProfile) {
    ProfileCurve c;
    for (int i = 0; i <= 400; i++) {
        double s = 0.5 + 1.5 * (1 - std::cos(kPi * i / 400)) / 2;
        c.samples.push_back({s, 0, std::sin(s), 0, 0});
    }
    auto d = fd_rho_prime(c);
    for (size_t i = 0; i < d.size(); i++) EXPECT_NEAR(d[i], std::cos(c.samples[i].s), 1e-9) << c.samples[i].s;
}

TEST(VerifyConstancy, PassesOnSphereAndRejectsPerturbation) {
    auto m = build(H3, FamilyKind::GeodesicSpheres, 1, 4.0, Scenario::Sphere);
    auto rep = verify_constancy(m);
    EXPECT_TRUE(rep.passed()) << rep.max_hr_residual;
    EXPECT_TRUE(rep.relative);
    EXPECT_EQ(rep.tol, 1e-8);
    EXPECT_LE(rep.max_two_route_gap, 1e-10);
    EXPECT_LE(rep.max_rho_prime_mismatch, 1e-6);

    // A 1% bump in ρ must not survive.
    auto bad = m;
    for (auto &piece : bad.pieces) {
        for (auto &p : piece.curve.samples) p.rho = std::min(1.0, p.rho * 1.01);
    }
    auto rb = verify_constancy(bad);
    EXPECT_FALSE(rb.passed());
    EXPECT_GT(rb.max_hr_residual, 1e-3);
    EXPECT_FALSE(check(rb, "hr_constancy").pass);
    EXPECT_NE(check(rb, "hr_constancy").detail.find("at s ="), std::string::npos);
}

TEST(VerifyConstancy, DetectsOutOfRangeAndDecreasingHeight) {
    auto m = build(S3, FamilyKind::GeodesicSpheres, 1, 2.0, Scenario::Sphere, std::nullopt, 256);
    auto bad = m;
    bad.pieces[0].curve.samples[10].rho = 1.5;
    EXPECT_FALSE(check(verify_constancy(bad), "rho_range").pass);
    bad = m;
    bad.pieces[0].curve.samples[20].phi = -1.0;
    EXPECT_FALSE(check(verify_constancy(bad), "phi_monotone").pass);
}

TEST(VerifyConstancy, MinimalUsesAbsoluteTolerance) {
    auto m = build(H3, FamilyKind::GeodesicSpheres, 1, 0.0, Scenario::Catenoid, 1.0);
    auto rep = verify_constancy(m);
    EXPECT_FALSE(rep.relative);
    EXPECT_EQ(rep.tol, 1e-9);
    EXPECT_TRUE(rep.passed()) << rep.max_hr_residual;
}

TEST(VerifyConstancy, CylinderIsExact) {
    auto m = build(H3, FamilyKind::GeodesicSpheres, 1, 4.0, Scenario::Cylinder);
    auto rep = verify_constancy(m);
    EXPECT_TRUE(rep.passed());
    EXPECT_LT(rep.max_hr_residual, 1e-12);
    auto hz = build(HC2, FamilyKind::Horospheres, 2, horosphere_hr0(HC2, 2), Scenario::Cylinder);
    EXPECT_LT(verify_constancy(hz).max_hr_residual, 1e-12);
}

TEST(VerifyConstancy, PeriodShiftDoesNotMatter) {
    auto m = build(S3, FamilyKind::GeodesicSpheres, 1, 2.0, Scenario::Delaunay);
    auto shifted = m;
    for (auto &piece : shifted.pieces) piece.placement.offset += 3 * *m.period;
    auto a = verify_constancy(m), b = verify_constancy(shifted);
    EXPECT_EQ(a.max_hr_residual, b.max_hr_residual);
    EXPECT_TRUE(a.passed());
    // The reflected copy meets the first block at the top crossing.
    const auto &c = m.pieces[0].curve;
    EXPECT_NEAR(m.pieces[1].placement.height(c.samples.back().phi),
                m.pieces[0].placement.height(c.samples.back().phi), 1e-14);
}

TEST(Convexity, HyperbolicSphereStrict) {
    auto m = build(H3, FamilyKind::GeodesicSpheres, 1, 4.0, Scenario::Sphere);
    auto cp = verify_convexity(m);
    EXPECT_EQ(cp.aggregate(), Convexity::Strict);
    EXPECT_EQ(cp.nonconvex + cp.convex, 0u);
}

TEST(Convexity, SphericalSphereBelowThresholdTurnsAtEquator) {
    double h = 0.5 / sn_constant(3);
    auto m = build(S3, FamilyKind::GeodesicSpheres, 1, h, Scenario::Sphere);
    ASSERT_GT(m.pieces[0].curve.hi(), kPi / 2);
    auto cp = verify_convexity(m);
    EXPECT_EQ(cp.aggregate(), Convexity::Nonconvex);
    const auto &smp = m.pieces[0].curve.samples;
    for (size_t i = 0; i < smp.size(); i++) {
        if (std::abs(smp[i].s - kPi / 2) < 1e-9) continue;
        EXPECT_EQ(cp.per_piece[0][i] == Convexity::Nonconvex, smp[i].s > kPi / 2) << smp[i].s;
    }
    auto strict = build(S3, FamilyKind::GeodesicSpheres, 1, 2.0 / sn_constant(3), Scenario::Sphere);
    EXPECT_EQ(verify_convexity(strict).aggregate(), Convexity::Strict);
}

TEST(Convexity, EquidistantAndHorosphereSigns) {
    auto e = build(H3, FamilyKind::Equidistants, 1, 1.0, Scenario::EquidistantBigraph);
    // Far out ρ′ decays below the roundoff of aτ + b, so stay within a few units of the vertical end.
    for (const auto &p : e.pieces[0].curve.samples) {
        if (p.rho >= 1.0 || p.s > *e.lambda + 5) continue;
        auto k = principal_curvatures(e, p);
        EXPECT_LT(k.front(), 0.0) << p.s;
        for (size_t i = 1; i < k.size(); i++) EXPECT_GT(k[i], 0.0) << p.s;
    }
    auto h = build(HC2, FamilyKind::Horospheres, 2, horosphere_hr0(HC2, 2) / 2, Scenario::HorosphereBigraph);
    for (const auto &p : h.pieces[0].curve.samples) {
        if (p.rho >= 1.0 || p.s < -5) continue;
        auto k = principal_curvatures(h, p);
        ASSERT_EQ(k.size(), 4u);
        for (size_t i = 0; i + 1 < k.size(); i++) EXPECT_LT(k[i], 0.0) << p.s;
        EXPECT_GT(k.back(), 0.0) << p.s;
    }
}

TEST(HeightEstimate, HoldsOnConvexSpheres) {
    for (auto m : {build(H3, FamilyKind::GeodesicSpheres, 1, 4.0, Scenario::Sphere),
                   build(S3, FamilyKind::GeodesicSpheres, 2, 3.0, Scenario::Sphere),
                   build(S3, FamilyKind::GeodesicSpheres, 1, 2.0, Scenario::Sphere)}) {
        auto est = verify_height_estimate(m);
        EXPECT_TRUE(est.pass);
        EXPECT_GE(est.slack, 0.0);
        EXPECT_GT(est.height, 0.0);
        EXPECT_DOUBLE_EQ(est.slack, est.bound - est.height);
    }
}

TEST(HeightEstimate, NotApplicableElsewhere) {
    auto h = build(HC2, FamilyKind::Horospheres, 2, horosphere_hr0(HC2, 2) / 2, Scenario::HorosphereBigraph, {}, 256);
    try {
        verify_height_estimate(h);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotApplicable);
    }
    auto nc = build(S3, FamilyKind::GeodesicSpheres, 1, 0.5 / sn_constant(3), Scenario::Sphere, {}, 256);
    EXPECT_THROW(verify_height_estimate(nc), Error);
}

TEST(VerifyConstancy, HigherOrderSpheres) {
    struct Case {
        AmbientSpace space;
        int r;
        double hr;
    };
    for (const auto &c : {Case{AmbientSpace::sphere(4), 2, 0.3}, Case{AmbientSpace::sphere(5), 4, 0.01},
                          Case{AmbientSpace::sphere(6), 6, 100.0}, Case{AmbientSpace::sphere(2), 1, 0.01},
                          Case{AmbientSpace::hyperbolic(Field::R, 2), 2, 1e-3},
                          Case{AmbientSpace::hyperbolic(Field::R, 6), 6, 1e-3}}) {
        auto m = build(c.space, FamilyKind::GeodesicSpheres, c.r, c.hr, Scenario::Sphere, std::nullopt, 2048);
        auto rep = verify_constancy(m);
        EXPECT_LE(rep.max_hr_residual, c.space.is_hyperbolic() || c.r > 1 ? 1e-8 : 1e-7)
            << c.space.spec() << " r=" << c.r << " H=" << c.hr;
    }
    // The r = 2 equator sits about exp(−1/b_r) below π/2; far enough out it is unrepresentable.
    EXPECT_THROW(build(AmbientSpace::sphere(4), FamilyKind::GeodesicSpheres, 2, 0.01, Scenario::Sphere), Error);
}
