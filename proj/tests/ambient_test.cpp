#include "hrsurf/ambient.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace hrsurf;

namespace {

std::vector<AmbientSpace> catalog_hyperbolic(int max_n = 16) {
    std::vector<AmbientSpace> out;
    for (Field f : {Field::R, Field::C, Field::K, Field::O}) {
        for (int m = 1; m * field_dim(f) <= max_n; m++) {
            if (f == Field::O && m != 2) continue;
            if (f == Field::R && m < 2) continue;
            out.push_back(AmbientSpace::hyperbolic(f, m));
        }
    }
    return out;
}

}  // namespace

TEST(ambient, space_parsing) {
    auto h = AmbientSpace::parse("hfm:C:2");
    EXPECT_EQ(h.n, 4);
    EXPECT_EQ(h.spec(), "hfm:C:2");
    EXPECT_EQ(AmbientSpace::parse("hfm:O:2").n, 16);
    EXPECT_EQ(AmbientSpace::parse("sn:3").n, 3);
    EXPECT_THROW(AmbientSpace::parse("hfm:O:3"), Error);
    EXPECT_THROW(AmbientSpace::parse("hfm:R:1"), Error);
    EXPECT_THROW(AmbientSpace::parse("sn:x"), Error);
    EXPECT_THROW(AmbientSpace::parse("torus"), Error);
    EXPECT_THROW(IsoparametricFamily(AmbientSpace::sphere(3), FamilyKind::Horospheres), Error);
    EXPECT_THROW(IsoparametricFamily(AmbientSpace::hyperbolic(Field::C, 2), FamilyKind::Equidistants), Error);
}

TEST(ambient, leaf_hr_closed_forms) {
    for (int n = 2; n <= 8; n++) {
        IsoparametricFamily fam(AmbientSpace::hyperbolic(Field::R, n), FamilyKind::GeodesicSpheres);
        for (int r = 0; r < n; r++) {
            double s = 0.7;
            double expected = std::pow(-1.0, r) * binomial(n - 1, r) * std::pow(1 / std::tanh(s), r);
            EXPECT_NEAR(leaf_hr(fam, r, s), expected, 1e-13 * std::abs(expected));
        }
    }
    for (int m = 1; m <= 6; m++) {
        IsoparametricFamily fam(AmbientSpace::hyperbolic(Field::C, m), FamilyKind::GeodesicSpheres);
        int n = 2 * m;
        double s = 1.3;
        double expected = std::pow(-1.0, n - 1) / std::tanh(s) * std::pow(1 / std::tanh(s / 2), n - 2) / std::pow(2.0, n - 2);
        EXPECT_NEAR(leaf_hr(fam, n - 1, s), expected, 1e-13 * std::abs(expected));
    }
    IsoparametricFamily s3(AmbientSpace::sphere(3), FamilyKind::GeodesicSpheres);
    EXPECT_NEAR(leaf_hr(s3, 1, std::numbers::pi / 2), 0.0, 1e-15);
    EXPECT_NEAR(leaf_hr(s3, 2, std::numbers::pi / 2), 0.0, 1e-15);
    EXPECT_THROW(leaf_hr(s3, 1, 4.0), Error);
    EXPECT_THROW(leaf_hr(s3, 1, 0.0), Error);
}

TEST(ambient, named_constants) {
    EXPECT_EQ(c_limit(AmbientSpace::hyperbolic(Field::R, 3), 1), 2.0);
    EXPECT_EQ(c_limit(AmbientSpace::hyperbolic(Field::C, 2), 3), 0.25);
    for (const auto &sp : catalog_hyperbolic()) EXPECT_EQ(c_limit(sp, sp.n), 0.0);
    EXPECT_EQ(cr_constant(3, 1), 2.0);
    EXPECT_EQ(cr_constant(4, 3), 1.0);
    EXPECT_NEAR(s_r_constant(3, 1, 1.0), 0.5493061443340549, 1e-12);
    EXPECT_THROW(s_r_constant(3, 1, 2.0), Error);
    EXPECT_THROW(s_r_constant(3, 1, 0.0), Error);
    EXPECT_LT(s_r_constant(3, 1, 1e-9), 1e-8);
    EXPECT_GT(s_r_constant(3, 1, 2.0 - 1e-12), 10.0);
    EXPECT_EQ(horosphere_hr0(AmbientSpace::hyperbolic(Field::C, 2), 1), 2.0);
    EXPECT_EQ(horosphere_hr0(AmbientSpace::hyperbolic(Field::C, 2), 0), 1.0);
    for (int n = 2; n <= 10; n++) {
        for (int r = 1; r < n; r++) {
            EXPECT_EQ(horosphere_hr0(AmbientSpace::hyperbolic(Field::R, n), r), binomial(n - 1, r));
            // (n−r)/b_r = C_r/H_r for any H_r.
            double hr = 0.37;
            EXPECT_NEAR((n - r) / b_r_constant(n, r, hr), cr_constant(n, r) / hr, 1e-12 * cr_constant(n, r) / hr);
        }
    }
    EXPECT_NEAR(sn_constant(3), std::numbers::pi / 4, 1e-15);
    EXPECT_NEAR(sn_constant(2), 1.0, 1e-15);
}

TEST(ambient, delta) {
    IsoparametricFamily s3(AmbientSpace::sphere(3), FamilyKind::GeodesicSpheres);
    EXPECT_NEAR(delta_hr(s3, 1, 2.0), std::numbers::pi / 4, 1e-15);
    IsoparametricFamily h3(AmbientSpace::hyperbolic(Field::R, 3), FamilyKind::GeodesicSpheres);
    EXPECT_EQ(delta_hr(h3, 1, 2.0), kInf);
    EXPECT_EQ(delta_hr(h3, 1, 1.0), kInf);
    EXPECT_NEAR(delta_hr(h3, 1, 4.0), std::atanh(0.5), 1e-10);
    IsoparametricFamily hc(AmbientSpace::hyperbolic(Field::C, 3), FamilyKind::GeodesicSpheres);
    double d = delta_hr(hc, 2, 10.0);
    EXPECT_NEAR(std::abs(leaf_hr(hc, 2, d)), 10.0, 1e-9);
}

TEST(ambient, small_s_leading_term) {
    IsoparametricFamily h3(AmbientSpace::hyperbolic(Field::R, 3), FamilyKind::GeodesicSpheres);
    EXPECT_NEAR(small_s_asymptotics_check(h3, 1, 1e-4), 2.0, 2e-3);
    IsoparametricFamily hc(AmbientSpace::hyperbolic(Field::C, 2), FamilyKind::GeodesicSpheres);
    EXPECT_NEAR(small_s_asymptotics_check(hc, 2, 1e-4), 3.0, 3e-2);
    IsoparametricFamily s3(AmbientSpace::sphere(3), FamilyKind::GeodesicSpheres);
    EXPECT_NEAR(small_s_asymptotics_check(s3, 1, 1e-4), 2.0, 2e-3);
}

TEST(ambient, sphere_coefficients_monotone) {
    // a and b are nondecreasing on ℍ_F^m geodesic spheres; a < 0 for r < n, a = 0 for r = n.
    for (const auto &sp : catalog_hyperbolic(8)) {
        IsoparametricFamily fam(sp, FamilyKind::GeodesicSpheres);
        for (int r = 1; r <= sp.n; r++) {
            OdeCoefficients c(fam, r, 1.5);
            for (double ls = std::log(1e-2); ls <= std::log(50.0); ls += 0.1) {
                double s = std::exp(ls);
                double h = 1e-5 * s;
                double da = (c.a(s + h) - c.a(s - h)) / (2 * h);
                double db = (c.b(s + h) - c.b(s - h)) / (2 * h);
                double tol = 1e-6 * (1 + std::abs(c.a(s)) + std::abs(c.b(s))) / s;
                EXPECT_GE(da, -tol) << sp.spec() << " r=" << r << " s=" << s;
                EXPECT_GE(db, -tol) << sp.spec() << " r=" << r << " s=" << s;
                if (s < 10) {
                    EXPECT_GT(da + db, 0.0) << sp.spec() << " r=" << r << " s=" << s;
                }
                if (r < sp.n) {
                    EXPECT_LT(c.a(s), 0.0);
                }
                if (r == sp.n) {
                    EXPECT_EQ(c.a(s), 0.0);
                }
                if (r == 1) {
                    EXPECT_EQ(c.b(s), 1.5);
                }
            }
        }
    }
}

TEST(ambient, general_form_of_coefficients) {
    // a = r H_r^s / H_{r−1}^s, b = (−1)^{r−1} r H / H_{r−1}^s.
    std::vector<std::pair<IsoparametricFamily, double>> cases = {
        {IsoparametricFamily(AmbientSpace::hyperbolic(Field::K, 2), FamilyKind::GeodesicSpheres), 0.9},
        {IsoparametricFamily(AmbientSpace::hyperbolic(Field::R, 5), FamilyKind::GeodesicSpheres), 2.2},
        {IsoparametricFamily(AmbientSpace::sphere(5), FamilyKind::GeodesicSpheres), 1.2},
        {IsoparametricFamily(AmbientSpace::hyperbolic(Field::R, 5), FamilyKind::Equidistants), 0.8},
        {IsoparametricFamily(AmbientSpace::hyperbolic(Field::C, 3), FamilyKind::Horospheres), 0.4},
    };
    for (const auto &[fam, s] : cases) {
        int n = fam.n();
        for (int r = 1; r < n; r++) {
            double H = 0.75;
            OdeCoefficients c(fam, r, H);
            double hr = leaf_hr(fam, r, s);
            double hrm1 = leaf_hr(fam, r - 1, s);
            double a = r * hr / hrm1;
            double b = std::pow(-1.0, r - 1) * r * H / hrm1;
            EXPECT_NEAR(c.a(s), a, 1e-13 * std::abs(a) + 1e-15);
            EXPECT_NEAR(c.b(s), b, 1e-13 * std::abs(b));
        }
    }
}

TEST(ambient, limits_at_infinity) {
    for (const auto &sp : catalog_hyperbolic()) {
        IsoparametricFamily fam(sp, FamilyKind::GeodesicSpheres);
        for (int r = 1; r < sp.n; r++) {
            double c = c_limit(sp, r);
            EXPECT_NEAR(std::abs(leaf_hr(fam, r, 40.0)), c, 1e-8 * c) << sp.spec() << " r=" << r;
            OdeCoefficients coeffs(fam, r, 0.6);
            EXPECT_NEAR(-coeffs.b(40.0) / coeffs.a(40.0), 0.6 / c, 1e-6 * 0.6 / c);
        }
        if (sp.field == Field::R) {
            for (int r = 1; r < sp.n; r++) EXPECT_EQ(c_limit(sp, r), binomial(sp.n - 1, r));
        }
        if (sp.field == Field::C) {
            EXPECT_EQ(c_limit(sp, sp.n - 1), 1.0 / std::pow(2.0, sp.n - 2));
            // The closed form agrees with the limiting spectrum {(½, n−2), (1, 1)}.
            for (int r = 1; r < sp.n; r++) {
                double e = elem_sym(CurvatureSpectrum{{0.5, sp.n - 2}, {1.0, 1}}, r);
                EXPECT_NEAR(c_limit(sp, r), e, 1e-15 * e);
            }
        }
    }
}

TEST(ambient, equidistant_spectrum_is_odd) {
    IsoparametricFamily fam(AmbientSpace::hyperbolic(Field::R, 6), FamilyKind::Equidistants);
    for (double s : {0.1, 0.9, 4.0}) {
        EXPECT_EQ(fam.spectrum(-s), fam.spectrum(s).scaled(-1.0));
    }
    IsoparametricFamily horo(AmbientSpace::hyperbolic(Field::C, 3), FamilyKind::Horospheres);
    EXPECT_EQ(horo.spectrum(-3.0), horo.spectrum(5.0));
}

TEST(ambient, coefficient_domains) {
    IsoparametricFamily s4(AmbientSpace::sphere(4), FamilyKind::GeodesicSpheres);
    EXPECT_EQ(OdeCoefficients(s4, 1, 1.0).domain().second, std::numbers::pi);
    EXPECT_EQ(OdeCoefficients(s4, 2, 1.0).domain().second, std::numbers::pi / 2);
    EXPECT_EQ(OdeCoefficients(s4, 2, 0.0).domain().second, std::numbers::pi);
    IsoparametricFamily eq(AmbientSpace::hyperbolic(Field::R, 4), FamilyKind::Equidistants);
    EXPECT_EQ(OdeCoefficients(eq, 2, 1.0).domain().first, 0.0);
    EXPECT_EQ(OdeCoefficients(eq, 1, 1.0).domain().first, -kInf);
    EXPECT_TRUE(OdeCoefficients(IsoparametricFamily(AmbientSpace::hyperbolic(Field::C, 2), FamilyKind::GeodesicSpheres), 2, 1)
                    .singular_at_zero());
    EXPECT_FALSE(OdeCoefficients(s4, 4, 1).singular_at_zero());
    EXPECT_FALSE(OdeCoefficients(eq, 1, 1).singular_at_zero());
}
