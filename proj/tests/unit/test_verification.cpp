#include <gtest/gtest.h>

#include "generators.hpp"
#include "sucp/verification.hpp"

using namespace sucp;

TEST(Verification, FitRecoversExactPowerLaw) {
    std::vector<double> x, y;
    for (int i = 1; i <= 8; ++i) x.push_back(i * 3.0), y.push_back(2.5 * std::pow(i * 3.0, -1.75));
    FitResult f = fit_exponent(x, y);
    EXPECT_NEAR(f.slope, -1.75, 1e-12);
    EXPECT_NEAR(std::exp(f.intercept), 2.5, 1e-11);
    EXPECT_NEAR(f.stderr_slope, 0, 1e-12);
    EXPECT_THROW(fit_exponent({1, 2}, {1, 2}), DomainError);
    EXPECT_THROW(fit_exponent({1, 2, 3}, {1, -2, 3}), DomainError);
    EXPECT_THROW(fit_exponent({1, 2, 3}, {1, 2}), ShapeError);
}

// |a - e^{i theta}| against |a - 1| + |sin theta|: zero at a = -1, theta = pi, so no
// positive constant works on the whole line; for a >= 0 the infimum is 1/2
TEST(Verification, TriangleRatioOracle) {
    EXPECT_EQ(triangle_ratio(-1.0, pi), std::abs(cplx(-1, 0) - std::polar(1.0, pi)) / (2 + std::abs(std::sin(pi))));
    EXPECT_LT(triangle_ratio(-1.0, pi), 1e-15);
    EXPECT_NEAR(triangle_ratio(0.0, pi / 2), 0.5, 1e-15);  // |0 - i| / (1 + 1)
    TriangleSweep sw;
    sw.na = sw.ntheta = 401;
    BoundReport r = check_triangle_bound(sw);
    EXPECT_FALSE(r.pass);
    EXPECT_LT(r.constant, 0.01);
    EXPECT_NEAR(r.extra.at("infimum_a_nonnegative"), 0.5, 0.01);
    EXPECT_GE(r.extra.at("infimum_a_nonnegative"), 0.5 - 1e-12);
}

TEST(VerificationProperty, UnitAtAngle) {
    for (int i = 0; i < 200; ++i) {
        auto g = gen::stream(50, i);
        ComplexPoint e = random_unit(g);
        double th = gen::uniform(g, 0, pi);
        ComplexPoint v = unit_at_angle(e, th, g);
        EXPECT_NEAR(e.norm(), 1, 1e-14);
        EXPECT_NEAR(v.norm(), 1, 1e-14);
        EXPECT_NEAR(angle_between(v, e), th, 1e-12) << "case " << i;
    }
}

// the zonal norm formula against the componentwise kernel
TEST(VerificationProperty, ZonalNormMatchesKernel) {
    for (int i = 0; i < 100; ++i) {
        auto g = gen::stream(51, i);
        int N = gen::integer(g, 1, 10);
        double r = gen::uniform(g, 0.2, 0.9), th = gen::uniform(g, 0.3, pi - 0.3);
        ComplexPoint e = random_unit(g);
        ComplexPoint z = unit_at_angle(e, th, g) * r;
        double a = truncated_kernel(z, e, N).norm(), b = zonal_kernel_norm(4, r, th, N);
        EXPECT_NEAR(a, b, 1e-10 * a) << "case " << i;
    }
}
