#include <gtest/gtest.h>

#include "generators.hpp"
#include "sucp/kernels.hpp"
#include "sucp/verification.hpp"

using namespace sucp;

namespace {

double rel_diff(const KernelValue& a, const KernelValue& b) {
    double num = 0;
    for (std::size_t j = 0; j < a.n(); ++j) num += std::norm(a.c[j] - b.c[j]);
    return std::sqrt(num) / std::max(a.norm(), b.norm());
}

}  // namespace

TEST(Kernels, BochnerMartinelliComponents) {
    ComplexPoint z{cplx(0.1, 0.2), cplx(-0.3, 0)}, zeta{cplx(1, 0), cplx(0, 0.5)};
    auto B = bm_kernel(z, zeta);
    ComplexPoint diff = zeta - z;
    double d4 = std::pow(diff.norm2(), 2);
    for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(std::abs(B.c[j] - std::conj(diff[j]) / d4), 0, 1e-15);
    EXPECT_THROW(bm_kernel(z, z), SingularityError);
}

// N = 0: no Taylor part, I^0 = |zeta|^{d-1} B
TEST(Kernels, ZeroTruncationIsScaledKernel) {
    for (int i = 0; i < 50; ++i) {
        auto g = gen::stream(10, i);
        ComplexPoint z = gen::point(g, gen::uniform(g, 0.1, 2)), zeta = gen::point(g, gen::uniform(g, 0.5, 2));
        auto B = bm_kernel(z, zeta);
        double t3 = std::pow(zeta.norm(), 3);
        auto I = truncated_kernel_direct(z, zeta, 0);
        for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(std::abs(I.c[j] - t3 * B.c[j]), 0, 1e-13 * t3 * B.norm());
        EXPECT_LT(rel_diff(truncated_kernel_closed(z, zeta, 0), I), 1e-12) << "case " << i;
    }
}

TEST(Kernels, HFactorsOnOrthogonalPairs) {
    ComplexPoint z{cplx(0, 0), cplx(0.5, 0)}, zeta{cplx(0, 2), cplx(0, 0)};
    ASSERT_NEAR(real_inner(z, zeta), 0, 0);
    for (std::size_t j = 0; j < 2; ++j) {
        EXPECT_NEAR(std::abs(h_j1(z, zeta, j) + std::conj(zeta[j]) / (2 * zeta.norm())), 0, 1e-15);
        EXPECT_NEAR(std::abs(h_j2(z, j) - std::conj(z[j]) / (2 * z.norm())), 0, 1e-15);
    }
}

TEST(Kernels, NewtonianExpansion) {
    for (int i = 0; i < 50; ++i) {
        auto g = gen::stream(11, i);
        ComplexPoint zeta = gen::point(g, gen::uniform(g, 0.5, 2));
        ComplexPoint z = gen::point(g, zeta.norm() * gen::uniform(g, 0.01, 0.7));
        double exact = 1 / distance(z, zeta) / distance(z, zeta);
        EXPECT_NEAR(newtonian_expansion(z, zeta, 400), exact, 1e-11 * exact) << "case " << i;
    }
}

// Closed form and literal definition agree away from the excluded cone
TEST(KernelsProperty, DirectMatchesClosed) {
    for (int i = 0; i < 400; ++i) {
        auto g = gen::stream(12, i);
        int N = gen::integer(g, 1, 12);
        double r = gen::uniform(g, 0.2, 0.9);
        double theta = gen::uniform(g, 0.2, pi - 0.2);
        double t = gen::uniform(g, 0.5, 2);
        ComplexPoint e = random_unit(g);
        ComplexPoint zeta = e * t, z = unit_at_angle(e, theta, g) * (r * t);
        auto a = truncated_kernel_direct(z, zeta, N), b = truncated_kernel_closed(z, zeta, N);
        EXPECT_LT(rel_diff(a, b), 1e-9) << "case " << i << " N=" << N << " r=" << r << " theta=" << theta;
        EXPECT_LT(rel_diff(truncated_kernel(z, zeta, N), a), 1e-9) << "case " << i;
    }
}

TEST(KernelsProperty, OutsideTheBallDirectMatchesClosed) {
    for (int i = 0; i < 200; ++i) {
        auto g = gen::stream(13, i);
        int N = gen::integer(g, 1, 8);
        double r = gen::uniform(g, 1.1, 2.5);
        double lo = std::asin(1.0 / (2 * N)) + 1e-3;  // the closed form needs |sin theta| >= 1/(2N) here
        double theta = gen::uniform(g, lo, pi - lo);
        ComplexPoint e = random_unit(g);
        ComplexPoint zeta = e, z = unit_at_angle(e, theta, g) * r;
        EXPECT_LT(rel_diff(truncated_kernel_direct(z, zeta, N), truncated_kernel_closed(z, zeta, N)), 1e-9) << "case " << i;
    }
}

TEST(Kernels, ResidueMatchesSeriesTail) {
    for (int N : {1, 3, 8, 20})
        for (double r : {0.3, 0.6, 0.9})
            for (double th : {0.4, 1.3, 2.6}) {
                double series = g_series_tail(4, r, th, N).value;
                cplx a = residue_amplitude(4, r, th, N).a;
                double res = (a * std::polar(1.0, N * th)).real();
                EXPECT_NEAR(res, series, 1e-10 * std::max(1.0, std::abs(a))) << N << " " << r << " " << th;
            }
}

TEST(Kernels, SeriesTailRecursion) {
    // G_{N-1} = P_{N-1}(cos theta) + r G_N
    double r = 0.7, th = 1.1;
    for (int N = 1; N < 10; ++N) {
        double a = g_series_tail(4, r, th, N - 1).value;
        double b = gegenbauer_eval(2.0, N - 1, std::cos(th)) + r * g_series_tail(4, r, th, N).value;
        EXPECT_NEAR(a, b, 1e-12 * std::abs(a));
    }
}

TEST(Kernels, DomainAndSingularErrors) {
    ComplexPoint z{cplx(0.5, 0), cplx(0, 0)}, zero{cplx(0, 0), cplx(0, 0)};
    EXPECT_THROW(truncated_kernel_direct(zero, z, 2), DomainError);
    EXPECT_THROW(truncated_kernel_closed(z, zero, 2), DomainError);
    EXPECT_THROW(truncated_kernel_direct(z, z, 2), SingularityError);
    EXPECT_THROW(truncated_kernel_closed(z, z, 2), SingularityError);
    EXPECT_THROW(truncated_kernel_direct(z, z * 2.0, -1), DomainError);
    EXPECT_THROW(residue_amplitude(4, 1.5, 0.0, 3), GeometryError);
    EXPECT_THROW(residue_amplitude(3, 0.5, 1.0, 3), DomainError);
    EXPECT_THROW(g_series_tail(4, 1.2, 1.0, 3), ConvergenceDomainError);
    // r > 0.95 inside the cone has no stable closed path
    ComplexPoint zeta{cplx(1, 0), cplx(0, 0)}, near{cplx(0.98 * std::cos(0.001), 0), cplx(0.98 * std::sin(0.001), 0)};
    EXPECT_THROW(truncated_kernel_closed(near, zeta, 20), UncomputableRegion);
}
