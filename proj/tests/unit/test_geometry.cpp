#include <gtest/gtest.h>

#include "generators.hpp"
#include "sucp/geometry.hpp"
#include "sucp/quadrature.hpp"
#include "sucp/verification.hpp"

using namespace sucp;

TEST(Quadrature, GaussLegendreExactness) {
    for (int m : {1, 2, 5, 12, 40}) {
        Rule1D r = gauss_legendre(m);
        for (int k = 0; k <= 2 * m - 1; ++k) {
            double s = 0;
            for (int i = 0; i < m; ++i) s += r.w[i] * std::pow(r.x[i], k);
            double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
            EXPECT_NEAR(s, exact, 1e-14) << "m=" << m << " k=" << k;
        }
    }
}

TEST(Quadrature, CompositeRule) {
    Rule1D r = composite_gauss(uniform_edges(0, 3, 7), 6);
    double s = 0;
    for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * std::exp(r.x[i]);
    EXPECT_NEAR(s, std::exp(3.0) - 1, 1e-12);
}

TEST(Geometry, SphereGridArea) {
    for (int res : {0, 4, 10}) {
        SphereGrid g = sphere_grid(4, res);
        double a = 0;
        for (double w : g.weights) a += w;
        EXPECT_NEAR(a, 2 * pi * pi, 1e-12);
    }
    EXPECT_NEAR(sphere_area(4), 2 * pi * pi, 1e-14);
    EXPECT_THROW(sphere_grid(6, 4), UnsupportedDimension);
}

TEST(Geometry, SphereGridMoments) {
    SphereGrid g = sphere_grid(4, 8);
    double m2 = 0, m4 = 0, odd = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double a = std::norm(g.nodes[i][0]);
        m2 += g.weights[i] * a;
        m4 += g.weights[i] * a * a;
        odd += g.weights[i] * g.nodes[i][0].real() * std::norm(g.nodes[i][1]);
    }
    EXPECT_NEAR(m2, pi * pi, 1e-12);              // by symmetry half of the area
    EXPECT_NEAR(m4, 2 * pi * pi / 3, 1e-12);      // |z1|^2 = (1+t)/2, t uniform on [-1,1]
    EXPECT_NEAR(odd, 0, 1e-13);
}

TEST(Geometry, RadialGridVolume) {
    // int_{B_1} dV = pi^2 / 2 in R^4
    RadialGrid r = radial_grid_panels(0, 1, 4, 8);
    double s = 0;
    for (double w : r.weights) s += w;
    EXPECT_NEAR(2 * pi * pi * s, pi * pi / 2, 1e-13);
    RadialGrid u = radial_grid(1e-3, 1, 4000, RadialSpacing::uniform_in_sigma);
    double v = 0;
    for (double w : u.weights) v += w;
    EXPECT_NEAR(v, 0.25 * (1 - 1e-12), 1e-6);
}

TEST(GeometryProperty, AngleBetween) {
    for (int i = 0; i < 300; ++i) {
        auto g = gen::stream(20, i);
        double th = gen::uniform(g, 0, pi);
        ComplexPoint e = random_unit(g);
        ComplexPoint z = unit_at_angle(e, th, g) * gen::log_uniform(g, 1e-3, 1e3);
        EXPECT_NEAR(angle_between(z, e * gen::uniform(g, 0.1, 10)), th, 1e-12) << "case " << i;
        EXPECT_NEAR(angle_between(z, z), 0, 0);
        PolarData p = polar_data(z, e);
        EXPECT_NEAR(p.sigma, -std::log(z.norm()), 1e-14);
    }
}

TEST(Geometry, TinyPointNorm) {
    ComplexPoint z{cplx(3e-200, 0), cplx(0, 4e-200)};
    EXPECT_NEAR(z.norm() / 5e-200, 1, 1e-15);
}

TEST(Geometry, LogIntervalAndAnnulus) {
    LogInterval I(1, 2);
    EXPECT_TRUE(I.contains(1.5));
    EXPECT_TRUE(I.overlaps(LogInterval(2, 3)));
    EXPECT_FALSE(I.overlaps(LogInterval(2.1, 3)));
    EXPECT_DOUBLE_EQ(I.reduced_length(16), 0.25);
    EXPECT_THROW(LogInterval(2, 1), DomainError);
}
