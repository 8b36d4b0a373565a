#include <gtest/gtest.h>

#include <boost/math/special_functions/gegenbauer.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include "generators.hpp"
#include "sucp/gegenbauer.hpp"

using namespace sucp;

TEST(Gegenbauer, LowDegreesExplicit) {
    for (double lam : {0.25, 0.5, 1.0, 2.0, 3.5})
        for (double x : {-1.0, -0.3, 0.0, 0.7, 1.0}) {
            EXPECT_DOUBLE_EQ(gegenbauer_eval(lam, 0, x), 1.0);
            EXPECT_NEAR(gegenbauer_eval(lam, 1, x), 2 * lam * x, 1e-15);
            EXPECT_NEAR(gegenbauer_eval(lam, 2, x), 2 * lam * (lam + 1) * x * x - lam, 1e-14);
        }
}

TEST(Gegenbauer, ChebyshevSecondKindAtLambdaOne) {
    for (int m = 0; m <= 60; ++m)
        for (double th : {0.1, 0.9, 1.7, 2.9}) {
            double expect = std::sin((m + 1) * th) / std::sin(th);
            EXPECT_NEAR(gegenbauer_eval(1.0, m, std::cos(th)), expect, 1e-12 * (m + 1)) << "m=" << m;
        }
}

TEST(Gegenbauer, LegendreAtLambdaHalf) {
    for (int m = 0; m <= 40; ++m)
        for (double x : {-0.95, -0.2, 0.4, 0.99})
            EXPECT_NEAR(gegenbauer_eval(0.5, m, x), boost::math::legendre_p(m, x), 1e-13) << "m=" << m;
}

TEST(Gegenbauer, AgreesWithBoost) {
    for (int i = 0; i < 200; ++i) {
        auto g = gen::stream(1, i);
        double lam = gen::uniform(g, 0.05, 6);
        int m = gen::integer(g, 0, 80);
        double x = gen::uniform(g, -1, 1);
        double ref = boost::math::gegenbauer(m, lam, x);
        EXPECT_NEAR(gegenbauer_eval(lam, m, x), ref, 1e-11 * std::max(1.0, gegenbauer_at_one(lam, m))) << "case " << i;
    }
}

TEST(Gegenbauer, ValueAtOneIsBinomial) {
    for (double lam : {0.3, 1.0, 2.0})
        for (int m : {0, 1, 5, 30})
            EXPECT_NEAR(gegenbauer_eval(lam, m, 1.0), gegenbauer_at_one(lam, m), 1e-12 * gegenbauer_at_one(lam, m));
    EXPECT_DOUBLE_EQ(gegenbauer_at_one(2.0, 3), 20.0);  // binom(6, 3)
}

TEST(Gegenbauer, DerivativeByFiniteDifference) {
    const double h = 1e-6;
    for (double lam : {0.5, 2.0})
        for (int m : {1, 4, 11})
            for (double x : {-0.6, 0.1, 0.8}) {
                double fd = (gegenbauer_eval(lam, m, x + h) - gegenbauer_eval(lam, m, x - h)) / (2 * h);
                EXPECT_NEAR(gegenbauer_derivative(lam, m, x), fd, 1e-6 * std::max(1.0, std::abs(fd)));
            }
}

TEST(Gegenbauer, TrigonometricFormMatchesRecurrence) {
    for (int i = 0; i < 100; ++i) {
        auto g = gen::stream(2, i);
        double lam = gen::uniform(g, 0.1, 4);
        int k = gen::integer(g, 0, 50);
        double th = gen::uniform(g, 0, pi);
        double a = gegenbauer_trig(lam, k, th), b = gegenbauer_eval(lam, k, std::cos(th));
        EXPECT_NEAR(a, b, 1e-11 * std::max(1.0, gegenbauer_at_one(lam, k))) << "case " << i;
    }
}

// |P_m(x)| <= P_m(1) on [-1, 1] for lambda > 0
TEST(GegenbauerProperty, BoundedByValueAtOne) {
    for (int i = 0; i < 500; ++i) {
        auto g = gen::stream(3, i);
        double lam = gen::log_uniform(g, 0.01, 10);
        int m = gen::integer(g, 0, 200);
        double x = gen::uniform(g, -1, 1);
        double v = gegenbauer_eval(lam, m, x), b = gegenbauer_at_one(lam, m);
        EXPECT_LE(std::abs(v), b * (1 + 1e-10) + 1e-12) << "case " << i;
    }
}

TEST(GegenbauerProperty, GeneratingFunction) {
    for (int i = 0; i < 100; ++i) {
        auto g = gen::stream(4, i);
        double lam = gen::uniform(g, 0.2, 3);
        double r = gen::uniform(g, 0, 0.6);
        double th = gen::uniform(g, 0, pi);
        double exact = generating_closed_form(lam, r, th);
        double part = generating_partial_sum(lam, r, th, 200);
        EXPECT_NEAR(part, exact, 1e-12 * exact) << "case " << i;
        // the tail majorant dominates the actual tail
        double tail = std::abs(exact - generating_partial_sum(lam, r, th, 10));
        EXPECT_LE(tail, generating_tail_majorant(lam, r, 10) * (1 + 1e-9) + 1e-15) << "case " << i;
    }
}

TEST(Gegenbauer, DomainErrors) {
    EXPECT_THROW(gegenbauer_eval(0.0, 3, 0.5), DomainError);
    EXPECT_THROW(gegenbauer_eval(-1.0, 3, 0.5), DomainError);
    EXPECT_THROW(generating_tail_majorant(1.0, 1.0, 5), ConvergenceDomainError);
    EXPECT_THROW(generating_partial_sum(1.0, 0.5, 0.3, kMaxDegree + 1), BudgetExceeded);
}
