#include <gtest/gtest.h>

#include "generators.hpp"
#include "sucp/wolff.hpp"

using namespace sucp;

namespace {

DiscreteMeasure random_measure(std::mt19937_64& g) {
    int n = gen::integer(g, 1, 60);
    std::vector<Atom> a;
    for (int i = 0; i < n; ++i) a.push_back({gen::uniform(g, -5, 5), gen::log_uniform(g, 1e-6, 1)});
    return DiscreteMeasure(a);
}

// shortest half-mass interval by trying every pair of atoms
double brute_half_mass_length(const TiltedMeasure& t) {
    const auto& x = t.base().positions();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i; j < x.size(); ++j)
            if (2 * t.scaled_mass(LogInterval(x[i], x[j])) >= t.scaled_total()) best = std::min(best, x[j] - x[i]);
    return best;
}

}  // namespace

TEST(WolffProperty, TiltSemigroup) {
    for (int i = 0; i < 200; ++i) {
        auto g = gen::stream(40, i);
        auto mu = random_measure(g);
        double a = gen::uniform(g, -50, 50), b = gen::uniform(g, -50, 50);
        auto two = tilt(tilt(mu, a), b), one = tilt(mu, a + b);
        ASSERT_EQ(two.k(), one.k()) << "case " << i;
        EXPECT_EQ(two.scaled_weights(), one.scaled_weights()) << "case " << i;
        EXPECT_EQ(*std::max_element(one.scaled_weights().begin(), one.scaled_weights().end()), 1.0);
        EXPECT_NEAR(tilt(mu, 0).log_mass(), mu.log_mass(), 1e-14 * std::max(1.0, std::abs(mu.log_mass())));
    }
}

TEST(Wolff, LargeTiltStaysFinite) {
    DiscreteMeasure mu({{-3, 1}, {0, 1}, {4, 1e-10}});
    auto t = tilt(mu, 1e6);
    EXPECT_TRUE(std::isfinite(t.log_mass()));
    EXPECT_NEAR(t.log_mass(), 4e6 + std::log(1e-10), 1e-6);
    EXPECT_DOUBLE_EQ(t.mass_fraction(LogInterval(4, 4)), 1.0);
}

TEST(WolffProperty, HalfMassIsShortest) {
    for (int i = 0; i < 150; ++i) {
        auto g = gen::stream(41, i);
        auto mu = random_measure(g);
        auto t = tilt(mu, gen::uniform(g, -3, 3));
        LogInterval I = half_mass_interval(t);
        EXPECT_GE(2 * t.scaled_mass(I), t.scaled_total()) << "case " << i;
        EXPECT_NEAR(I.length(), brute_half_mass_length(t), 1e-12) << "case " << i;
    }
}

TEST(Wolff, PointMassSelection) {
    // a single interval of length 1/N: sum |I|^{-1} = N exactly
    for (double N : {10.0, 100.0, 1000.0}) {
        auto sel = select_intervals(point_mass(0.3), N);
        ASSERT_EQ(sel.intervals.size(), 1u);
        EXPECT_NEAR(sel.C, 1.0, 1e-9);
        EXPECT_TRUE(sel.all_verified());
    }
}

TEST(WolffProperty, SelectionInvariants) {
    for (int i = 0; i < 40; ++i) {
        auto g = gen::stream(42, i);
        auto mu = random_measure(g);
        double N = gen::log_uniform(g, 1, 200);
        auto sel = select_intervals(mu, N);
        EXPECT_TRUE(sel.disjoint()) << "case " << i;
        EXPECT_TRUE(sel.all_verified()) << "case " << i;
        EXPECT_TRUE(sel.k_in_range()) << "case " << i;
        for (auto& s : sel.intervals) {
            EXPECT_GE(s.mass_fraction, 0.5) << "case " << i;
            EXPECT_GE(s.I.length(), 1.0 / N * (1 - 1e-12)) << "case " << i;
        }
    }
}

TEST(Wolff, TestMeasures) {
    for (auto mu : {two_cluster(), discretized_gaussian(), discretized_exponential()}) {
        auto sel = select_intervals(mu, 100);
        EXPECT_TRUE(sel.disjoint());
        EXPECT_TRUE(sel.all_verified());
        EXPECT_GE(sel.C, 0.125);
    }
}

TEST(Wolff, DecayDiagnostic) {
    std::vector<double> T{1, 2, 4, 8, 12};
    EXPECT_TRUE(decay_diagnostic(discretized_gaussian(), T).fast_decay);
    EXPECT_FALSE(decay_diagnostic(discretized_exponential(), T).fast_decay);
}

TEST(Wolff, MeasureValidation) {
    EXPECT_THROW(DiscreteMeasure(std::vector<Atom>{}), DomainError);
    EXPECT_THROW(DiscreteMeasure({{0, 0}}), DomainError);
    EXPECT_THROW(DiscreteMeasure({{NAN, 1}}), DomainError);
    EXPECT_THROW(select_intervals(point_mass(), 0), DomainError);
    EXPECT_THROW(DiscreteMeasure::from_log_weights({0, 1}, {0}), ShapeError);
}

TEST(Wolff, FieldMeasureIdentity) {
    // with k = p nu the tilted mass is the weighted field mass
    CarlemanWeight w(0.5);
    std::vector<FieldCell> cells;
    for (int i = 0; i < 200; ++i) {
        double s = std::exp(-0.05 * (i + 0.5));
        cells.push_back({s, 0.01 * s, 1 + std::sin(i * 0.3) * 0.5});
    }
    const double p = 1.9;
    auto mu = sucp_measure(cells, w, p);
    for (double nu : {3.0, 20.0}) {
        LogInterval I(w.psi(1.0), w.psi(5.0));
        double a = tilted_log_mass(mu, p * nu, I), b = weighted_field_log_mass(cells, w, p, nu, I);
        EXPECT_NEAR(a, b, 1e-10 * std::abs(a));
    }
}
