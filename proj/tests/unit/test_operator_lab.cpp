#include <gtest/gtest.h>

#include <Eigen/SVD>

#include "generators.hpp"
#include "sucp/operator_lab.hpp"

using namespace sucp;

namespace {

DiscretizedOperator random_op(std::mt19937_64& g, int R, int S, int ncomp) {
    std::normal_distribution<double> n;
    Eigen::MatrixXcd K(R, S * ncomp);
    for (int i = 0; i < K.rows(); ++i)
        for (int c = 0; c < K.cols(); ++c) K(i, c) = cplx(n(g), n(g)) * std::exp(2 * n(g));
    std::vector<double> wt(R), ws(S);
    for (double& w : wt) w = gen::log_uniform(g, 0.01, 10);
    for (double& w : ws) w = gen::log_uniform(g, 0.01, 10);
    return make_operator(K, wt, ws, ncomp);
}

}  // namespace

TEST(OperatorLab, SpectralNormMatchesSvd) {
    for (int i = 0; i < 40; ++i) {
        auto g = gen::stream(30, i);
        auto op = random_op(g, gen::integer(g, 1, 30), gen::integer(g, 1, 20), gen::integer(g, 1, 2));
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(op.weighted());
        double ref = svd.singularValues()(0);
        EXPECT_NEAR(spectral_norm(op), ref, 1e-8 * ref) << "case " << i;
    }
}

TEST(OperatorLab, SpectralNormOfDegenerateTopSingularValue) {
    // identity: every singular value is 1, the worst case for plain power iteration
    Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(50, 50);
    EXPECT_NEAR(spectral_norm_matrix(I), 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(spectral_norm_matrix(Eigen::MatrixXcd::Zero(4, 3)), 0.0);
}

// ||T|| <= (AB)^{1/2} for any positive Schur weights
TEST(OperatorLabProperty, SchurBoundIsSound) {
    for (int i = 0; i < 200; ++i) {
        auto g = gen::stream(31, i);
        auto op = random_op(g, gen::integer(g, 1, 25), gen::integer(g, 1, 25), gen::integer(g, 1, 2));
        std::vector<double> u(op.rows()), v(op.ws.size());
        for (double& x : u) x = gen::log_uniform(g, 0.1, 10);
        for (double& x : v) x = gen::log_uniform(g, 0.1, 10);
        double s = spectral_norm(op);
        EXPECT_LE(s, schur_bound(op) * (1 + 1e-9)) << "case " << i;
        EXPECT_LE(s, schur_bound(op, u, v, 2) * (1 + 1e-9)) << "case " << i;
    }
}

TEST(OperatorLab, SchurTightOnConstantKernel) {
    // K = 1 with weights w: norm = sum w, A = B = sum w
    auto g = gen::stream(32, 0);
    std::vector<double> w(17);
    double sum = 0;
    for (double& x : w) sum += (x = gen::uniform(g, 0.1, 2));
    auto op = make_operator(Eigen::MatrixXcd::Ones(17, 17), w, w);
    EXPECT_NEAR(schur_bound(op) / spectral_norm(op), 1.0, 1e-9);
    EXPECT_NEAR(spectral_norm(op), sum, 1e-9 * sum);
}

TEST(OperatorLab, BoydLowerBound) {
    for (int i = 0; i < 20; ++i) {
        auto g = gen::stream(33, i);
        auto op = random_op(g, 12, 10, 1);
        double s = spectral_norm(op);
        EXPECT_NEAR(lp_lower_bound(op, 2.0), s, 1e-6 * s) << "case " << i;
        for (double p : {1.2, 1.5, 1.9}) {
            auto e = estimate_norm(op, p);
            EXPECT_TRUE(e.consistent()) << "case " << i << " p=" << p << " " << e.lower << " > " << e.upper;
            EXPECT_GT(e.lower, 0);
        }
    }
}

TEST(OperatorLab, SchurArgumentChecks) {
    auto g = gen::stream(34, 0);
    auto op = random_op(g, 3, 3, 1);
    EXPECT_THROW(schur_bound(op, 2.5), DomainError);
    EXPECT_THROW(schur_bound(op, {1, 1}, {1, 1, 1}, 2), ShapeError);
    EXPECT_THROW(schur_bound(op, {1, 0, 1}, {1, 1, 1}, 2), DomainError);
    EXPECT_THROW(make_operator(Eigen::MatrixXcd::Ones(2, 2), {1, 1}, {1}), ShapeError);
}

TEST(OperatorLab, MinEstimateClosedForm) {
    // rho = 0, lambda = 1, gamma = [0, 1], q' = 2: int_0^1 (1+x)^{-2} dx = 1/2
    auto m = min_estimate_check(0, 1, 0, 1, 2);
    EXPECT_NEAR(m.integral, 0.5, 1e-12);
    EXPECT_LE(m.integral, m.majorant);
    // rho > 0 with lambda large: the Gaussian dominates, int_0^inf e^{-2 rho x^2} dx = sqrt(pi / (8 rho))
    auto n = min_estimate_check(4, 1e8, 0, 1e3, 2);
    EXPECT_NEAR(n.integral * 1e16, std::sqrt(pi / 32), 1e-6);
    EXPECT_THROW(min_estimate_check(1, 1, 0, 1, 1.0), DomainError);
}

TEST(OperatorLabProperty, MinEstimateOneSided) {
    auto s = min_estimate_sweep(400, 77, true);
    EXPECT_EQ(s.violations, 0);
    EXPECT_LT(s.max_ratio, 1.0);
}

TEST(OperatorLab, HarmonicNormRefinementStable) {
    ChiCutoff chi(ChiKind::band, 0.25);
    double a = harmonic_norm(8, 1.1, chi, 16).norm, b = harmonic_norm(8, 1.1, chi, 32).norm;
    EXPECT_GT(a, 0);
    EXPECT_NEAR(a, b, 1e-6 * b);
}

TEST(OperatorLab, CutoffProfiles) {
    ChiCutoff band(ChiKind::band, 0.01), cap(ChiKind::cap, 0.01);
    EXPECT_DOUBLE_EQ(band.profile(0.0), 0.0);
    EXPECT_DOUBLE_EQ(band.profile(0.1), 1.0);
    EXPECT_DOUBLE_EQ(band.profile(2.0), 0.0);
    EXPECT_DOUBLE_EQ(cap.profile(0.0), 1.0);
    EXPECT_DOUBLE_EQ(cap.profile(2.0), 0.0);
    EXPECT_THROW(ChiCutoff(ChiKind::cap, 0.0), DomainError);
}
