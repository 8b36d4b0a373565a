#include <gtest/gtest.h>

#include "sucp/reproducing.hpp"
#include "sucp/test_functions.hpp"

using namespace sucp;

namespace {

// z sits on the plateau of the bump, where dbar u vanishes
const ComplexPoint z{cplx(0.4, 0.2), cplx(0.1, -0.3)};

ReproGrid small_grid() {
    ReproGrid g;
    g.panels_per_shell = 2;
    g.per_panel = 8;
    g.sphere_resolution = 16;
    return g;
}

}  // namespace

TEST(Reproducing, CalibratedConstantMatchesSphereArea) {
    auto u = radial_bump_polynomial(0.3, 0.45, 0.75, 0.9, {1, 0});
    double c = calibrate_constant(u, z, small_grid());
    EXPECT_NEAR(c / expected_constant(4), 1.0, 1e-3);
    EXPECT_NEAR(expected_constant(4), -1 / (pi * pi), 1e-16);
}

TEST(Reproducing, IdentityWithFrozenConstant) {
    auto u = radial_bump_polynomial(0.2, 0.35, 0.7, 0.95, {0, 2}, cplx(0.5, 1));
    ReproGrid g = small_grid();
    double c = calibrate_constant(radial_bump_polynomial(0.3, 0.45, 0.75, 0.9, {1, 0}), z, g);
    for (int N : {2, 4}) {
        auto r = reproducing_check(u, z, N, g, c);
        EXPECT_LT(r.rel_error, 0.02) << "N=" << N;
        // the other sign of the exponent breaks the identity
        EXPECT_GT(reproducing_check(u, z, N, g, c, ExponentConvention::flipped).rel_error, 0.2) << "N=" << N;
    }
}
