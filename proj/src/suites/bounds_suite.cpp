#include "sucp/suites.hpp"
#include "sucp/verification.hpp"
#include "suite_util.hpp"

namespace sucp {

Report bounds_suite(const ExperimentConfig& cfg) {
    const BoundsConfig& b = cfg.bounds;
    const std::uint64_t seed = suite_seed(cfg.seed, "bounds");
    return timed_report("bounds", seed, [&](Report& rep) {
        TriangleSweep tri;
        tri.na = b.triangle_a_points;
        tri.ntheta = b.triangle_theta_points;
        tri.c0 = b.triangle_c0;
        BoundReport t = check_triangle_bound(tri);
        detail::add_bound_report(rep, t);
        // the case the kernel estimates use: a = |z|/|zeta| >= 0
        rep.checks.push_back(check_ge("triangle_bound_nonnegative_a", t.extra.at("infimum_a_nonnegative"), b.triangle_c0,
                                      "infimum over a >= 0", false));

        NearSweep near;
        near.N = b.near_N;
        near.samples_per_N = b.near_samples;
        near.seed = detail::splitmix64(seed ^ 1);
        near.slope_max_excess = b.slope_tol;
        detail::add_bound_report(rep, check_near_bound(near, cfg.workers));

        FarSweep far;
        far.N = b.far_N;
        far.samples_per_N = b.far_samples;
        far.seed = detail::splitmix64(seed ^ 2);
        far.slope_tol = b.slope_tol;
        std::vector<FarSample> raw;
        detail::add_bound_report(rep, check_far_bound(far, &raw, cfg.workers));
        auto& ft = rep.table("far_samples", {"N", "r", "theta", "abs_kernel", "ratio", "region"});
        for (auto& s : raw) ft.add({(long long)s.N, s.r, s.theta, s.value, s.ratio, std::string(to_string(s.region))});
    });
}

}  // namespace sucp
