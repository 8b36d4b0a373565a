#include <algorithm>
#include <cmath>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "sucp/kernels.hpp"
#include "sucp/reproducing.hpp"
#include "sucp/suites.hpp"
#include "sucp/test_functions.hpp"
#include "sucp/verification.hpp"
#include "suite_util.hpp"

namespace sucp {

namespace {

using big = boost::multiprecision::cpp_bin_float_50;

// r^{-N}(g - T^{N-1} g) at d = 4 by plain subtraction in 50 digits; for r > 1 the partial
// sum is ~ r^N times larger than g, which costs at most ~15 of the 50 digits here
double tail_oracle(double r, double theta, int N) {
    big R(r), x = cos(big(theta));
    big g = pow(1 - 2 * R * x + R * R, -2);
    const double lam = 2;
    big p0 = 1, p1 = 2 * lam * x, s = p0, rm = 1;
    if (N >= 2) s += p1 * R;
    rm = R;
    for (int m = 2; m < N; ++m) {
        big p2 = (2 * x * (m + lam - 1) * p1 - (m + 2 * lam - 2) * p0) / m;
        rm *= R;
        s += p2 * rm;
        p0 = p1;
        p1 = p2;
    }
    if (N == 0) s = 0;
    return static_cast<double>((g - s) / pow(R, N));
}

struct CrossSample {
    int N = 0;
    double r = 0, theta = 0, rel = 0;
    std::string path;
};

}  // namespace

Report kernels_suite(const ExperimentConfig& cfg) {
    const KernelsConfig& k = cfg.kernels;
    const std::uint64_t seed = suite_seed(cfg.seed, "kernels");
    return timed_report("kernels", seed, [&](Report& rep) {
        // direct definition against the closed form
        auto cross = parallel_map<CrossSample>(k.cross_path_samples, cfg.workers, [&](std::size_t i) {
            auto rng = detail::sample_rng(seed, i);
            std::uniform_real_distribution<double> U(0, 1);
            CrossSample c;
            c.N = 1 + static_cast<int>(U(rng) * k.cross_path_max_N);
            c.N = std::min(c.N, k.cross_path_max_N);
            c.r = k.r_lo + (k.r_hi - k.r_lo) * U(rng);
            double lo = std::asin(std::min(1.0, 1.0 / (2 * c.N)));
            c.theta = lo + (pi - 2 * lo) * U(rng);
            double t = 0.5 + 1.5 * U(rng);
            ComplexPoint e = random_unit(rng);
            ComplexPoint zeta = e * t;
            ComplexPoint z = unit_at_angle(e, c.theta, rng) * (c.r * t);
            auto a = truncated_kernel_direct(z, zeta, c.N);
            auto b = truncated_kernel_closed(z, zeta, c.N);
            double num = 0;
            for (std::size_t j = 0; j < a.c.size(); ++j) num += std::norm(a.c[j] - b.c[j]);
            c.rel = std::sqrt(num) / a.norm();
            c.path = to_string(b.path);
            return c;
        });
        long strict = 0;
        double worst = 0;
        auto& ct = rep.table("cross_path", {"N", "r", "theta", "rel_error", "path"});
        for (auto& c : cross) {
            strict += c.rel < k.strict_tol;
            worst = std::max(worst, c.rel);
            ct.add({(long long)c.N, c.r, c.theta, c.rel, c.path});
        }
        double frac = double(strict) / double(cross.size());
        rep.checks.push_back(check_ge("cross_path_strict_fraction", frac, k.strict_fraction,
                                      "fraction of samples with relative error below strict_tol"));
        rep.checks.push_back(check_le("cross_path_max_error", worst, k.loose_tol, "largest relative error"));
        rep.summary["cross_path_max_error"] = worst;

        // residue amplitude against a high-precision tail
        struct ResRow {
            int N;
            double r, theta, residue, oracle, rel;
        };
        auto res = parallel_map<ResRow>(k.residue_samples, cfg.workers, [&](std::size_t i) {
            auto rng = detail::sample_rng(seed ^ 0x5eedULL, i);
            std::uniform_real_distribution<double> U(0, 1);
            ResRow row;
            row.N = std::min(k.residue_max_N, 1 + static_cast<int>(U(rng) * k.residue_max_N));
            row.r = (i % 2 == 0) ? 0.2 + 0.75 * U(rng) : 1.05 + 0.95 * U(rng);
            double lo = std::asin(std::min(1.0, 1.0 / (2 * row.N)));
            row.theta = lo + (pi - 2 * lo) * U(rng);
            cplx a = residue_amplitude(4, row.r, row.theta, row.N).a;
            row.residue = (a * std::polar(1.0, row.N * row.theta)).real();
            row.oracle = tail_oracle(row.r, row.theta, row.N);
            row.rel = std::abs(row.residue - row.oracle) / std::max(std::abs(row.oracle), std::abs(a));
            return row;
        });
        double res_worst = 0;
        auto& rt = rep.table("residue", {"N", "r", "theta", "residue", "oracle", "rel_error"});
        for (auto& r : res) {
            res_worst = std::max(res_worst, r.rel);
            rt.add({(long long)r.N, r.r, r.theta, r.residue, r.oracle, r.rel});
        }
        rep.checks.push_back(check_le("residue_identity", res_worst, k.residue_tol,
                                      "|Re[a e^{iN theta}] - oracle| / max(|oracle|, |a|)"));

        AmplitudeSweep sw;
        sw.N = k.amplitude_N;
        sw.slope_tol = k.amplitude_slope_tol;
        detail::add_bound_report(rep, check_amplitude_bound(sw, cfg.workers));
    });
}

Report reproduce_suite(const ExperimentConfig& cfg) {
    const KernelsConfig& k = cfg.kernels;
    return timed_report("reproduce", suite_seed(cfg.seed, "reproduce"), [&](Report& rep) {
        // z sits on both plateaus, where dbar u = 0, so the kernel singularity never meets the integrand
        std::vector<TestFunction> fns{radial_bump_polynomial(0.3, 0.45, 0.75, 0.9, {1, 0}),
                                      radial_bump_polynomial(0.2, 0.35, 0.7, 0.95, {0, 2}, cplx(0.5, 1))};
        const ComplexPoint z{cplx(0.4, 0.2), cplx(0.1, -0.3)};
        ReproGrid base;
        base.panels_per_shell = k.repro_panels;
        base.per_panel = k.repro_per_panel;
        base.sphere_resolution = k.repro_sphere;
        auto& t = rep.table("reproduce",
                            {"grid", "function", "N", "convention", "constant", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "rel_error"});
        double worst[2] = {0, 0};
        double worst_flipped = 0;
        const char* names[2] = {"default", "refined"};
        for (int level = 0; level < 2; ++level) {
            ReproGrid g = level == 0 ? base : base.refined();
            // the N = 0 run on the first test function fixes the constant for everything else
            double c = calibrate_constant(fns[0], z, g, cfg.workers);
            rep.summary[std::string("calibrated_constant_") + names[level]] = c;
            for (auto& u : fns)
                for (int N : k.reproduce_N) {
                    auto r = reproducing_check(u, z, N, g, c, ExponentConvention::reproducing, cfg.workers);
                    worst[level] = std::max(worst[level], r.rel_error);
                    t.add({names[level], u.kind, (long long)N, "-(N+d-1)", c, r.lhs.real(), r.lhs.imag(), r.rhs.real(),
                           r.rhs.imag(), r.rel_error});
                    if (level == 0 && N > 0) {
                        auto s = reproducing_check(u, z, N, g, c, ExponentConvention::flipped, cfg.workers);
                        worst_flipped = std::max(worst_flipped, s.rel_error);
                        t.add({names[level], u.kind, (long long)N, "-N+d-1", c, s.lhs.real(), s.lhs.imag(),
                               s.rhs.real(), s.rhs.imag(), s.rel_error});
                    }
                }
        }
        rep.summary["expected_constant"] = expected_constant(4);
        rep.summary["flipped_exponent_worst_error"] = worst_flipped;
        rep.checks.push_back(check_le("reproduce_default_grid", worst[0], k.repro_tol, "worst relative error, default grid"));
        rep.checks.push_back(check_le("reproduce_refinement", worst[1], worst[0], "refined grid error <= default grid error"));
        // the exponent sign: |zeta|^{-N+d-1} must be clearly worse
        rep.checks.push_back(check_ge("flipped_exponent_rejected", worst_flipped, 10 * k.repro_tol,
                                      "|zeta|^{-N+d-1} weight fails the identity", false));
        CarlemanWeight w;
        double c = calibrate_constant(fns[0], z, base, cfg.workers);
        auto o = osculation_check(fns[0], z, 4.0, w, base, c, cfg.workers);
        rep.summary["osculation_nu4_rel_error"] = o.rel_error;
        rep.checks.push_back(check_le("osculation_nu4", o.rel_error, k.repro_tol, "weighted reproducing identity", false));
    });
}

}  // namespace sucp
