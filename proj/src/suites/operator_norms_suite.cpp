#include <algorithm>
#include <cmath>

#include "sucp/operator_lab.hpp"
#include "sucp/suites.hpp"
#include "suite_util.hpp"

namespace sucp {

namespace {

DiscretizedOperator random_operator(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0, 1);
    std::normal_distribution<double> G;
    int R = 2 + static_cast<int>(U(rng) * 40), S = 2 + static_cast<int>(U(rng) * 40);
    int ncomp = U(rng) < 0.5 ? 1 : 2;
    Eigen::MatrixXcd K(R, S * ncomp);
    // log-normal magnitudes give a spread of row and column sums
    for (int i = 0; i < R; ++i)
        for (int c = 0; c < S * ncomp; ++c) K(i, c) = std::polar(std::exp(1.5 * G(rng)), 2 * pi * U(rng));
    std::vector<double> wt(R), ws(S);
    for (auto& w : wt) w = std::exp(G(rng));
    for (auto& w : ws) w = std::exp(G(rng));
    return make_operator(std::move(K), std::move(wt), std::move(ws), ncomp);
}

}  // namespace

Report operator_norms_suite(const ExperimentConfig& cfg) {
    const OperatorNormsConfig& o = cfg.operator_norms;
    const std::uint64_t seed = suite_seed(cfg.seed, "operator-norms");
    return timed_report("operator-norms", seed, [&](Report& rep) {
        // Schur test soundness at p = 2, with unit and random weight functions
        struct SchurRow {
            long rows, cols;
            double spectral, schur_unit, schur_weighted;
        };
        auto schur = parallel_map<SchurRow>(o.schur_trials, cfg.workers, [&](std::size_t i) {
            auto rng = detail::sample_rng(seed, i);
            auto op = random_operator(rng);
            std::uniform_real_distribution<double> U(0.1, 10);
            std::vector<double> u(op.rows()), v(op.ws.size());
            for (auto& x : u) x = U(rng);
            for (auto& x : v) x = U(rng);
            return SchurRow{long(op.rows()), long(op.cols()), spectral_norm(op), schur_bound(op, 2),
                            schur_bound(op, u, v, 2)};
        });
        long schur_viol = 0;
        double schur_worst = 0;
        auto& st = rep.table("schur", {"rows", "cols", "spectral", "schur_unit", "schur_weighted"});
        for (auto& s : schur) {
            double worst = s.spectral / std::min(s.schur_unit, s.schur_weighted);
            schur_worst = std::max(schur_worst, worst);
            schur_viol += worst > 1 + 1e-10;
            st.add({(long long)s.rows, (long long)s.cols, s.spectral, s.schur_unit, s.schur_weighted});
        }
        rep.checks.push_back(check_le("schur_soundness_violations", double(schur_viol), 0, "spectral norm <= (AB)^{1/2}"));
        rep.summary["schur_max_ratio"] = schur_worst;
        {
            // constant kernel: the Schur test is attained
            auto rng = detail::sample_rng(seed ^ 0x7157ULL, 0);
            std::uniform_real_distribution<double> U(0.5, 2);
            Eigen::MatrixXcd K = Eigen::MatrixXcd::Constant(23, 31, cplx(0.7, -0.4));
            std::vector<double> wt(23), ws(31);
            for (auto& w : wt) w = U(rng);
            for (auto& w : ws) w = U(rng);
            auto op = make_operator(K, wt, ws);
            double ratio = spectral_norm(op) / schur_bound(op, 2);
            rep.summary["schur_rank_one_ratio"] = ratio;
            rep.checks.push_back(check_le("schur_rank_one_tightness", std::abs(ratio - 1), 1e-9, "|ratio - 1|"));
        }

        // norm scaling of the band operators at p = 2
        NormScalingSpec spec;
        spec.N = o.N;
        spec.s_over_t = o.s_over_t;
        spec.lambda_max = o.lambda_max;
        spec.mu = o.mu;
        NormScalingResult ns = norm_scaling_experiment(spec, cfg.workers);
        auto& bt = rep.table("norm_scaling", {"kind", "N", "lambda", "s_over_t", "norm", "predicted", "ratio", "argmax_l"});
        for (auto* rows : {&ns.band, &ns.cap})
            for (auto& r : *rows)
                bt.add({r.kind, (long long)r.N, r.lambda, r.s_over_t, r.norm, r.predicted, r.ratio, (long long)r.argmax_l});
        rep.summary["norm_scaling_sup_ratio"] = ns.sup_ratio;
        rep.summary["norm_scaling_inf_ratio"] = ns.inf_ratio;
        rep.summary["norm_scaling_variation"] = json_number(ns.variation);
        rep.summary["norm_scaling_variation_lambda_ge_inv_N"] = json_number(ns.variation_lambda_ge_inv_N);
        json slopes = json::object();
        for (auto& [N, f] : ns.lambda_slope_at_1) slopes[std::to_string(N)] = f.slope;
        rep.summary["norm_lambda_slope_at_s_eq_t"] = slopes;
        json capv = json::object();
        for (auto& [k, v] : ns.cap_variation) capv[k] = json_number(v);
        rep.summary["cap_variation"] = capv;
        rep.checks.push_back(check_le("norm_scaling_variation", ns.variation, o.variation_limit,
                                      "sup/inf of norm (|1-s/t| + lambda) over the sweep"));
        rep.checks.push_back(check_le("norm_scaling_variation_lambda_ge_inv_N", ns.variation_lambda_ge_inv_N,
                                      o.variation_limit, "same, restricted to lambda >= 1/N", false));

        // the exact harmonic norms against the assembled grid operator
        {
            ChiCutoff chi(ChiKind::band, 0.25);
            double fh = harmonic_norm(2, 1.5, chi).norm;
            auto op = assemble_chi_kernel(2, 1.5, 1.0, chi, sphere_grid(4, o.crosscheck_resolution), cfg.workers);
            NormEstimate est = estimate_norm(op, 2);
            rep.summary["crosscheck_harmonic"] = fh;
            rep.summary["crosscheck_grid_spectral"] = est.lower;
            rep.summary["crosscheck_grid_schur"] = est.upper;
            rep.checks.push_back(check_le("harmonic_vs_grid", std::abs(est.lower - fh) / fh, 0.05,
                                          "N=2, lambda=0.25, s/t=1.5 relative difference"));
            rep.checks.push_back(check_true("lower_le_upper", est.consistent(), "spectral <= schur on the grid operator"));
            double l15 = lp_lower_bound(op, 1.5, seed);
            double u15 = schur_bound(op, 1.5);
            rep.summary["p1.5_lower"] = l15;
            rep.summary["p1.5_upper"] = u15;
            rep.checks.push_back(check_le("lp_lower_le_upper_p1.5", l15, u15 * (1 + 1e-9), "Boyd lower bound <= Schur bound"));
        }
        {
            // quadrature refinement leaves the harmonic norms in place
            double worst = 0;
            for (int N : {8, 32})
                for (double stv : {0.9, 1.0}) {
                    ChiCutoff chi(ChiKind::band, 2.0 / N);
                    double a = harmonic_norm(N, stv, chi, 16).norm, b = harmonic_norm(N, stv, chi, 32).norm;
                    worst = std::max(worst, std::abs(a - b) / b);
                }
            rep.checks.push_back(check_le("harmonic_refinement", worst, 0.05, "per-panel nodes 16 vs 32"));
        }

        // four-shell operators against the product-space bound
        {
            SphereGrid g = sphere_grid(4, 2);
            const int shells = 4;
            const Eigen::Index m = static_cast<Eigen::Index>(g.size());
            auto prod = parallel_map<std::array<double, 2>>(o.product_trials, cfg.workers, [&](std::size_t i) {
                auto rng = detail::sample_rng(seed ^ 0x9f0dULL, i);
                std::uniform_real_distribution<double> U(0, 1);
                std::normal_distribution<double> G;
                std::vector<double> wr(shells);
                for (auto& w : wr) w = 0.1 + U(rng);
                Eigen::MatrixXcd full(shells * m, shells * m);
                Eigen::MatrixXd radial(shells, shells);
                for (int a = 0; a < shells; ++a)
                    for (int b = 0; b < shells; ++b) {
                        double scale = std::exp(G(rng));
                        Eigen::MatrixXcd B(m, m);
                        for (Eigen::Index x = 0; x < m; ++x)
                            for (Eigen::Index y = 0; y < m; ++y) B(x, y) = scale * cplx(G(rng), G(rng));
                        full.block(a * m, b * m, m, m) = B;
                        radial(a, b) = spectral_norm(make_operator(B, g.weights, g.weights));
                    }
                std::vector<double> w(shells * m);
                for (int a = 0; a < shells; ++a)
                    for (Eigen::Index x = 0; x < m; ++x) w[a * m + x] = wr[a] * g.weights[x];
                double direct = spectral_norm(make_operator(full, w, w));
                return std::array<double, 2>{direct, product_assemble(radial, wr, wr, 2).upper};
            });
            long viol = 0;
            double worst = 0;
            for (auto& p : prod) {
                viol += p[0] > p[1] * (1 + 1e-9);
                worst = std::max(worst, p[0] / p[1]);
            }
            rep.summary["product_max_ratio"] = worst;
            rep.checks.push_back(check_le("product_assembly_violations", double(viol), 0, "direct norm <= product bound"));
        }

        // min-estimate
        {
            double half = min_estimate_check(0, 1, 0, 1, 2).integral;
            rep.summary["min_estimate_closed_form"] = half;
            rep.checks.push_back(check_le("min_estimate_closed_form", std::abs(half - 0.5), 1e-10, "rho=0, lambda=1, [0,1], q'=2"));
            auto one = min_estimate_sweep(o.min_estimate_samples, detail::splitmix64(seed ^ 3), true, cfg.workers);
            auto two = min_estimate_sweep(o.min_estimate_samples, detail::splitmix64(seed ^ 4), false, cfg.workers);
            auto& mt = rep.table("min_estimate", {"sweep", "rho", "lambda", "gamma_lo", "gamma_hi", "q_prime", "integral",
                                                  "majorant", "ratio"});
            for (auto* sw : {&one, &two})
                for (auto& s : sw->samples)
                    mt.add({sw == &one ? "one-sided" : "two-sided", s.rho, s.lambda, s.g_lo, s.g_hi, s.qp,
                            s.result.integral, s.result.majorant, s.result.ratio});
            rep.summary["min_estimate_one_sided_max_ratio"] = one.max_ratio;
            rep.summary["min_estimate_two_sided_max_ratio"] = two.max_ratio;
            rep.checks.push_back(check_le("min_estimate_violations", double(one.violations), 0, "gamma in [0, inf)"));
            rep.checks.push_back(check_le("min_estimate_two_sided_violations", double(two.violations), 0,
                                          "gamma straddling 0 (outside the one-sided case)", false));
        }
    });
}

}  // namespace sucp
