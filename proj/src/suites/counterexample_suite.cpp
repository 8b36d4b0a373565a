#include <cmath>

#include "sucp/counterexample.hpp"
#include "sucp/suites.hpp"
#include "suite_util.hpp"

namespace sucp {

Report counterexample_suite(const ExperimentConfig& cfg) {
    const CounterexampleConfig& c = cfg.counterexample;
    return timed_report("counterexample", suite_seed(cfg.seed, "counterexample"), [&](Report& rep) {
        const double q_star = 2.0 * c.n / (1 + c.eps);
        rep.summary["q_threshold"] = q_star;
        auto& bt = rep.table("boundary", {"offset", "q", "kappa", "integrable", "diagnosed_divergent", "slope"});
        bool flips = true;
        for (double off : c.boundary_offsets) {
            CounterexampleParams P(c.eps, q_star * (1 + off), c.n);
            auto fit = divergence_fit(P);
            bool expect_integrable = off < 0;
            flips = flips && P.integrable() == expect_integrable && fit.divergent == !expect_integrable;
            bt.add({off, P.q, P.kappa(), P.integrable(), fit.divergent, fit.slope});
        }
        rep.checks.push_back(check_true("classification_boundary", flips,
                                        "flag and cutoff diagnosis flip exactly at q(1+eps) = 2n"));

        CounterexampleParams conv(c.eps, c.q_convergent, c.n);
        double closed = counterexample_closed_form(conv), num = counterexample_integral(conv);
        rep.summary["convergent_closed_form"] = json_number(closed);
        rep.summary["convergent_numerical"] = json_number(num);
        rep.checks.push_back(check_le("convergent_integral", std::abs(num - closed) / closed, c.closed_form_tol,
                                      "numerical vs closed-form integral of V^q"));

        CounterexampleParams div(c.eps, c.q_divergent, c.n);
        auto fit = divergence_fit(div);
        double expected = div.q * (1 + div.eps) - 2.0 * div.n;
        rep.summary["divergence_slope"] = fit.slope;
        rep.summary["divergence_expected"] = expected;
        rep.checks.push_back(check_le("divergence_exponent", std::abs(fit.slope - expected), c.exponent_tol,
                                      "cutoff-sweep exponent vs q(1+eps) - 2n"));

        const double pp = 62.0 / 30.0;
        std::vector<int> Ns;
        for (int N = 1; N <= c.vanishing_N_max; ++N) Ns.push_back(N);
        auto radii = log_spaced(c.vanishing_r_lo, c.vanishing_r_hi, c.vanishing_points);
        auto rows = vanishing_order_scan(c.eps, pp, c.n, Ns, radii);
        auto& vt = rep.table("vanishing", {"N", "r", "log_value"});
        for (auto& r : rows) vt.add({(long long)r.N, r.r, r.log_value});
        bool all = true;
        for (int N : Ns) all = all && infinite_order_vanishing(rows, N);
        rep.checks.push_back(check_true("infinite_order_vanishing", all, "every column N tends to 0 as r -> 0"));

        // u = 1: r^{-N} |B_r| grows for N > 2n, so the same test must reject it
        std::vector<VanishingRow> ones;
        double log_ball = std::log(sphere_area(2 * c.n) / (2.0 * c.n));
        for (double r : radii) ones.push_back({2 * c.n + 1, r, log_ball + (2.0 * c.n - (2 * c.n + 1)) * std::log(r)});
        rep.checks.push_back(check_true("constant_not_vanishing", !infinite_order_vanishing(ones, 2 * c.n + 1),
                                        "u = 1 is rejected at N = 2n + 1"));
    });
}

}  // namespace sucp
