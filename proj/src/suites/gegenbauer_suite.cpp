#include <cmath>
#include <limits>

#include "sucp/gegenbauer.hpp"
#include "sucp/suites.hpp"
#include "sucp/verification.hpp"

namespace sucp {

Report gegenbauer_suite(const ExperimentConfig& cfg) {
    const GegenbauerConfig& g = cfg.gegenbauer;
    return timed_report("gegenbauer", suite_seed(cfg.seed, "gegenbauer"), [&](Report& rep) {
        // |P_m(cos theta)| <= P_m(1) on a theta grid
        const int M = g.max_degree;
        std::vector<double> worst(M + 1, 0.0);
        std::vector<long> viol(M + 1, 0);
        auto per_theta = parallel_map<std::vector<double>>(g.theta_points, cfg.workers, [&](std::size_t i) {
            double th = pi * static_cast<double>(i) / (g.theta_points - 1);
            return gegenbauer_table<double>(g.lambda, M, std::cos(th));
        });
        std::vector<double> at_one(M + 1);
        for (int m = 0; m <= M; ++m) at_one[m] = gegenbauer_at_one(g.lambda, m);
        for (auto& P : per_theta)
            for (int m = 0; m <= M; ++m) {
                double ratio = std::abs(P[m]) / at_one[m];
                worst[m] = std::max(worst[m], ratio);
                if (ratio > 1 + g.slack) ++viol[m];
            }
        long total_viol = 0;
        double worst_ratio = 0;
        auto& t = rep.table("bound", {"m", "P_m(1)", "max_ratio", "violations"});
        for (int m = 0; m <= M; ++m) {
            total_viol += viol[m];
            worst_ratio = std::max(worst_ratio, worst[m]);
            t.add({(long long)m, at_one[m], worst[m], (long long)viol[m]});
        }
        rep.checks.push_back(check_le("bound_violations", double(total_viol), 0, "|P_m(cos theta)| <= P_m(1)(1+slack)"));
        std::vector<double> xs, ys;
        for (int m = g.fit_min_degree; m <= M; ++m) xs.push_back(m), ys.push_back(at_one[m]);
        FitResult fit = fit_exponent(xs, ys);
        double expected = 2 * g.lambda - 1;
        rep.checks.push_back(check_le("growth_exponent", std::abs(fit.slope - expected), g.growth_tolerance,
                                      "|fitted exponent of P_m(1) - (2 lambda - 1)|"));
        rep.summary["max_ratio"] = worst_ratio;
        rep.summary["growth_exponent"] = fit.slope;
        rep.summary["growth_expected"] = expected;

        // generating function: |partial sum - closed form| <= 2 sum_{m>M} P_m(1) r^m
        auto& gt = rep.table("generating", {"lambda", "r", "M", "max_error", "majorant", "violations"});
        long gen_viol = 0;
        double worst_margin = 0;
        for (double lam : g.generating_lambdas)
            for (double r : g.generating_r) {
                const int Mmax = g.generating_max_M;
                std::vector<double> maj(Mmax + 1);
                for (int m = 0; m <= Mmax; ++m) maj[m] = 2 * generating_tail_majorant(lam, r, m);
                // rounding floor: the partial sums carry relative error ~ eps times sum |terms|
                double floor = 8 * std::numeric_limits<double>::epsilon() * 2 * std::pow(1 - r, -2 * lam);
                std::vector<double> err(Mmax + 1, 0.0);
                std::vector<long> v(Mmax + 1, 0);
                for (int k = 0; k < g.generating_thetas; ++k) {
                    double th = pi * (k + 0.5) / g.generating_thetas;
                    double closed = generating_closed_form(lam, r, th);
                    auto P = gegenbauer_table<long double>(lam, Mmax, std::cos(static_cast<long double>(th)));
                    long double s = 0, rm = 1;
                    for (int m = 0; m <= Mmax; ++m) {
                        s += P[m] * rm;
                        rm *= r;
                        double e = std::abs(static_cast<double>(s) - closed);
                        err[m] = std::max(err[m], e);
                        if (e > maj[m] + floor) ++v[m];
                        if (maj[m] > 0) worst_margin = std::max(worst_margin, e / (maj[m] + floor));
                    }
                }
                for (int m = 0; m <= Mmax; ++m) {
                    gen_viol += v[m];
                    gt.add({lam, r, (long long)m, err[m], maj[m], (long long)v[m]});
                }
            }
        rep.checks.push_back(check_le("generating_violations", double(gen_viol), 0,
                                      "|partial - closed| <= 2 sum_{m>M} P_m(1) r^m + rounding floor"));
        rep.summary["generating_worst_margin"] = worst_margin;
    });
}

}  // namespace sucp
