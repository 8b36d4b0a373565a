#include "sucp/operator_lab.hpp"
#include "sucp/suites.hpp"
#include "sucp/test_functions.hpp"
#include "suite_util.hpp"

namespace sucp {

Report carleman_suite(const ExperimentConfig& cfg) {
    const CarlemanConfig& c = cfg.carleman;
    return timed_report("carleman", suite_seed(cfg.seed, "carleman"), [&](Report& rep) {
        std::vector<TestFunction> fns{radial_bump_polynomial(0.2, 0.3, 0.5, 0.7, {1, 0}), annular_bump(0.2, 0.7)};
        CarlemanWeight w(c.delta);
        CarlemanSpec spec;
        spec.nu = c.nu;
        spec.gamma_factor = c.gamma_factors;
        spec.q = c.q;
        CarlemanResult res = carleman_ratio_experiment(fns, w, spec, cfg.workers);
        auto& t = rep.table("carleman", {"function", "nu", "gamma_factor", "gamma_lo", "gamma_hi", "log_numerator",
                                         "log_denominator", "ratio", "normalized"});
        for (auto& r : res.rows)
            t.add({r.function, r.nu, r.gamma_factor, r.gamma.lo, r.gamma.hi, r.log_numerator, r.log_denominator, r.ratio,
                   r.normalized});
        json slopes = json::object();
        for (auto& [k, f] : res.slopes) slopes[k] = f.slope;
        rep.summary["nu_slopes"] = slopes;
        rep.summary["p"] = spec.p();
        rep.summary["p_prime"] = spec.p_prime();
        rep.summary["sup_normalized"] = res.sup_normalized;
        rep.summary["inf_normalized"] = res.inf_normalized;
        rep.checks.push_back(check_le("carleman_variation", res.variation, c.variation_limit,
                                      "sup/inf of R / (nu min{|gamma|, nu^{-1/2}})"));
        rep.checks.push_back(check_le("carleman_nu_slope", res.max_nu_slope, c.slope_limit,
                                      "largest fitted nu-exponent of the normalized ratio"));
        // a window missing the support gives an empty numerator
        CarlemanRow off = carleman_ratio(fns[0], w, c.nu.front(), LogInterval(50, 51), spec);
        rep.checks.push_back(check_le("carleman_disjoint_window", off.ratio, 0, "gamma outside the support"));
    });
}

}  // namespace sucp
