#include <cmath>

#include "sucp/wolff.hpp"
#include "sucp/suites.hpp"
#include "suite_util.hpp"

namespace sucp {

DiscreteMeasure named_measure(const std::string& name) {
    if (name == "point") return point_mass();
    if (name == "two-cluster") return two_cluster();
    if (name == "gaussian") return discretized_gaussian();
    if (name == "exponential") return discretized_exponential();
    throw ConfigError("unknown measure '" + name + "'");
}

namespace {

// shortest atom-delimited window with at least half the mass, by enumeration
double brute_half_mass_length(const TiltedMeasure& t) {
    const auto& x = t.base().positions();
    const auto& w = t.scaled_weights();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i) {
        double s = 0;
        for (std::size_t j = i; j < x.size(); ++j) {
            s += w[j];
            if (2 * s >= t.scaled_total()) {
                best = std::min(best, x[j] - x[i]);
                break;
            }
        }
    }
    return best;
}

}  // namespace

Report wolff_suite(const ExperimentConfig& cfg) {
    const WolffConfig& wc = cfg.wolff;
    const std::uint64_t seed = suite_seed(cfg.seed, "wolff");
    return timed_report("wolff", seed, [&](Report& rep) {
        auto& t = rep.table("selection", {"measure", "N", "intervals", "sum_inverse_length", "C", "disjoint", "verified",
                                          "k_in_range", "k_steps", "min_mass_fraction"});
        auto& it = rep.table("intervals", {"measure", "N", "k", "lo", "hi", "mass_fraction"});
        double minC = std::numeric_limits<double>::infinity();
        bool all_disjoint = true, all_verified = true, all_k = true;
        for (auto& name : wc.measures) {
            DiscreteMeasure mu = named_measure(name);
            for (double N : wc.N) {
                IntervalSelection sel = select_intervals(mu, N, cfg.workers);
                double minfrac = 1;
                for (auto& s : sel.intervals) {
                    minfrac = std::min(minfrac, s.mass_fraction);
                    it.add({name, N, s.k, s.I.lo, s.I.hi, s.mass_fraction});
                }
                t.add({name, N, (long long)sel.intervals.size(), sel.sum_inverse_length, sel.C, sel.disjoint(),
                       sel.all_verified(), sel.k_in_range(), (long long)sel.k_steps, minfrac});
                minC = std::min(minC, sel.C);
                all_disjoint = all_disjoint && sel.disjoint();
                all_verified = all_verified && sel.all_verified();
                all_k = all_k && sel.k_in_range();
            }
        }
        if (!wc.measures.empty() && !wc.N.empty()) {
            rep.checks.push_back(check_ge("wolff_min_C", minC, wc.C_floor, "sum |I_j|^{-1} / N"));
            rep.summary["min_C"] = minC;
        }
        rep.checks.push_back(check_true("wolff_disjoint", all_disjoint, "selected intervals pairwise disjoint"));
        rep.checks.push_back(check_true("wolff_half_mass", all_verified, "mu_k(I) >= ||mu_k|| / 2 for every interval"));
        rep.checks.push_back(check_true("wolff_k_range", all_k, "every k in [N, 2N]"));

        // log-space invariants
        {
            DiscreteMeasure g = discretized_gaussian();
            TiltedMeasure a = tilt(tilt(g, 3.25), 7.5), b = tilt(g, 3.25 + 7.5);
            rep.checks.push_back(check_true("tilt_semigroup", a.scaled_weights() == b.scaled_weights() && a.offset() == b.offset(),
                                            "tilt(tilt(mu, k1), k2) == tilt(mu, k1 + k2) bitwise"));
            bool max_one = true, finite = true;
            for (double k : {0.0, 10.0, 1e3, 1e6, -1e6}) {
                TiltedMeasure tk = tilt(g, k);
                double m = 0;
                for (double v : tk.scaled_weights()) {
                    m = std::max(m, v);
                    finite = finite && std::isfinite(v);
                }
                max_one = max_one && m == 1.0;
                finite = finite && std::isfinite(tk.log_mass()) && tk.scaled_total() >= 1.0;
            }
            rep.checks.push_back(check_true("tilt_offset_max_one", max_one, "largest scaled weight is exactly 1"));
            rep.checks.push_back(check_true("tilt_large_k_finite", finite, "k up to 1e6 stays finite"));
            TiltedMeasure t0 = tilt(g, 0.0);
            bool same = true;
            for (std::size_t i = 0; i < g.size(); ++i)
                same = same && t0.scaled_weights()[i] == std::exp(g.log_weights()[i] - t0.offset());
            rep.checks.push_back(check_true("tilt_zero_identity", same, "k = 0 leaves the weights unchanged"));
        }

        // half-mass windows against enumeration
        {
            long mismatches = 0;
            for (int trial = 0; trial < wc.enumeration_trials; ++trial) {
                auto rng = detail::sample_rng(seed, trial);
                std::uniform_real_distribution<double> U(0, 1);
                int n = 1 + static_cast<int>(U(rng) * 15);
                std::vector<Atom> atoms;
                for (int i = 0; i < n; ++i) atoms.push_back({-5 + 10 * U(rng), std::exp(4 * (U(rng) - 0.5))});
                DiscreteMeasure mu(atoms);
                TiltedMeasure tm = tilt(mu, 4 * (U(rng) - 0.5));
                double fast = half_mass_interval(tm).length(), slow = brute_half_mass_length(tm);
                mismatches += fast != slow;
            }
            rep.checks.push_back(check_le("half_mass_vs_enumeration", double(mismatches), 0, "two-pointer window == enumeration"));
        }

        // pushing a sampled field onto the line commutes with the Carleman weight
        {
            auto rng = detail::sample_rng(seed ^ 0xce11ULL, 0);
            std::uniform_real_distribution<double> U(0, 1);
            std::vector<FieldCell> cells;
            for (int i = 0; i < 500; ++i) cells.push_back({std::exp(-8 * U(rng)), U(rng), std::exp(6 * (U(rng) - 0.5))});
            CarlemanWeight w(0.5);
            const double p = 62.0 / 32.0;
            DiscreteMeasure mu = sucp_measure(cells, w, p);
            double worst = 0;
            for (double nu : {1.0, 10.0, 100.0})
                for (auto g : {LogInterval(0.5, 2), LogInterval(2, 5), LogInterval(0, 9)}) {
                    double a = weighted_field_log_mass(cells, w, p, nu, g), b = tilted_log_mass(mu, p * nu, g);
                    worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
                }
            rep.checks.push_back(check_le("sucp_measure_tilt_identity", worst, 1e-10, "direct weighted mass vs tilted measure"));
        }

        auto& dt = rep.table("decay", {"measure", "T", "value"});
        for (const char* name : {"gaussian", "exponential"}) {
            auto d = decay_diagnostic(named_measure(name), {2.5, 5, 7.5, 10, 15});
            for (auto& r : d.rows) dt.add({std::string(name), r.T, r.value});
            rep.summary[std::string("fast_decay_") + name] = d.fast_decay;
        }
    });
}

}  // namespace sucp
