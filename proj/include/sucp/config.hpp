#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "json.hpp"

#include "common.hpp"

namespace sucp {

using json = nlohmann::json;

// Reads one JSON object, remembering which keys were consumed; finish() rejects the rest.
class ConfigSection {
public:
    ConfigSection(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
    }

    template <class T>
    void read(const char* key, T& out) {
        seen_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end()) return;
        // nlohmann would silently truncate 2.5 to 2 or read true as 1
        if constexpr (std::is_integral_v<T>) {
            if (!it->is_number_integer()) throw ConfigError(path_ + "." + key + ": expected an integer");
            if constexpr (std::is_unsigned_v<T>)
                if (it->is_number_integer() && !it->is_number_unsigned())
                    throw ConfigError(path_ + "." + key + ": expected a non-negative integer");
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!it->is_number()) throw ConfigError(path_ + "." + key + ": expected a number");
        } else if constexpr (std::is_same_v<T, std::vector<int>>) {
            if (!it->is_array()) throw ConfigError(path_ + "." + key + ": expected an array");
            for (auto& e : *it)
                if (!e.is_number_integer()) throw ConfigError(path_ + "." + key + ": expected integers");
        } else if constexpr (std::is_same_v<T, std::vector<double>>) {
            if (!it->is_array()) throw ConfigError(path_ + "." + key + ": expected an array");
            for (auto& e : *it)
                if (!e.is_number()) throw ConfigError(path_ + "." + key + ": expected numbers");
        }
        try {
            out = it->template get<T>();
        } catch (const json::exception&) {
            throw ConfigError(path_ + "." + key + ": wrong type");
        }
        check_finite(key, out);
    }

    bool has(const char* key) const { return j_.contains(key); }

    ConfigSection child(const char* key) {
        seen_.insert(key);
        auto it = j_.find(key);
        static const json empty = json::object();
        return ConfigSection(it == j_.end() ? empty : *it, path_ + "." + key);
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError(path_ + ": unknown key '" + it.key() + "'");
    }

private:
    template <class T>
    void check_finite(const char* key, const T& v) const {
        if constexpr (std::is_floating_point_v<T>) {
            if (!std::isfinite(v)) throw ConfigError(path_ + "." + key + ": not finite");
        } else if constexpr (std::is_same_v<T, std::vector<double>>) {
            for (double x : v)
                if (!std::isfinite(x)) throw ConfigError(path_ + "." + key + ": not finite");
        }
    }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

struct GegenbauerConfig {
    double lambda = 1.0;
    int max_degree = 500;
    int theta_points = 10000;
    double slack = 1e-9;
    int fit_min_degree = 10;
    double growth_tolerance = 0.05;
    std::vector<double> generating_lambdas{1.0, 2.0};
    std::vector<double> generating_r{0.5, 0.9};
    int generating_thetas = 100;
    int generating_max_M = 200;

    void load(ConfigSection s) {
        s.read("lambda", lambda);
        s.read("max_degree", max_degree);
        s.read("theta_points", theta_points);
        s.read("slack", slack);
        s.read("fit_min_degree", fit_min_degree);
        s.read("growth_tolerance", growth_tolerance);
        s.read("generating_lambdas", generating_lambdas);
        s.read("generating_r", generating_r);
        s.read("generating_thetas", generating_thetas);
        s.read("generating_max_M", generating_max_M);
        s.finish();
        require(lambda > 0, "gegenbauer.lambda must be positive");
        require(max_degree > fit_min_degree + 2 && fit_min_degree >= 1, "gegenbauer: degree range too small");
        require(theta_points >= 2 && generating_thetas >= 1 && generating_max_M >= 0, "gegenbauer: bad grid sizes");
        for (double r : generating_r) require(r >= 0 && r < 1, "gegenbauer.generating_r must lie in [0,1)");
        for (double l : generating_lambdas) require(l > 0, "gegenbauer.generating_lambdas must be positive");
    }
};

struct KernelsConfig {
    long cross_path_samples = 1000;
    int cross_path_max_N = 12;
    double r_lo = 0.2, r_hi = 0.95;
    double strict_tol = 1e-8, loose_tol = 1e-6, strict_fraction = 0.99;
    long residue_samples = 2000;
    int residue_max_N = 30;
    double residue_tol = 1e-6;
    std::vector<int> amplitude_N{8, 12, 16, 24, 32};
    double amplitude_slope_tol = 0.2;
    std::vector<int> reproduce_N{0, 2, 4};
    int repro_panels = 2, repro_per_panel = 8, repro_sphere = 16;
    double repro_tol = 0.02;

    void load(ConfigSection s) {
        s.read("cross_path_samples", cross_path_samples);
        s.read("cross_path_max_N", cross_path_max_N);
        s.read("r_lo", r_lo);
        s.read("r_hi", r_hi);
        s.read("strict_tol", strict_tol);
        s.read("loose_tol", loose_tol);
        s.read("strict_fraction", strict_fraction);
        s.read("residue_samples", residue_samples);
        s.read("residue_max_N", residue_max_N);
        s.read("residue_tol", residue_tol);
        s.read("amplitude_N", amplitude_N);
        s.read("amplitude_slope_tol", amplitude_slope_tol);
        s.read("reproduce_N", reproduce_N);
        s.read("repro_panels", repro_panels);
        s.read("repro_per_panel", repro_per_panel);
        s.read("repro_sphere", repro_sphere);
        s.read("repro_tol", repro_tol);
        s.finish();
        require(cross_path_samples > 0 && residue_samples > 0, "kernels: sample counts must be positive");
        require(cross_path_max_N >= 1 && residue_max_N >= 1, "kernels: N ranges must be positive");
        require(0 < r_lo && r_lo < r_hi && r_hi < 1, "kernels: need 0 < r_lo < r_hi < 1");
        require(amplitude_N.size() >= 3, "kernels.amplitude_N needs at least 3 values");
        require(!reproduce_N.empty() && reproduce_N.front() == 0, "kernels.reproduce_N must start with 0 (calibration)");
        require(repro_panels >= 1 && repro_per_panel >= 2 && repro_sphere >= 4, "kernels: reproducing grid too small");
    }
};

struct BoundsConfig {
    int triangle_a_points = 2000, triangle_theta_points = 2000;
    double triangle_c0 = 0.2;
    std::vector<int> near_N{4, 8, 12, 16, 24, 32};
    long near_samples = 2000;
    std::vector<int> far_N{8, 16, 32, 64};
    long far_samples = 3000;
    double slope_tol = 0.2;

    void load(ConfigSection s) {
        s.read("triangle_a_points", triangle_a_points);
        s.read("triangle_theta_points", triangle_theta_points);
        s.read("triangle_c0", triangle_c0);
        s.read("near_N", near_N);
        s.read("near_samples", near_samples);
        s.read("far_N", far_N);
        s.read("far_samples", far_samples);
        s.read("slope_tol", slope_tol);
        s.finish();
        require(triangle_a_points >= 2 && triangle_theta_points >= 2, "bounds: triangle grid too small");
        require(near_N.size() >= 3 && far_N.size() >= 1, "bounds: N lists too short");
        require(near_samples > 0 && far_samples > 0, "bounds: sample counts must be positive");
    }
};

struct OperatorNormsConfig {
    std::vector<int> N{8, 16, 32, 64};
    std::vector<double> s_over_t{0.6, 0.9, 1.0, 1.1, 1.5};
    double lambda_max = 0.25;
    double mu = 1.25;
    double variation_limit = 10;
    int schur_trials = 200;
    long min_estimate_samples = 1000;
    int crosscheck_resolution = 8;
    int product_trials = 100;

    void load(ConfigSection s) {
        s.read("N", N);
        s.read("s_over_t", s_over_t);
        s.read("lambda_max", lambda_max);
        s.read("mu", mu);
        s.read("variation_limit", variation_limit);
        s.read("schur_trials", schur_trials);
        s.read("min_estimate_samples", min_estimate_samples);
        s.read("crosscheck_resolution", crosscheck_resolution);
        s.read("product_trials", product_trials);
        s.finish();
        require(!N.empty() && !s_over_t.empty(), "operator_norms: empty sweep");
        for (int n : N) require(n >= 2, "operator_norms.N values must be at least 2");
        for (double x : s_over_t) require(x > 0, "operator_norms.s_over_t must be positive");
        require(lambda_max > 0 && lambda_max < 1, "operator_norms.lambda_max must lie in (0,1)");
        require(mu > 1 && mu < 4.0 / 3.0, "operator_norms.mu must lie in (1, 4/3)");
        require(schur_trials > 0 && min_estimate_samples > 0 && product_trials > 0, "operator_norms: counts must be positive");
        require(crosscheck_resolution >= 4, "operator_norms.crosscheck_resolution too small");
    }
};

struct CarlemanConfig {
    std::vector<double> nu{16, 32, 64, 128};
    std::vector<double> gamma_factors{0.1, 1.0, 10.0};
    double q = 31;
    double delta = 0.5;
    double variation_limit = 10;
    double slope_limit = 0.1;

    void load(ConfigSection s) {
        s.read("nu", nu);
        s.read("gamma_factors", gamma_factors);
        s.read("q", q);
        s.read("delta", delta);
        s.read("variation_limit", variation_limit);
        s.read("slope_limit", slope_limit);
        s.finish();
        require(nu.size() >= 3, "carleman.nu needs at least three values");
        for (double v : nu) require(v > 0, "carleman.nu must be positive");
        for (double g : gamma_factors) require(g > 0, "carleman.gamma_factors must be positive");
        require(q > 1, "carleman.q must exceed 1");
        require(delta > 0 && delta < 1, "carleman.delta must lie in (0,1)");
    }
};

struct WolffConfig {
    std::vector<double> N{10, 100, 1000};
    std::vector<std::string> measures{"point", "two-cluster", "gaussian"};
    double C_floor = 0.125;
    int enumeration_trials = 200;

    void load(ConfigSection s) {
        s.read("N", N);
        s.read("measures", measures);
        s.read("C_floor", C_floor);
        s.read("enumeration_trials", enumeration_trials);
        s.finish();
        for (double n : N) require(n > 0, "wolff.N must be positive");
        for (auto& m : measures)
            require(m == "point" || m == "two-cluster" || m == "gaussian", "wolff.measures: unknown measure '" + m + "'");
    }
};

struct CounterexampleConfig {
    double eps = 0.1;
    int n = 2;
    double q_convergent = 3, q_divergent = 4;
    std::vector<double> boundary_offsets{-0.05, -0.03, -0.01, 0.01, 0.03, 0.05};
    double closed_form_tol = 0.01;
    double exponent_tol = 0.05;
    int vanishing_N_max = 20;
    double vanishing_r_lo = 1e-250, vanishing_r_hi = 1e-1;
    int vanishing_points = 60;

    void load(ConfigSection s) {
        s.read("eps", eps);
        s.read("n", n);
        s.read("q_convergent", q_convergent);
        s.read("q_divergent", q_divergent);
        s.read("boundary_offsets", boundary_offsets);
        s.read("closed_form_tol", closed_form_tol);
        s.read("exponent_tol", exponent_tol);
        s.read("vanishing_N_max", vanishing_N_max);
        s.read("vanishing_r_lo", vanishing_r_lo);
        s.read("vanishing_r_hi", vanishing_r_hi);
        s.read("vanishing_points", vanishing_points);
        s.finish();
        require(eps > 0, "counterexample.eps must be positive");
        require(n >= 1, "counterexample.n must be positive");
        require(q_convergent >= 1 && q_divergent >= 1, "counterexample: q must be at least 1");
        require(0 < vanishing_r_lo && vanishing_r_lo < vanishing_r_hi && vanishing_r_hi < 1,
                "counterexample: need 0 < vanishing_r_lo < vanishing_r_hi < 1");
        require(vanishing_points >= 8 && vanishing_N_max >= 1, "counterexample: scan too small");
    }
};

struct PipelineConfig {
    double eps = 0.5;
    double p = 62.0 / 32.0;
    double N = 20;
    double sigma_max = 12;
    int cells = 2000;
    double delta = 0.5;

    void load(ConfigSection s) {
        s.read("eps", eps);
        s.read("p", p);
        s.read("N", N);
        s.read("sigma_max", sigma_max);
        s.read("cells", cells);
        s.read("delta", delta);
        s.finish();
        require(eps > 0 && p >= 1 && N > 0 && sigma_max > 0 && cells >= 10, "pipeline: bad parameters");
        require(delta > 0 && delta < 1, "pipeline.delta must lie in (0,1)");
    }
};

inline const std::vector<std::string>& known_suites() {
    static const std::vector<std::string> s{"gegenbauer", "kernels", "reproduce",      "bounds",
                                            "operator-norms", "carleman", "wolff", "counterexample", "pipeline"};
    return s;
}

struct ExperimentConfig {
    int n = 2;
    std::uint64_t seed = 20240601;
    int workers = 1;
    std::string out_dir = "out";
    std::string format = "json";
    std::vector<std::string> suites{"gegenbauer", "kernels",  "reproduce", "bounds",
                                    "operator-norms", "carleman", "wolff", "counterexample"};
    GegenbauerConfig gegenbauer;
    KernelsConfig kernels;
    BoundsConfig bounds;
    OperatorNormsConfig operator_norms;
    CarlemanConfig carleman;
    WolffConfig wolff;
    CounterexampleConfig counterexample;
    PipelineConfig pipeline;

    static ExperimentConfig from_json(const json& j) {
        ExperimentConfig c;
        ConfigSection s(j, "config");
        s.read("n", c.n);
        s.read("seed", c.seed);
        s.read("workers", c.workers);
        s.read("suites", c.suites);
        {
            auto o = s.child("output");
            o.read("dir", c.out_dir);
            o.read("format", c.format);
            o.finish();
        }
        c.gegenbauer.load(s.child("gegenbauer"));
        c.kernels.load(s.child("kernels"));
        c.bounds.load(s.child("bounds"));
        c.operator_norms.load(s.child("operator_norms"));
        c.carleman.load(s.child("carleman"));
        c.wolff.load(s.child("wolff"));
        c.counterexample.load(s.child("counterexample"));
        c.pipeline.load(s.child("pipeline"));
        s.finish();
        c.validate();
        return c;
    }

    static ExperimentConfig from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file '" + path + "'");
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError("config parse error: " + std::string(e.what()));
        }
        return from_json(j);
    }

    void validate() const {
        if (n != 2) throw ConfigError("config.n: only n = 2 (d = 4) is implemented");
        if (workers < 0) throw ConfigError("config.workers must be non-negative");
        if (format != "json" && format != "csv") throw ConfigError("config.output.format must be json or csv");
        for (auto& s : suites) {
            bool ok = false;
            for (auto& k : known_suites()) ok = ok || k == s;
            if (!ok) throw ConfigError("config.suites: unknown suite '" + s + "'");
        }
    }
};

}  // namespace sucp
