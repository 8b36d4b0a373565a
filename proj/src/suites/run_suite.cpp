#include <exception>

#include "sucp/suites.hpp"
#include "suite_util.hpp"

namespace sucp {

std::uint64_t suite_seed(std::uint64_t seed, const std::string& suite) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (unsigned char ch : suite) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return detail::splitmix64(seed ^ h);
}

Report run_named_suite(const std::string& name, const ExperimentConfig& cfg) {
    if (name == "gegenbauer") return gegenbauer_suite(cfg);
    if (name == "kernels") return kernels_suite(cfg);
    if (name == "reproduce") return reproduce_suite(cfg);
    if (name == "bounds") return bounds_suite(cfg);
    if (name == "operator-norms") return operator_norms_suite(cfg);
    if (name == "carleman") return carleman_suite(cfg);
    if (name == "wolff") return wolff_suite(cfg);
    if (name == "counterexample") return counterexample_suite(cfg);
    if (name == "pipeline") return pipeline_suite(cfg);
    throw ConfigError("unknown suite '" + name + "'");
}

namespace {

int merge_exit(int a, int b) {
    // configuration errors dominate, then budget overruns, then failed assertions
    auto rank = [](int c) { return c == kExitConfig ? 3 : c == kExitBudget ? 2 : c == kExitAssertion ? 1 : 0; };
    return rank(b) > rank(a) ? b : a;
}

Report aborted(const std::string& name, const ExperimentConfig& cfg, const std::string& what) {
    Report r;
    r.suite = name;
    r.seed = suite_seed(cfg.seed, name);
    r.started = utc_timestamp();
    r.error = what;
    return r;
}

}  // namespace

Report run_guarded(const std::string& name, const ExperimentConfig& cfg, int& exit_code) {
    try {
        Report r = run_named_suite(name, cfg);
        if (!r.pass()) exit_code = merge_exit(exit_code, kExitAssertion);
        return r;
    } catch (const ConfigError& e) {
        exit_code = merge_exit(exit_code, kExitConfig);
        return aborted(name, cfg, std::string("configuration error: ") + e.what());
    } catch (const BudgetExceeded& e) {
        exit_code = merge_exit(exit_code, kExitBudget);
        return aborted(name, cfg, std::string("budget exceeded: ") + e.what() + " (partial " + format_double(e.partial) + ")");
    } catch (const IterationLimit& e) {
        exit_code = merge_exit(exit_code, kExitBudget);
        return aborted(name, cfg,
                       std::string("iteration limit: ") + e.what() + " (last " + format_double(e.last_estimate) + ")");
    } catch (const std::exception& e) {
        exit_code = merge_exit(exit_code, kExitAssertion);
        return aborted(name, cfg, e.what());
    }
}

SuiteRun run_suite(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
    cfg.validate();
    SuiteRun run;
    // dependency order: the kernel checks come before anything that builds on the kernels
    for (const std::string& name : known_suites()) {
        bool selected = false;
        for (auto& s : cfg.suites) selected = selected || s == name;
        if (!selected) continue;
        Report r = run_guarded(name, cfg, run.exit_code);
        r.write(out_dir);
        run.reports.push_back(std::move(r));
    }
    return run;
}

}  // namespace sucp
