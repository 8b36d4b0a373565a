#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"
#include "report.hpp"

namespace sucp {

// Per-suite seed: the global seed mixed with the suite name, so suites never share a stream.
std::uint64_t suite_seed(std::uint64_t seed, const std::string& suite);

Report gegenbauer_suite(const ExperimentConfig& cfg);
Report kernels_suite(const ExperimentConfig& cfg);
Report reproduce_suite(const ExperimentConfig& cfg);
Report bounds_suite(const ExperimentConfig& cfg);
Report operator_norms_suite(const ExperimentConfig& cfg);
Report carleman_suite(const ExperimentConfig& cfg);
Report wolff_suite(const ExperimentConfig& cfg);
Report counterexample_suite(const ExperimentConfig& cfg);
Report pipeline_suite(const ExperimentConfig& cfg);

// Test measures by name: point, two-cluster, gaussian, exponential.
class DiscreteMeasure;
DiscreteMeasure named_measure(const std::string& name);

// Dispatch by name; unknown names are a configuration error.
Report run_named_suite(const std::string& name, const ExperimentConfig& cfg);

enum ExitCode : int { kExitOk = 0, kExitAssertion = 1, kExitConfig = 2, kExitBudget = 3 };

struct SuiteRun {
    std::vector<Report> reports;
    int exit_code = kExitOk;
};

// Runs the configured suites in dependency order, writing <suite>.json and CSV tables
// into out_dir. Failures are recorded in the reports and folded into exit_code.
SuiteRun run_suite(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

// Runs one suite, converting numerical-budget errors into an error field on the report.
Report run_guarded(const std::string& name, const ExperimentConfig& cfg, int& exit_code);

}  // namespace sucp
