#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "sucp/gegenbauer.hpp"
#include "sucp/suites.hpp"
#include "sucp/wolff.hpp"

using namespace sucp;

namespace {

struct Common {
    std::string config, out, format;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--config", c.config, "JSON configuration file")->check(CLI::ExistingFile);
    app->add_option("--seed", c.seed, "global seed (overrides the config)");
    app->add_option("--out", c.out, "output directory (overrides the config)");
    app->add_option("--workers", c.workers, "worker threads, 0 = hardware concurrency")->check(CLI::NonNegativeNumber);
    app->add_option("--format", c.format, "stdout format")->check(CLI::IsMember({"csv", "json"}));
}

ExperimentConfig load(const Common& c) {
    ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : ExperimentConfig::from_file(c.config);
    if (c.seed) cfg.seed = *c.seed;
    if (!c.out.empty()) cfg.out_dir = c.out;
    if (c.workers) cfg.workers = *c.workers;
    if (!c.format.empty()) cfg.format = c.format;
    cfg.validate();
    return cfg;
}

void print_report(const Report& r, const std::string& format) {
    if (format == "json") {
        json j = r.to_json();
        j.erase("timestamp");
        std::cout << j.dump(2) << '\n';
        return;
    }
    Table t{"checks", {"suite", "id", "pass", "hard", "value", "threshold", "comparator", "note"}, {}};
    for (auto& c : r.checks) t.add({r.suite, c.id, c.pass, c.hard, c.value, c.threshold, c.comparator, c.note});
    if (!r.error.empty()) t.add({r.suite, std::string("error"), false, true, 0.0, 0.0, std::string(""), r.error});
    t.write_csv(std::cout);
}

int run_one(const std::string& suite, const Common& c) {
    ExperimentConfig cfg = load(c);
    int code = kExitOk;
    Report r = run_guarded(suite, cfg, code);
    r.write(cfg.out_dir);
    print_report(r, cfg.format);
    return code;
}

// x,w rows; an optional header line is skipped
DiscreteMeasure read_measure_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open measure file '" + path + "'");
    std::vector<Atom> atoms;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw ConfigError(path + ":" + std::to_string(lineno) + ": expected x,w");
        try {
            std::size_t a = 0, b = 0;
            std::string xs = line.substr(0, comma), ws = line.substr(comma + 1);
            double x = std::stod(xs, &a), w = std::stod(ws, &b);
            if (a != xs.size() || b != ws.size()) throw std::invalid_argument("trailing characters");
            atoms.push_back({x, w});
        } catch (const std::exception&) {
            if (lineno == 1 && atoms.empty()) continue;  // header
            throw ConfigError(path + ":" + std::to_string(lineno) + ": not a number pair");
        }
    }
    if (atoms.empty()) throw ConfigError(path + ": no atoms");
    try {
        return DiscreteMeasure(atoms);
    } catch (const DomainError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical verification lab for strong unique continuation estimates"};
    app.require_subcommand(1);
    Common common;

    auto* geg = app.add_subcommand("gegenbauer", "Gegenbauer bounds and generating function, or a table of P_m(x)");
    std::optional<double> geg_x;
    double geg_lambda = 1;
    int geg_m = 10;
    geg->add_option("--x", geg_x, "evaluate P_m^lambda(x) for m <= max-degree instead of running the suite");
    geg->add_option("--lambda", geg_lambda, "lambda > 0");
    geg->add_option("--max-degree", geg_m, "largest degree")->check(CLI::Range(0, kMaxDegree));

    struct Simple {
        const char* cmd;
        const char* suite;
        const char* help;
    };
    const Simple simple[] = {
        {"kernel-check", "kernels", "Cross-path agreement, residue identity and amplitude bounds of the truncated kernel"},
        {"reproduce", "reproduce", "Reproducing-formula quadrature checks"},
        {"bounds", "bounds", "Triangle, near-diagonal and far-field bound sweeps"},
        {"operator-norms", "operator-norms", "Schur soundness, norm scaling, product assembly, min-estimate"},
        {"carleman-sweep", "carleman", "Carleman ratio experiment"},
        {"counterexample", "counterexample", "Integrability boundary and vanishing-order scans"},
        {"sucp-pipeline", "pipeline", "Measure, interval selection and per-interval masses on a synthetic field"},
    };
    std::vector<std::pair<CLI::App*, std::string>> simple_cmds;
    for (auto& s : simple) simple_cmds.push_back({app.add_subcommand(s.cmd, s.help), s.suite});

    auto* wolff = app.add_subcommand("wolff-select", "Interval selection on test measures, or on a measure read from CSV");
    std::string measure_path;
    double wolff_N = 100;
    wolff->add_option("--measure", measure_path, "CSV file of x,w atoms")->check(CLI::ExistingFile);
    wolff->add_option("--n", wolff_N, "scale N > 0");

    auto* all = app.add_subcommand("run-suite", "Run the configured suites and write all reports");

    add_common(geg, common);
    for (auto& [cmd, _] : simple_cmds) add_common(cmd, common);
    add_common(wolff, common);
    add_common(all, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (geg->parsed()) {
            if (!geg_x) return run_one("gegenbauer", common);
            ExperimentConfig cfg = load(common);
            if (!(geg_lambda > 0)) throw ConfigError("--lambda must be positive");
            if (!(*geg_x >= -1 && *geg_x <= 1)) throw ConfigError("--x must lie in [-1, 1]");
            auto P = gegenbauer_table<double>(geg_lambda, geg_m, *geg_x);
            Table t{"gegenbauer", {"m", "lambda", "x", "P_m"}, {}};
            for (int m = 0; m <= geg_m; ++m) t.add({(long long)m, geg_lambda, *geg_x, P[m]});
            if (cfg.format == "json")
                std::cout << t.to_json().dump(2) << '\n';
            else
                t.write_csv(std::cout);
            return kExitOk;
        }
        for (auto& [cmd, suite] : simple_cmds)
            if (cmd->parsed()) return run_one(suite, common);
        if (wolff->parsed()) {
            if (measure_path.empty()) return run_one("wolff", common);
            ExperimentConfig cfg = load(common);
            if (!(wolff_N > 0)) throw ConfigError("--n must be positive");
            DiscreteMeasure mu = read_measure_csv(measure_path);
            IntervalSelection sel = select_intervals(mu, wolff_N, cfg.workers);
            Table t{"selection", {"k", "lo", "hi", "length", "mass_fraction", "verified"}, {}};
            for (auto& s : sel.intervals) t.add({s.k, s.I.lo, s.I.hi, s.I.length(), s.mass_fraction, s.verified});
            if (cfg.format == "json") {
                json j{{"N", wolff_N},
                       {"C", sel.C},
                       {"sum_inverse_length", sel.sum_inverse_length},
                       {"disjoint", sel.disjoint()},
                       {"all_verified", sel.all_verified()},
                       {"intervals", t.to_json()}};
                std::cout << j.dump(2) << '\n';
            } else {
                t.write_csv(std::cout);
            }
            return sel.disjoint() && sel.all_verified() ? kExitOk : kExitAssertion;
        }
        if (all->parsed()) {
            ExperimentConfig cfg = load(common);
            SuiteRun run = run_suite(cfg, cfg.out_dir);
            if (cfg.format == "json") {
                json j = json::array();
                for (auto& r : run.reports) j.push_back({{"suite", r.suite}, {"pass", r.pass()}, {"error", r.error}});
                std::cout << json{{"exit_code", run.exit_code}, {"suites", j}}.dump(2) << '\n';
            } else {
                Table t{"suites", {"suite", "pass", "failed_hard_checks", "error"}, {}};
                for (auto& r : run.reports) {
                    std::string failed;
                    for (auto& c : r.checks)
                        if (c.hard && !c.pass) failed += (failed.empty() ? "" : ";") + c.id;
                    t.add({r.suite, r.pass(), failed, r.error});
                }
                t.write_csv(std::cout);
            }
            return run.exit_code;
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return kExitBudget;
    } catch (const IterationLimit& e) {
        std::cerr << "iteration limit: " << e.what() << '\n';
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitAssertion;
    }
    return kExitOk;
}
