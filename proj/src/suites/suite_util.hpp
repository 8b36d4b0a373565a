#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "sucp/report.hpp"
#include "sucp/verification.hpp"

namespace sucp::detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// one independent stream per sample index, so parallel sweeps do not depend on scheduling
inline std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(index)));
}

inline void add_bound_report(Report& rep, const BoundReport& b, bool hard = true) {
    rep.checks.push_back(check_true(b.id + "_bound", b.pass, b.sweep, hard));
    json j;
    j["constant"] = json_number(b.constant);
    j["samples"] = b.samples;
    j["excluded"] = b.excluded;
    j["excluded_nonzero"] = b.excluded_nonzero;
    j["inconclusive"] = b.inconclusive;
    json w = json::object();
    for (auto& [k, v] : b.worst_input) w[k] = json_number(v);
    j["worst_input"] = w;
    json ex = json::object();
    for (auto& [k, v] : b.extra) ex[k] = json_number(v);
    j["extra"] = ex;
    json fits = json::array();
    for (auto& e : b.exponents)
        fits.push_back({{"name", e.name},
                        {"slope", json_number(e.fit.slope)},
                        {"stderr", json_number(e.fit.stderr_slope)},
                        {"expected", e.expected},
                        {"tolerance", e.tolerance},
                        {"upper_only", e.upper_only},
                        {"pass", e.pass()}});
    j["exponents"] = fits;
    rep.summary[b.id] = j;
}

}  // namespace sucp::detail
