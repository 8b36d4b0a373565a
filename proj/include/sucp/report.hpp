#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "config.hpp"

namespace sucp {

// Shortest-roundtrip-ish fixed format so repeated runs print identical bytes.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // prefer the 15-digit form when it round-trips
    char shortbuf[40];
    std::snprintf(shortbuf, sizeof shortbuf, "%.15g", v);
    if (std::strtod(shortbuf, nullptr) == v) return shortbuf;
    return buf;
}

// Non-finite doubles become strings so the JSON stays valid.
inline json json_number(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

using Cell = std::variant<double, long long, std::string, bool>;

inline std::string cell_text(const Cell& c) {
    if (auto d = std::get_if<double>(&c)) return format_double(*d);
    if (auto i = std::get_if<long long>(&c)) return std::to_string(*i);
    if (auto b = std::get_if<bool>(&c)) return *b ? "true" : "false";
    return std::get<std::string>(c);
}

// RFC 4180 field quoting; records end in LF
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row) {
        if (row.size() != columns.size()) throw ShapeError("Table " + name + ": row width differs from header");
        rows.push_back(std::move(row));
    }

    void write_csv(std::ostream& os) const {
        for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << csv_field(columns[i]);
        os << '\n';
        for (auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(cell_text(r[i]));
            os << '\n';
        }
    }

    json to_json() const {
        json rows_j = json::array();
        for (auto& r : rows) {
            json o = json::object();
            for (std::size_t i = 0; i < r.size(); ++i) {
                const Cell& c = r[i];
                if (auto d = std::get_if<double>(&c))
                    o[columns[i]] = json_number(*d);
                else if (auto n = std::get_if<long long>(&c))
                    o[columns[i]] = *n;
                else if (auto b = std::get_if<bool>(&c))
                    o[columns[i]] = *b;
                else
                    o[columns[i]] = std::get<std::string>(c);
            }
            rows_j.push_back(std::move(o));
        }
        return rows_j;
    }
};

struct Check {
    std::string id;
    bool pass = false;
    bool hard = true;  // hard checks decide the exit status; soft ones are reported
    double value = 0;
    double threshold = 0;
    std::string comparator;  // how value relates to threshold when passing: "<=", ">=", "==", "in"
    std::string note;
};

inline Check check_le(std::string id, double value, double threshold, std::string note = {}, bool hard = true) {
    return {std::move(id), value <= threshold, hard, value, threshold, "<=", std::move(note)};
}
inline Check check_ge(std::string id, double value, double threshold, std::string note = {}, bool hard = true) {
    return {std::move(id), value >= threshold, hard, value, threshold, ">=", std::move(note)};
}
inline Check check_true(std::string id, bool ok, std::string note = {}, bool hard = true) {
    return {std::move(id), ok, hard, ok ? 1.0 : 0.0, 1.0, "==", std::move(note)};
}

struct Report {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<Check> checks;
    json summary = json::object();
    std::deque<Table> tables;  // references returned by table() survive later additions
    std::string started;
    double elapsed_seconds = 0;
    std::string error;  // set when the suite aborted

    bool pass() const {
        if (!error.empty()) return false;
        for (auto& c : checks)
            if (c.hard && !c.pass) return false;
        return true;
    }
    const Check* find(const std::string& id) const {
        for (auto& c : checks)
            if (c.id == id) return &c;
        return nullptr;
    }
    Table& table(const std::string& name, std::vector<std::string> columns) {
        tables.push_back({name, std::move(columns), {}});
        return tables.back();
    }
    std::string table_file(const Table& t) const { return suite + "_" + t.name + ".csv"; }

    json to_json() const {
        json j;
        j["schema_version"] = 1;
        j["suite"] = suite;
        j["seed"] = seed;
        j["pass"] = pass();
        json cs = json::array();
        for (auto& c : checks) {
            cs.push_back({{"id", c.id},
                          {"pass", c.pass},
                          {"hard", c.hard},
                          {"value", json_number(c.value)},
                          {"threshold", json_number(c.threshold)},
                          {"comparator", c.comparator},
                          {"note", c.note}});
        }
        j["checks"] = cs;
        j["summary"] = summary;
        json ts = json::array();
        for (auto& t : tables) ts.push_back({{"name", t.name}, {"file", table_file(t)}, {"rows", t.rows.size()}});
        j["tables"] = ts;
        j["error"] = error.empty() ? json(nullptr) : json(error);
        // the only field allowed to differ between identical runs
        j["timestamp"] = {{"started", started}, {"elapsed_seconds", elapsed_seconds}};
        return j;
    }

    void write(const std::filesystem::path& dir) const {
        std::filesystem::create_directories(dir);
        {
            std::ofstream os(dir / (suite + ".json"), std::ios::binary);
            os << to_json().dump(2) << '\n';
        }
        for (auto& t : tables) {
            std::ofstream os(dir / table_file(t), std::ios::binary);
            t.write_csv(os);
        }
    }
};

inline std::string utc_timestamp() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Times a suite body and stamps the report.
template <class Fn>
Report timed_report(const std::string& suite, std::uint64_t seed, Fn&& body) {
    Report r;
    r.suite = suite;
    r.seed = seed;
    r.started = utc_timestamp();
    auto t0 = std::chrono::steady_clock::now();
    body(r);
    r.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace sucp
