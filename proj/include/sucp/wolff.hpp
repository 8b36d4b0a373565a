#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "common.hpp"
#include "geometry.hpp"
#include "weight.hpp"

namespace sucp {

struct Atom {
    double x = 0, w = 0;
};

// Atoms sorted by position; weights kept as logs so tilts never overflow.
class DiscreteMeasure {
public:
    DiscreteMeasure() = default;
    explicit DiscreteMeasure(std::vector<Atom> atoms) {
        if (atoms.empty()) throw DomainError("DiscreteMeasure: no atoms");
        for (const Atom& a : atoms) {
            if (!std::isfinite(a.x)) throw DomainError("DiscreteMeasure: non-finite position");
            if (!(a.w > 0) || !std::isfinite(a.w)) throw DomainError("DiscreteMeasure: weights must be positive");
        }
        std::stable_sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
        x_.reserve(atoms.size());
        logw_.reserve(atoms.size());
        for (const Atom& a : atoms) {
            x_.push_back(a.x);
            logw_.push_back(std::log(a.w));
        }
    }
    static DiscreteMeasure from_log_weights(std::vector<double> x, std::vector<double> logw) {
        if (x.size() != logw.size() || x.empty()) throw ShapeError("DiscreteMeasure: positions and weights differ");
        std::vector<std::size_t> idx(x.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
        DiscreteMeasure m;
        for (std::size_t i : idx) {
            if (!std::isfinite(x[i]) || !std::isfinite(logw[i]))
                throw DomainError("DiscreteMeasure: non-finite atom");
            m.x_.push_back(x[i]);
            m.logw_.push_back(logw[i]);
        }
        return m;
    }

    std::size_t size() const { return x_.size(); }
    const std::vector<double>& positions() const { return x_; }
    const std::vector<double>& log_weights() const { return logw_; }
    double span() const { return std::max(std::abs(x_.front()), std::abs(x_.back())); }
    double log_mass() const { return log_sum_exp(logw_); }

private:
    std::vector<double> x_, logw_;
};

// mu_k = e^{kx} mu. Stored as (base, k) so that tilting twice adds the exponents exactly.
class TiltedMeasure {
public:
    TiltedMeasure(const DiscreteMeasure& base, double k) : base_(&base), k_(k) {
        const auto& x = base.positions();
        const auto& lw = base.log_weights();
        logw_.resize(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) logw_[i] = lw[i] + k * x[i];
        offset_ = *std::max_element(logw_.begin(), logw_.end());
        scaled_.resize(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) scaled_[i] = std::exp(logw_[i] - offset_);
        CompensatedSum<double> s;
        for (double v : scaled_) s.add(v);
        total_ = s.value();
    }

    const DiscreteMeasure& base() const { return *base_; }
    double k() const { return k_; }
    double offset() const { return offset_; }
    // weights divided by e^{offset}; the largest is exactly 1
    const std::vector<double>& scaled_weights() const { return scaled_; }
    double scaled_total() const { return total_; }
    double log_mass() const { return offset_ + std::log(total_); }

    double scaled_mass(const LogInterval& I) const {
        const auto& x = base_->positions();
        auto lo = std::lower_bound(x.begin(), x.end(), I.lo);
        auto hi = std::upper_bound(x.begin(), x.end(), I.hi);
        CompensatedSum<double> s;
        for (auto it = lo; it != hi; ++it) s.add(scaled_[static_cast<std::size_t>(it - x.begin())]);
        return s.value();
    }
    double mass_fraction(const LogInterval& I) const { return scaled_mass(I) / total_; }
    std::vector<double> fractions() const {
        std::vector<double> f(scaled_);
        for (double& v : f) v /= total_;
        return f;
    }

private:
    const DiscreteMeasure* base_;
    double k_;
    double offset_ = 0, total_ = 0;
    std::vector<double> logw_, scaled_;
};

inline TiltedMeasure tilt(const DiscreteMeasure& mu, double k) { return TiltedMeasure(mu, k); }
inline TiltedMeasure tilt(const TiltedMeasure& mu, double k) { return TiltedMeasure(mu.base(), mu.k() + k); }

struct DecayRow {
    double T = 0;
    double value = 0;  // (1/T) log mu{|x| > T}; -inf when the tail is empty
};

struct DecayDiagnostic {
    std::vector<DecayRow> rows;
    bool fast_decay = false;  // functional keeps falling rather than levelling off
};

inline DecayDiagnostic decay_diagnostic(const DiscreteMeasure& mu, const std::vector<double>& T) {
    DecayDiagnostic d;
    const auto& x = mu.positions();
    const auto& lw = mu.log_weights();
    for (double t : T) {
        if (!(t > 0)) throw DomainError("decay_diagnostic: T must be positive");
        std::vector<double> tail;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (std::abs(x[i]) > t) tail.push_back(lw[i]);
        double v = tail.empty() ? -std::numeric_limits<double>::infinity() : log_sum_exp(tail) / t;
        d.rows.push_back({t, v});
    }
    // compare the last finite value with the one at half its T
    const DecayRow* last = nullptr;
    for (auto& r : d.rows)
        if (std::isfinite(r.value)) last = &r;
    if (!last) {
        d.fast_decay = true;
        return d;
    }
    const DecayRow* half = nullptr;
    for (auto& r : d.rows)
        if (std::isfinite(r.value) && r.T <= last->T / 2) half = &r;
    d.fast_decay = half && last->value < 1.5 * half->value;
    return d;
}

// Shortest atom-delimited interval holding at least half the tilted mass; leftmost on ties.
inline LogInterval half_mass_interval(const TiltedMeasure& mu) {
    const auto& x = mu.base().positions();
    const auto& w = mu.scaled_weights();
    const std::size_t n = x.size();
    std::vector<long double> prefix(n + 1, 0.0L);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + w[i];
    const long double half = prefix[n] / 2;
    std::size_t bi = 0, bj = n - 1;
    double best = std::numeric_limits<double>::infinity();
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (j < i) j = i;
        while (j < n && prefix[j + 1] - prefix[i] < half) ++j;
        if (j == n) break;
        double len = x[j] - x[i];
        if (len < best) {
            best = len;
            bi = i;
            bj = j;
        }
    }
    LogInterval I(x[bi], x[bj]);
    // long-double prefix sums can misjudge a borderline window; widen until the direct sum agrees
    while (2 * mu.scaled_mass(I) < mu.scaled_total() && bj + 1 < n) I = LogInterval(x[bi], x[++bj]);
    return I;
}

inline LogInterval inflate(const LogInterval& I, double min_length) {
    if (I.length() >= min_length) return I;
    double c = 0.5 * (I.lo + I.hi);
    return LogInterval(c - min_length / 2, c + min_length / 2);
}

struct SelectedInterval {
    LogInterval I;
    double k = 0;
    double mass_fraction = 0;  // mu_k(I) / ||mu_k||, at least 1/2
    bool verified = false;
};

struct IntervalSelection {
    double N = 0;
    std::vector<SelectedInterval> intervals;
    double sum_inverse_length = 0;
    double C = 0;  // sum_inverse_length / N
    long k_steps = 0;

    bool disjoint() const {
        for (std::size_t a = 0; a < intervals.size(); ++a)
            for (std::size_t b = a + 1; b < intervals.size(); ++b) {
                const auto &I = intervals[a].I, &J = intervals[b].I;
                if (!(I.hi < J.lo || J.hi < I.lo)) return false;
            }
        return true;
    }
    bool all_verified() const {
        for (auto& s : intervals)
            if (!s.verified) return false;
        return !intervals.empty();
    }
    bool k_in_range() const {
        for (auto& s : intervals)
            if (s.k < N || s.k > 2 * N) return false;
        return true;
    }
};

inline constexpr long kWolffMaxSteps = 2'000'000;

// Greedy construction: tilts on a k-grid over [N, 2N], half-mass interval per k, inflated
// to length 1/N, accepted in k order when disjoint from everything accepted so far.
inline IntervalSelection select_intervals(const DiscreteMeasure& mu, double N, int workers = 1) {
    if (!(N > 0)) throw DomainError("select_intervals: N must be positive");
    double span = mu.span();
    double dk = span > 0 ? 1.0 / (2.0 * span) : N;
    long steps = static_cast<long>(std::ceil(N / dk));
    if (steps + 1 > kWolffMaxSteps) throw BudgetExceeded("select_intervals: k-grid too fine", double(steps));
    std::vector<double> ks(static_cast<std::size_t>(steps + 1));
    for (long i = 0; i <= steps; ++i) ks[i] = std::min(2 * N, N + i * dk);
    auto hm = parallel_map<LogInterval>(ks.size(), workers,
                                        [&](std::size_t i) { return inflate(half_mass_interval(tilt(mu, ks[i])), 1.0 / N); });
    IntervalSelection sel;
    sel.N = N;
    sel.k_steps = static_cast<long>(ks.size());
    std::vector<LogInterval> accepted;  // sorted by lo
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const LogInterval& I = hm[i];
        auto it = std::lower_bound(accepted.begin(), accepted.end(), I.lo,
                                   [](const LogInterval& a, double v) { return a.lo < v; });
        bool clash = (it != accepted.end() && !(I.hi < it->lo)) || (it != accepted.begin() && !(std::prev(it)->hi < I.lo));
        if (clash) continue;
        accepted.insert(it, I);
        SelectedInterval s;
        s.I = I;
        s.k = ks[i];
        TiltedMeasure t = tilt(mu, s.k);
        s.mass_fraction = t.mass_fraction(I);
        s.verified = 2 * t.scaled_mass(I) >= t.scaled_total();
        sel.intervals.push_back(s);
    }
    if (sel.intervals.empty()) throw Error("select_intervals: empty selection");
    CompensatedSum<double> s;
    for (auto& x : sel.intervals) s.add(1.0 / x.I.length());
    sel.sum_inverse_length = s.value();
    sel.C = sel.sum_inverse_length / N;
    return sel;
}

// A radial cell of a sampled field: radius, volume element, and the value V|f|.
struct FieldCell {
    double radius = 0, volume = 0, value = 0;
};

// Push int (V|f|)^p over each cell onto the line at x = psi(log 1/radius).
inline DiscreteMeasure sucp_measure(const std::vector<FieldCell>& cells, const CarlemanWeight& w, double p) {
    std::vector<double> x, lw;
    for (const FieldCell& c : cells) {
        if (!(c.radius > 0)) throw DomainError("sucp_measure: radius must be positive");
        if (c.value < 0 || c.volume < 0) throw DomainError("sucp_measure: negative sample");
        if (c.value == 0 || c.volume == 0) continue;
        x.push_back(w.psi(-std::log(c.radius)));
        lw.push_back(p * std::log(c.value) + std::log(c.volume));
    }
    if (x.empty()) throw DomainError("sucp_measure: zero total mass");
    return DiscreteMeasure::from_log_weights(std::move(x), std::move(lw));
}

// log of int_{A(psi^{-1} gamma)} (e^{nu psi} V|f|)^p summed directly over the cells
inline double weighted_field_log_mass(const std::vector<FieldCell>& cells, const CarlemanWeight& w, double p,
                                      double nu, const LogInterval& gamma) {
    std::vector<double> terms;
    for (const FieldCell& c : cells) {
        if (c.value == 0 || c.volume == 0) continue;
        double psi = w.psi(-std::log(c.radius));
        if (!gamma.contains(psi)) continue;
        terms.push_back(p * (nu * psi + std::log(c.value)) + std::log(c.volume));
    }
    return terms.empty() ? -std::numeric_limits<double>::infinity() : log_sum_exp(terms);
}

// log mu_k(gamma) from the tilted measure
inline double tilted_log_mass(const DiscreteMeasure& mu, double k, const LogInterval& gamma) {
    std::vector<double> terms;
    const auto& x = mu.positions();
    const auto& lw = mu.log_weights();
    for (std::size_t i = 0; i < x.size(); ++i)
        if (gamma.contains(x[i])) terms.push_back(lw[i] + k * x[i]);
    return terms.empty() ? -std::numeric_limits<double>::infinity() : log_sum_exp(terms);
}

// test measures
inline DiscreteMeasure point_mass(double x = 0, double w = 1) { return DiscreteMeasure({{x, w}}); }

inline DiscreteMeasure discretized_gaussian(double lo = -20, double hi = 20, int atoms = 4001) {
    std::vector<double> x(atoms), lw(atoms);
    double h = (hi - lo) / (atoms - 1);
    for (int i = 0; i < atoms; ++i) {
        x[i] = lo + i * h;
        lw[i] = -x[i] * x[i] + std::log(h);
    }
    return DiscreteMeasure::from_log_weights(std::move(x), std::move(lw));
}

inline DiscreteMeasure discretized_exponential(double lo = -20, double hi = 20, int atoms = 4001) {
    std::vector<double> x(atoms), lw(atoms);
    double h = (hi - lo) / (atoms - 1);
    for (int i = 0; i < atoms; ++i) {
        x[i] = lo + i * h;
        lw[i] = -std::abs(x[i]) + std::log(h);
    }
    return DiscreteMeasure::from_log_weights(std::move(x), std::move(lw));
}

// two Gaussian clusters at -c and +c with masses m_left, m_right
inline DiscreteMeasure two_cluster(double c = 3, double width = 0.25, double m_left = 0.6, double m_right = 0.4,
                                   int per_cluster = 401) {
    std::vector<double> x, lw;
    for (int side = 0; side < 2; ++side) {
        double center = side == 0 ? -c : c, mass = side == 0 ? m_left : m_right;
        std::vector<double> loc;
        for (int i = 0; i < per_cluster; ++i) {
            double t = -4 * width + 8 * width * i / (per_cluster - 1);
            x.push_back(center + t);
            loc.push_back(-0.5 * t * t / (width * width));
        }
        double z = log_sum_exp(loc);
        for (double v : loc) lw.push_back(v - z + std::log(mass));
    }
    return DiscreteMeasure::from_log_weights(std::move(x), std::move(lw));
}

}  // namespace sucp
