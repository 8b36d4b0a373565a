#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "common.hpp"
#include "quadrature.hpp"
#include "verification.hpp"

namespace sucp {

// u = exp(-|x|^{-eps}) on C^n with potential V = |dbar u| / |u| = (eps/2) |x|^{-eps-1}.
struct CounterexampleParams {
    double eps = 0.1;
    double q = 3;
    int n = 2;

    CounterexampleParams() = default;
    CounterexampleParams(double e, double qq, int nn) : eps(e), q(qq), n(nn) { validate(); }

    void validate() const {
        if (!(eps > 0)) throw DomainError("CounterexampleParams: eps must be positive");
        if (!(q >= 1)) throw DomainError("CounterexampleParams: q must be at least 1");
        if (n < 1) throw DomainError("CounterexampleParams: n must be positive");
    }
    // kappa = 2n - q(1+eps): V^q is integrable near 0 iff kappa > 0
    double kappa() const { return 2.0 * n - q * (1 + eps); }
    bool integrable() const { return kappa() > 0; }
};

struct FieldSample {
    double radius = 0;
    double u = 0, V = 0;
    bool singular = false;  // origin: u = 0, V = +inf, excluded from integrals
};

inline double counterexample_u(double s, double eps) { return s > 0 ? std::exp(-std::pow(s, -eps)) : 0.0; }
inline double counterexample_V(double s, double eps) {
    return s > 0 ? 0.5 * eps * std::pow(s, -eps - 1) : std::numeric_limits<double>::infinity();
}

inline std::vector<FieldSample> counterexample_field(const CounterexampleParams& P, const std::vector<double>& radii) {
    P.validate();
    std::vector<FieldSample> out;
    out.reserve(radii.size());
    for (double s : radii) {
        if (s < 0) throw DomainError("counterexample_field: negative radius");
        FieldSample f;
        f.radius = s;
        f.singular = s == 0;
        f.u = counterexample_u(s, P.eps);
        f.V = counterexample_V(s, P.eps);
        out.push_back(f);
    }
    return out;
}

// int_{delta < |x| < 1} V^q dV = (eps/2)^q |S^{2n-1}| (1 - delta^kappa) / kappa
inline double counterexample_closed_form(const CounterexampleParams& P, double delta = 0) {
    double k = P.kappa();
    double pre = std::pow(P.eps / 2, P.q) * sphere_area(2 * P.n);
    if (delta == 0) return k > 0 ? pre / k : std::numeric_limits<double>::infinity();
    if (k == 0) return pre * std::log(1 / delta);
    return pre * -std::expm1(k * std::log(delta)) / k;
}

// log of the same integral by quadrature in y = log(1/s) on [0, Y], Y = log(1/delta):
// int_0^Y e^{-kappa y} dy, so the integrand never over- or underflows.
inline double counterexample_log_integral(const CounterexampleParams& P, double Y, int panels = 64, int per_panel = 16) {
    if (!(Y > 0)) throw DomainError("counterexample_log_integral: cutoff must lie inside the unit ball");
    double k = P.kappa();
    Rule1D r = composite_gauss(uniform_edges(0.0, Y, panels), per_panel);
    std::vector<double> terms(r.x.size());
    for (std::size_t i = 0; i < r.x.size(); ++i) terms[i] = std::log(r.w[i]) - k * r.x[i];
    return P.q * std::log(P.eps / 2) + std::log(sphere_area(2 * P.n)) + log_sum_exp(terms);
}

// Numerical value on the convergent side: the cutoff is pushed until e^{-kappa Y} is negligible.
inline double counterexample_integral(const CounterexampleParams& P) {
    if (!P.integrable()) return std::numeric_limits<double>::infinity();
    double Y = 60.0 / P.kappa();
    return std::exp(counterexample_log_integral(P, Y, 256));
}

struct DivergenceFit {
    FitResult fit;
    double slope = 0;          // d log I / d log(1/delta)
    double expected = 0;       // q(1+eps) - 2n when divergent, 0 otherwise
    bool divergent = false;    // numerical diagnosis
};

// Cutoff sweep: log I against y = log(1/delta) on [y_lo, y_hi]; the slope tends to
// max(0, -kappa). Diagnosed divergent when the slope exceeds `threshold`.
inline DivergenceFit divergence_fit(const CounterexampleParams& P, double y_lo = 1000, double y_hi = 2000,
                                    int points = 11, double threshold = 1e-3) {
    std::vector<double> x, y;
    for (int i = 0; i < points; ++i) {
        double Y = y_lo + (y_hi - y_lo) * i / (points - 1);
        x.push_back(Y);
        y.push_back(counterexample_log_integral(P, Y, 512));
    }
    // linear fit of log I against Y
    double mx = 0, my = 0;
    for (int i = 0; i < points; ++i) mx += x[i], my += y[i];
    mx /= points;
    my /= points;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < points; ++i) sxx += (x[i] - mx) * (x[i] - mx), sxy += (x[i] - mx) * (y[i] - my);
    DivergenceFit d;
    d.slope = sxy / sxx;
    d.fit.slope = d.slope;
    d.fit.intercept = my - d.slope * mx;
    d.fit.samples = points;
    d.expected = P.integrable() ? 0.0 : -P.kappa();
    d.divergent = d.slope > threshold;
    return d;
}

struct VanishingRow {
    int N = 0;
    double r = 0;
    double log_value = 0;  // log(r^{-N} int_{B_r} |u|^{p'})
};

// log int_{B_r} |u|^{p'} for u = exp(-|x|^{-eps}) on C^n. With t = p' s^{-eps} = t0 + v and
// a = 2n/eps this is |S^{2n-1}| eps^{-1} p'^a e^{-t0} int_0^inf e^{-v} (t0 + v)^{-a-1} dv,
// which stays well scaled for r down to the smallest normal doubles.
inline double log_ball_moment(double r, double eps, double pp, int n, int per_panel = 16) {
    const double a = 2.0 * n / eps;
    const double t0 = pp * std::pow(r, -eps);
    // the integrand decays at rate 1 + (a+1)/(t0+v); grade geometrically from v = 0
    double h0 = 0.25 / (1.0 + (a + 1) / t0);
    std::vector<double> edges{0.0};
    for (double h = h0; edges.back() < 800; h *= 2) edges.push_back(edges.back() + h);
    Rule1D rule = composite_gauss(edges, per_panel);
    std::vector<double> terms(rule.x.size());
    for (std::size_t i = 0; i < rule.x.size(); ++i)
        terms[i] = std::log(rule.w[i]) - rule.x[i] - (a + 1) * std::log(t0 + rule.x[i]);
    return std::log(sphere_area(2 * n)) - std::log(eps) + a * std::log(pp) - t0 + log_sum_exp(terms);
}

inline std::vector<VanishingRow> vanishing_order_scan(double eps, double pp, int n, const std::vector<int>& Ns,
                                                      const std::vector<double>& radii) {
    std::vector<VanishingRow> rows;
    for (double r : radii) {
        if (!(r > 0 && r < 1)) throw DomainError("vanishing_order_scan: radii must lie in (0,1)");
        double m = log_ball_moment(r, eps, pp, n);
        for (int N : Ns) rows.push_back({N, r, m - N * std::log(r)});
    }
    return rows;
}

// Per column N: the limit r -> 0 is zero. The values must fall monotonically over the
// smallest quarter of the radii and end below e^{log_floor}; larger radii may still rise.
inline bool infinite_order_vanishing(const std::vector<VanishingRow>& rows, int N, double log_floor = -230) {
    std::vector<std::pair<double, double>> col;
    for (auto& v : rows)
        if (v.N == N) col.push_back({v.r, v.log_value});
    if (col.size() < 4) return false;
    std::sort(col.begin(), col.end());
    std::size_t tail = std::max<std::size_t>(2, col.size() / 4);
    for (std::size_t i = 0; i + 1 < tail; ++i)
        if (!(col[i].second < col[i + 1].second)) return false;
    return col.front().second < log_floor;
}

inline std::vector<double> log_spaced(double lo, double hi, int count) {
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) v[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (count - 1));
    return v;
}

}  // namespace sucp
