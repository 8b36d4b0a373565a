#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "common.hpp"
#include "geometry.hpp"
#include "kernels.hpp"

namespace sucp {

struct FitResult {
    double slope = 0, intercept = 0, stderr_slope = 0;
    std::size_t samples = 0;
};

// least squares of log y against log x
inline FitResult fit_exponent(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ShapeError("fit_exponent: x and y differ in length");
    if (x.size() < 3) throw DomainError("fit_exponent: need at least 3 samples");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0 && y[i] > 0)) throw DomainError("fit_exponent: data must be positive");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    double n = static_cast<double>(lx.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0) throw DomainError("fit_exponent: x values are all equal");
    FitResult f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double rss = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        double e = ly[i] - (f.intercept + f.slope * lx[i]);
        rss += e * e;
    }
    f.stderr_slope = lx.size() > 2 ? std::sqrt(rss / (n - 2) / sxx) : 0.0;
    f.samples = lx.size();
    return f;
}

struct ExponentCheck {
    std::string name;
    FitResult fit;
    double expected = 0;
    double tolerance = 0;
    // "upper": slope <= expected + tol; "two-sided": |slope - expected| <= tol
    bool upper_only = false;
    bool pass() const {
        return upper_only ? fit.slope <= expected + tolerance : std::abs(fit.slope - expected) <= tolerance;
    }
};

struct BoundReport {
    std::string id;
    std::string sweep;
    double constant = 0;  // sup of actual / majorant
    std::map<std::string, double> worst_input;
    std::vector<ExponentCheck> exponents;
    std::map<std::string, double> extra;
    long samples = 0;
    long excluded = 0;
    long excluded_nonzero = 0;
    bool inconclusive = false;
    bool pass = false;

    void finish(bool extra_condition = true) {
        bool ok = std::isfinite(constant) && excluded_nonzero == 0 && extra_condition;
        for (auto& e : exponents) ok = ok && e.pass();
        pass = ok;
    }
};

struct SweepSpec {
    std::vector<int> N;
    double r_lo = 0.2, r_hi = 2.0;
    double t_lo = 0.5, t_hi = 2.0;
    long samples = 1000;
    std::uint64_t seed = 1;
};

// ---------------------------------------------------------------------------
// triangle-type lower bound |a - e^{i theta}| >= c (|a - 1| + |sin theta|)

inline double triangle_ratio(double a, double theta) {
    double num = std::abs(cplx(a, 0) - std::polar(1.0, theta));
    double den = std::abs(a - 1) + std::abs(std::sin(theta));
    return num / den;
}

struct TriangleSweep {
    double a_lo = -3, a_hi = 3;
    int na = 2000, ntheta = 2000;
    double c0 = 0.2;
};

inline BoundReport check_triangle_bound(const TriangleSweep& sw = {}) {
    BoundReport rep;
    rep.id = "triangle";
    rep.sweep = "a in [" + std::to_string(sw.a_lo) + "," + std::to_string(sw.a_hi) + "] x theta in [0,2pi], " +
                std::to_string(sw.na) + "x" + std::to_string(sw.ntheta) + " grid";
    double inf = std::numeric_limits<double>::infinity(), inf_pos = inf;
    double arg_a = 0, arg_t = 0, pos_a = 0, pos_t = 0;
    for (int i = 0; i < sw.na; ++i) {
        double a = sw.a_lo + (sw.a_hi - sw.a_lo) * i / (sw.na - 1);
        for (int k = 0; k < sw.ntheta; ++k) {
            double th = 2 * pi * k / (sw.ntheta - 1);
            double den = std::abs(a - 1) + std::abs(std::sin(th));
            double num = std::abs(cplx(a, 0) - std::polar(1.0, th));
            ++rep.samples;
            // the majorant vanishes only at a = 1, theta in {0, pi, 2pi}
            if (den < 1e-12) {
                ++rep.excluded;
                if (num > 1e-6) ++rep.excluded_nonzero;
                continue;
            }
            double q = num / den;
            if (q < inf) inf = q, arg_a = a, arg_t = th;
            if (a >= 0 && q < inf_pos) inf_pos = q, pos_a = a, pos_t = th;
        }
    }
    rep.constant = inf;  // here the reported constant is the infimum of the ratio
    rep.worst_input = {{"a", arg_a}, {"theta", arg_t}};
    rep.extra = {{"infimum", inf},
                 {"c0", sw.c0},
                 {"infimum_a_nonnegative", inf_pos},
                 {"argmin_a_nonnegative_a", pos_a},
                 {"argmin_a_nonnegative_theta", pos_t}};
    rep.finish(inf >= sw.c0);
    return rep;
}

// ---------------------------------------------------------------------------
// sampling helpers

inline ComplexPoint random_unit(std::mt19937_64& rng, std::size_t n = 2) {
    std::normal_distribution<double> g;
    ComplexPoint p(n);
    for (std::size_t j = 0; j < n; ++j) p[j] = cplx(g(rng), g(rng));
    return p * (1.0 / p.norm());
}

// unit vector at angle theta from e in the real geometry of C^n
inline ComplexPoint unit_at_angle(const ComplexPoint& e, double theta, std::mt19937_64& rng) {
    ComplexPoint v = random_unit(rng, e.n());
    double proj = real_inner(v, e);
    ComplexPoint perp = v - e * proj;
    double pn = perp.norm();
    if (pn < 1e-8) return unit_at_angle(e, theta, rng);
    perp = perp * (1.0 / pn);
    return e * std::cos(theta) + perp * std::sin(theta);
}

// |I^N| depends on (r, theta) only: |I|^2 = G_N^2 + G_{N-1}^2 - 2 cos(theta) G_N G_{N-1}
inline double zonal_kernel_norm(int d, double r, double theta, int N) {
    auto tp = g_tails(d, r, theta, N, true);
    double c = std::cos(theta);
    double v = tp.GN * tp.GN + tp.GN1 * tp.GN1 - 2 * c * tp.GN * tp.GN1;
    return std::sqrt(std::max(v, 0.0));
}

// ---------------------------------------------------------------------------
// near-diagonal bound: |I^N - |zeta|^{d-1} (|zeta|/|z|)^N B| <= C N^{d-1} when |z - zeta| < |zeta|/(2N)

struct NearSweep {
    std::vector<int> N{4, 8, 12, 16, 24, 32};
    long samples_per_N = 2000;
    std::uint64_t seed = 11;
    double slope_max_excess = 0.2;
};

inline double near_difference(const ComplexPoint& z, const ComplexPoint& zeta, int N) {
    // I - |zeta|^{d-1}(|zeta|/|z|)^N B = -|zeta|^{d-1}(|zeta|/|z|)^N P^{N-1}
    int d = z.d();
    double s = z.norm(), t = zeta.norm();
    auto P = taylor_kernel(z, zeta, N);
    return std::pow(t / s, N) * std::pow(t, d - 1) * P.norm();
}

inline BoundReport check_near_bound(const NearSweep& sw = {}, int workers = 1) {
    const int d = 4;
    BoundReport rep;
    rep.id = "near";
    rep.sweep = "|z-zeta| < |zeta|/(2N), |zeta| in [0.5,2], N in {4..32}";
    std::vector<double> xs, ys;
    double C = 0;
    for (int N : sw.N) {
        std::mt19937_64 rng(sw.seed + 7919ull * N);
        std::uniform_real_distribution<double> U(0, 1);
        struct S {
            ComplexPoint z, zeta;
        };
        std::vector<S> pts;
        for (long i = 0; i < sw.samples_per_N; ++i) {
            double t = 0.5 * std::pow(4.0, U(rng));
            ComplexPoint zeta = random_unit(rng) * t;
            double rad = t / (2.0 * N) * std::pow(U(rng), 0.25) * 0.999;
            ComplexPoint z = zeta + random_unit(rng) * rad;
            pts.push_back({z, zeta});
        }
        auto vals = parallel_map<double>(pts.size(), workers,
                                         [&](std::size_t i) { return near_difference(pts[i].z, pts[i].zeta, N); });
        double m = 0;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < vals.size(); ++i)
            if (vals[i] > m) m = vals[i], arg = i;
        rep.samples += static_cast<long>(vals.size());
        double ratio = m / std::pow(N, d - 1);
        if (ratio > C) {
            C = ratio;
            rep.worst_input = {{"N", double(N)},
                               {"abs_zeta", pts[arg].zeta.norm()},
                               {"dist_over_abs_zeta", distance(pts[arg].z, pts[arg].zeta) / pts[arg].zeta.norm()}};
        }
        xs.push_back(N);
        ys.push_back(m);
    }
    rep.constant = C;
    rep.exponents.push_back({"N", fit_exponent(xs, ys), double(d - 1), sw.slope_max_excess, true});
    // joint rescaling leaves the difference unchanged (degree 0)
    {
        std::mt19937_64 rng(sw.seed);
        ComplexPoint zeta = random_unit(rng);
        ComplexPoint z = zeta + random_unit(rng) * (0.2 / 16);
        double a = near_difference(z, zeta, 16), b = near_difference(z * 3.0, zeta * 3.0, 16);
        rep.extra["rescaling_ratio_lambda3"] = b / a;
        rep.extra["rescaling_predicted"] = 1.0;
    }
    rep.finish();
    return rep;
}

// ---------------------------------------------------------------------------
// far bound: |I^N| <= C N^{d-2} min{N, |1-r|^{-1}} when |z - zeta| >= |zeta|/(2N)

enum class FarRegion { inner, band, outer };

inline FarRegion far_region(double r, int N) {
    if (r < 1.0 - 1.0 / N) return FarRegion::inner;
    if (r > 1.0 + 1.0 / N) return FarRegion::outer;
    return FarRegion::band;
}

inline const char* to_string(FarRegion f) {
    switch (f) {
        case FarRegion::inner: return "inner";
        case FarRegion::band: return "band";
        case FarRegion::outer: return "outer";
    }
    return "?";
}

inline double far_majorant(int d, double r, int N) {
    double m = std::abs(1 - r) == 0 ? double(N) : std::min<double>(N, 1.0 / std::abs(1 - r));
    return std::pow(N, d - 2) * m;
}

struct FarSweep {
    std::vector<int> N{8, 16, 32, 64};
    long samples_per_N = 3000;
    double r_lo = 0.2, r_hi = 2.0;
    std::uint64_t seed = 13;
    double slope_tol = 0.2;
    int theta_grid = 721;
};

struct FarSample {
    int N;
    double r, theta, value, ratio;
    FarRegion region;
};

// sup over theta of |I^N| at fixed (r, N), theta restricted to |z - zeta| >= |zeta|/(2N)
inline double far_sup_over_theta(int d, double r, int N, int grid) {
    double m = 0;
    double lim = 1.0 / (2.0 * N);
    for (int k = 0; k < grid; ++k) {
        double th = pi * k / (grid - 1);
        double dist = std::sqrt(std::max(0.0, 1 - 2 * r * std::cos(th) + r * r));
        if (dist < lim) continue;
        m = std::max(m, zonal_kernel_norm(d, r, th, N));
    }
    return m;
}

inline BoundReport check_far_bound(const FarSweep& sw, std::vector<FarSample>* raw = nullptr, int workers = 1) {
    const int d = 4;
    BoundReport rep;
    rep.id = "far";
    rep.sweep = "|z-zeta| >= |zeta|/(2N), r in [0.2,2], N in {8,16,32,64}, regions inner/band/outer";
    std::map<FarRegion, double> regC;
    std::map<FarRegion, long> regN;
    double C = 0;
    for (int N : sw.N) {
        std::mt19937_64 rng(sw.seed + 104729ull * N);
        std::uniform_real_distribution<double> U(0, 1);
        struct P {
            ComplexPoint z, zeta;
        };
        std::vector<P> pts;
        while (static_cast<long>(pts.size()) < sw.samples_per_N) {
            double t = 0.5 * std::pow(4.0, U(rng));
            ComplexPoint zeta = random_unit(rng) * t;
            // a third of the samples land in the band |r - 1| <= 1/N
            double r = (pts.size() % 3 == 0) ? 1.0 + (2 * U(rng) - 1) / N : sw.r_lo + (sw.r_hi - sw.r_lo) * U(rng);
            double th = std::acos(2 * U(rng) - 1);
            ComplexPoint z = unit_at_angle(zeta * (1.0 / t), th, rng) * (r * t);
            if (distance(z, zeta) < t / (2.0 * N)) continue;
            pts.push_back({z, zeta});
        }
        auto vals = parallel_map<double>(pts.size(), workers,
                                         [&](std::size_t i) { return truncated_kernel(pts[i].z, pts[i].zeta, N).norm(); });
        for (std::size_t i = 0; i < pts.size(); ++i) {
            PolarData p = polar_data(pts[i].z, pts[i].zeta);
            double q = vals[i] / far_majorant(d, p.r, N);
            FarRegion reg = far_region(p.r, N);
            regC[reg] = std::max(regC[reg], q);
            regN[reg] += 1;
            if (q > C) {
                C = q;
                rep.worst_input = {{"N", double(N)}, {"r", p.r}, {"theta", p.theta}};
            }
            if (raw) raw->push_back({N, p.r, p.theta, vals[i], q, reg});
        }
        rep.samples += static_cast<long>(pts.size());
    }
    rep.constant = C;
    long tiled = 0;
    for (auto reg : {FarRegion::inner, FarRegion::band, FarRegion::outer}) {
        rep.extra[std::string("C_") + to_string(reg)] = regC[reg];
        rep.extra[std::string("samples_") + to_string(reg)] = double(regN[reg]);
        tiled += regN[reg];
    }
    rep.extra["regions_tile_sweep"] = tiled == rep.samples ? 1.0 : 0.0;

    // deterministic scaling fits: sup over theta at fixed r
    std::vector<int> fitN{8, 16, 32, 64, 128};
    std::vector<double> xs(fitN.begin(), fitN.end()), inner, band, outer;
    for (int N : fitN) {
        inner.push_back(far_sup_over_theta(d, 0.5, N, sw.theta_grid));
        band.push_back(far_sup_over_theta(d, 1.0, N, sw.theta_grid));
        outer.push_back(far_sup_over_theta(d, 1.5, N, sw.theta_grid));
    }
    rep.exponents.push_back({"N_inner_r0.5", fit_exponent(xs, inner), double(d - 2), sw.slope_tol, false});
    rep.exponents.push_back({"N_band_r1", fit_exponent(xs, band), double(d - 1), sw.slope_tol, false});
    rep.exponents.push_back({"N_outer_r1.5", fit_exponent(xs, outer), double(d - 2), sw.slope_tol, false});
    // (r - 1)^{-1} dependence on the outer region at fixed N, fitted where
    // 1/(r-1) sits well below the cap N (the crossover spans r - 1 < ~10/N)
    {
        const int N = 256;
        std::vector<double> x, y;
        for (double e = 16.0 / N; e <= 0.75 + 1e-12; e *= 1.25) {
            x.push_back(e);
            y.push_back(far_sup_over_theta(d, 1.0 + e, N, sw.theta_grid));
        }
        rep.exponents.push_back({"r_minus_1_outer_N256", fit_exponent(x, y), -1.0, 0.2, false});
    }
    bool tiles = tiled == rep.samples;
    rep.finish(tiles);
    return rep;
}

// ---------------------------------------------------------------------------
// amplitude bound: |d_r^i d_theta^k a| <= C N^{d/2-1} |sin|^{-d/2-k} (|sin| + |1-r|)^{-1-i}

struct AmplitudeSweep {
    std::vector<int> N{8, 12, 16, 24, 32};
    int r_points = 12, theta_points = 12;
    double h = 1e-4;
    double slope_tol = 0.2;
};

inline cplx amplitude_derivative(int d, double r, double th, int N, int i, int k, double h) {
    auto a = [&](double rr, double tt) { return residue_amplitude(d, rr, tt, N).a; };
    if (i == 0 && k == 0) return a(r, th);
    if (i == 1 && k == 0) return (a(r + h, th) - a(r - h, th)) / (2 * h);
    if (i == 0 && k == 1) return (a(r, th + h) - a(r, th - h)) / (2 * h);
    return (a(r + h, th + h) - a(r + h, th - h) - a(r - h, th + h) + a(r - h, th - h)) / (4 * h * h);
}

inline double amplitude_majorant(int d, double r, double th, int N, int i, int k) {
    double s = std::abs(std::sin(th));
    return std::pow(N, 0.5 * d - 1) * std::pow(s, -0.5 * d - k) * std::pow(s + std::abs(1 - r), -1.0 - i);
}

inline BoundReport check_amplitude_bound(const AmplitudeSweep& sw = {}, int workers = 1) {
    const int d = 4;
    BoundReport rep;
    rep.id = "amplitude";
    rep.sweep = "r in [0.2,0.95] u [1.05,2], |sin theta| >= 1/(2N), i,k in {0,1}";
    double C = 0;
    long inconclusive = 0;
    std::map<std::string, double> perC;
    std::vector<double> xs, ys;
    for (int N : sw.N) {
        struct P {
            double r, th;
        };
        std::vector<P> pts;
        for (int a = 0; a < sw.r_points; ++a) {
            double r = a < sw.r_points / 2 ? 0.2 + 0.75 * a / (sw.r_points / 2 - 1)
                                          : 1.05 + 0.95 * (a - sw.r_points / 2) / (sw.r_points - sw.r_points / 2 - 1);
            for (int b = 0; b < sw.theta_points; ++b) {
                double lo = std::asin(std::min(1.0, 1.0 / (2 * N)));
                double th = lo + (pi - 2 * lo) * b / (sw.theta_points - 1);
                pts.push_back({r, th});
            }
        }
        auto vals = parallel_map<std::array<double, 5>>(pts.size(), workers, [&](std::size_t q) {
            std::array<double, 5> out{};
            double r = pts[q].r, th = pts[q].th;
            int idx = 0;
            bool bad = false;
            for (int i = 0; i <= 1; ++i)
                for (int k = 0; k <= 1; ++k) {
                    if (i + k == 2) continue;
                    cplx v = amplitude_derivative(d, r, th, N, i, k, sw.h);
                    if (i + k == 1) {
                        // step-halving: O(h^2) error means the two estimates agree closely
                        cplx v2 = amplitude_derivative(d, r, th, N, i, k, sw.h / 2);
                        if (std::abs(v - v2) > 1e-3 * std::abs(v2) + 1e-6) bad = true;
                        v = v2;
                    }
                    out[idx++] = std::abs(v) / amplitude_majorant(d, r, th, N, i, k);
                }
            out[3] = std::abs(residue_amplitude(d, r, th, N).a);
            out[4] = bad ? 1.0 : 0.0;
            return out;
        });
        double supA = 0;
        for (std::size_t q = 0; q < pts.size(); ++q) {
            const char* names[3] = {"C_i0k0", "C_i0k1", "C_i1k0"};
            for (int t = 0; t < 3; ++t) {
                perC[names[t]] = std::max(perC[names[t]], vals[q][t]);
                if (vals[q][t] > C) {
                    C = vals[q][t];
                    rep.worst_input = {{"N", double(N)}, {"r", pts[q].r}, {"theta", pts[q].th}, {"order", double(t)}};
                }
            }
            inconclusive += vals[q][4] > 0;
            // N-growth of |a| normalized by the geometric factors
            supA = std::max(supA, vals[q][0]);
        }
        rep.samples += static_cast<long>(pts.size());
        xs.push_back(N);
        ys.push_back(supA * std::pow(N, 0.5 * d - 1));
    }
    rep.constant = C;
    rep.extra = perC;
    rep.extra["fd_inconclusive_points"] = double(inconclusive);
    rep.inconclusive = inconclusive > 0;
    rep.exponents.push_back({"N", fit_exponent(xs, ys), 0.5 * d - 1, sw.slope_tol, true});
    rep.finish();
    return rep;
}

}  // namespace sucp
