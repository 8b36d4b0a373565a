#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"
#include "gegenbauer.hpp"
#include "geometry.hpp"
#include "weight.hpp"

namespace sucp {

enum class Provenance { direct, closed_series, closed_residue, closed_subtraction };

inline const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::direct: return "direct";
        case Provenance::closed_series: return "closed-form/series";
        case Provenance::closed_residue: return "closed-form/residue";
        case Provenance::closed_subtraction: return "closed-form/subtraction";
    }
    return "?";
}

struct KernelValue {
    std::vector<cplx> c;
    Provenance path = Provenance::direct;
    bool precision_warning = false;

    std::size_t n() const { return c.size(); }
    double norm() const {
        double s = 0;
        for (auto v : c) s += std::norm(v);
        return std::sqrt(s);
    }
};

// the closed form carries this constant in front of the h-terms for every d
inline constexpr double kClosedFormConstant = -2.0;

inline KernelValue bm_kernel(const ComplexPoint& z, const ComplexPoint& zeta) {
    z.same_dim(zeta);
    ComplexPoint diff = zeta - z;
    double dist = diff.norm();
    if (dist == 0) throw SingularityError("bm_kernel: z = zeta");
    double den = std::pow(dist, z.d());
    KernelValue k;
    k.path = Provenance::direct;
    for (std::size_t j = 0; j < z.n(); ++j) k.c.push_back(std::conj(diff[j]) / den);
    return k;
}

namespace detail {

template <class T>
struct PairGeometry {
    T s, t, r, c;
    std::vector<std::complex<T>> zhat, zetahat;
};

template <class T>
PairGeometry<T> pair_geometry(const ComplexPoint& z, const ComplexPoint& zeta) {
    PairGeometry<T> g;
    std::size_t n = z.n();
    T s2 = 0, t2 = 0, dot = 0;
    for (std::size_t j = 0; j < n; ++j) {
        std::complex<T> a(z[j].real(), z[j].imag()), b(zeta[j].real(), zeta[j].imag());
        s2 += std::norm(a);
        t2 += std::norm(b);
        dot += (a * std::conj(b)).real();
    }
    g.s = std::sqrt(s2);
    g.t = std::sqrt(t2);
    g.r = g.s / g.t;
    g.zetahat.resize(n);
    g.zhat.resize(n);
    for (std::size_t j = 0; j < n; ++j)
        g.zetahat[j] = std::complex<T>(zeta[j].real(), zeta[j].imag()) / g.t;
    if (g.s == 0) {
        // direction is irrelevant at z = 0; any unit vector gives the same derivative
        g.zhat = g.zetahat;
        g.c = 1;
    } else {
        for (std::size_t j = 0; j < n; ++j) g.zhat[j] = std::complex<T>(z[j].real(), z[j].imag()) / g.s;
        g.c = std::clamp(dot / (g.s * g.t), T(-1), T(1));
    }
    return g;
}

}  // namespace detail

// Degree N-1 Taylor polynomial of B_j(., zeta) at 0, through the zonal expansion:
// |zeta|^{d-2} P_j^{N-1} = (2/(d-2)) d/dz_j sum_{m=1}^{N} r^m P_m^{((d-2)/2)}(cos theta).
template <class T = long double>
std::vector<std::complex<T>> taylor_components(const ComplexPoint& z, const ComplexPoint& zeta, int N) {
    z.same_dim(zeta);
    if (zeta.is_zero()) throw DomainError("taylor_kernel: zeta = 0");
    if (N < 1) throw DomainError("taylor_kernel: need N >= 1");
    const int d = z.d();
    const double lam = 0.5 * (d - 2);
    auto g = detail::pair_geometry<T>(z, zeta);
    auto P = gegenbauer_table<T>(lam, N, g.c);
    auto Q = gegenbauer_table<T>(lam + 1, N - 1, g.c);
    CompensatedSum<T> Sa, Sb;
    T rp = 1;  // r^{m-1}
    for (int m = 1; m <= N; ++m) {
        Sa.add(rp * m * P[m]);
        Sb.add(rp * 2 * T(lam) * Q[m - 1]);
        rp *= g.r;
    }
    T sa = Sa.value(), sb = Sb.value();
    T scale = T(2) / T(d - 2) * std::pow(g.t, T(2 - d)) / (2 * g.t);
    std::vector<std::complex<T>> out(z.n());
    for (std::size_t j = 0; j < z.n(); ++j) {
        auto zb = std::conj(g.zhat[j]), wb = std::conj(g.zetahat[j]);
        out[j] = scale * (sa * zb + sb * (wb - g.c * zb));
    }
    return out;
}

inline KernelValue taylor_kernel(const ComplexPoint& z, const ComplexPoint& zeta, int N) {
    auto p = taylor_components<long double>(z, zeta, N);
    KernelValue k;
    k.path = Provenance::direct;
    for (auto v : p) k.c.emplace_back(static_cast<double>(v.real()), static_cast<double>(v.imag()));
    return k;
}

// I_j^N = (|zeta|/|z|)^N |zeta|^{d-1} (B_j - P_j^{N-1}), evaluated literally in long double.
inline KernelValue truncated_kernel_direct(const ComplexPoint& z, const ComplexPoint& zeta, int N) {
    z.same_dim(zeta);
    if (z.is_zero()) throw DomainError("truncated_kernel_direct: z = 0");
    if (zeta.is_zero()) throw DomainError("truncated_kernel_direct: zeta = 0");
    if (N < 0) throw DomainError("truncated_kernel_direct: N < 0");
    using T = long double;
    const int d = z.d();
    auto g = detail::pair_geometry<T>(z, zeta);
    T dist2 = 0;
    std::vector<std::complex<T>> diff(z.n());
    for (std::size_t j = 0; j < z.n(); ++j) {
        diff[j] = std::complex<T>(zeta[j].real() - T(z[j].real()), zeta[j].imag() - T(z[j].imag()));
        dist2 += std::norm(diff[j]);
    }
    if (dist2 == 0) throw SingularityError("truncated_kernel_direct: z = zeta");
    T den = std::pow(dist2, T(d) / 2);
    std::vector<std::complex<T>> P;
    if (N >= 1) P = taylor_components<T>(z, zeta, N);
    T pre = std::pow(g.t / g.s, T(N)) * std::pow(g.t, T(d - 1));
    KernelValue k;
    k.path = Provenance::direct;
    T worst = 0;
    for (std::size_t j = 0; j < z.n(); ++j) {
        std::complex<T> b = std::conj(diff[j]) / den;
        std::complex<T> v = b;
        if (N >= 1) {
            v -= P[j];
            T big = std::max(std::abs(b), std::abs(P[j]));
            T ab = std::abs(v);
            if (ab > 0) worst = std::max(worst, big / ab);
        }
        v *= pre;
        k.c.emplace_back(static_cast<double>(v.real()), static_cast<double>(v.imag()));
    }
    k.precision_warning = (g.r > 0.95 && N > 12) || worst > 1e8L;
    return k;
}

// The h-factors of the closed form.
inline cplx h_j1(const ComplexPoint& z, const ComplexPoint& zeta, std::size_t j) {
    double s = z.norm(), t = zeta.norm();
    double two_re = 2.0 * real_inner(z, zeta);  // z.conj(zeta) + conj(z).zeta
    cplx zb = std::conj(z[j]), wb = std::conj(zeta[j]);
    return -(1.0 / (2.0 * t)) * (wb - 0.5 * zb / (s * s) * two_re) - two_re / (2.0 * s * t) * zb / (2.0 * s);
}

inline cplx h_j2(const ComplexPoint& z, std::size_t j) {
    double s = z.norm();
    if (s == 0) throw DomainError("h_j2: z = 0");
    return std::conj(z[j]) / (2.0 * s);
}

struct ResidueOptions {
    int nodes = 64;
    int max_nodes = 8192;
    double rel_tol = 1e-13;
    double radius = 0;  // 0 picks the default radius
};

struct ResidueResult {
    cplx a;
    int nodes = 0;
    double radius = 0;
};

// a(r, theta) with r^{-N}(g - T^{N-1} g) = Re[a e^{i N theta}], where
// g(w) = [(w - e^{i theta})(w - e^{-i theta})]^{-d/2}. The two pole residues of
// w^{-N}(w - r)^{-1} g(w) are conjugate, so a = -2 e^{-i N theta} Res_{e^{-i theta}}.
inline ResidueResult residue_amplitude(int d, double r, double theta, int N, const ResidueOptions& opt = {}) {
    if (d < 2 || d % 2) throw DomainError("residue_amplitude: d must be even");
    if (N < 0) throw DomainError("residue_amplitude: N < 0");
    double st = std::abs(std::sin(theta));
    if (!(st > 0)) throw GeometryError("residue_amplitude: the two poles coincide (sin theta = 0)");
    const cplx c = std::polar(1.0, -theta);
    const cplx cbar = std::conj(c);
    const double dist_r = std::abs(r - c);
    if (!(dist_r > 0)) throw GeometryError("residue_amplitude: r sits on a pole");
    double rho = opt.radius > 0 ? opt.radius : std::min({st / 4, dist_r / 4, 0.5 / (N + 1)});
    if (rho >= 2 * st || rho >= dist_r || rho >= 1.0)
        throw GeometryError("residue_amplitude: contour circle reaches another singularity");
    const int eta = d / 2;

    auto term = [&](double phi) {
        cplx e = std::polar(1.0, phi);
        cplx w = c + rho * e;
        cplx wc = w / c;
        cplx f = std::exp(-static_cast<double>(N) * std::log(wc));
        f /= (w - r);
        cplx q = w - cbar;
        for (int k = 0; k < eta; ++k) f /= q;
        cplx re = rho * e;
        for (int k = 1; k < eta; ++k) f /= re;
        return f;
    };

    int M = std::max(8, opt.nodes);
    std::vector<cplx> vals;
    for (;;) {
        vals.assign(M, cplx{});
        for (int k = 0; k < M; ++k) vals[k] = term(2 * pi * k / M);
        CompensatedSum<cplx> full, half;
        double mag = 0;
        for (int k = 0; k < M; ++k) {
            full.add(vals[k]);
            if (k % 2 == 0) half.add(vals[k]);
            mag += std::abs(vals[k]);
        }
        cplx sM = full.value() / static_cast<double>(M);
        cplx sH = half.value() / static_cast<double>(M / 2);
        double floor = 64 * std::numeric_limits<double>::epsilon() * mag / M;
        if (std::abs(sM - sH) <= opt.rel_tol * std::abs(sM) + floor) return {-2.0 * sM, M, rho};
        if (M >= opt.max_nodes)
            throw BudgetExceeded("residue_amplitude: node budget exhausted", std::abs(sM));
        M *= 2;
    }
}

inline double g_closed(int d, double r, double theta) {
    return std::pow(1 - 2 * r * std::cos(theta) + r * r, -0.5 * d);
}

struct SubtractionTail {
    double value = 0;
    double loss = 1;  // (|g| + sum |terms|) / |result|
};

// r^{-K}(g - T^{K-1} g) by explicit subtraction in long double, with the cancellation factor.
inline SubtractionTail g_tail_subtraction_monitored(int d, double r, double theta, int K) {
    using T = long double;
    T c = std::cos(static_cast<T>(theta));
    T rr = r;
    T g = std::pow(1 - 2 * rr * c + rr * rr, -T(d) / 2);
    if (K <= 0) return {static_cast<double>(std::pow(rr, T(-K)) * g), 1.0};
    T mag = std::fabs(g);
    CompensatedSum<T> s;
    s.add(g);
    T rm = 1;
    T p0 = 1, p1 = T(d) * c;
    for (int m = 0; m < K; ++m) {
        T pm = m == 0 ? p0 : p1;
        if (m >= 2) {
            T p2 = (2 * (m - 1 + T(d) / 2) * c * p1 - (m - 1 + T(d) - 1) * p0) / m;
            p0 = p1;
            p1 = p2;
            pm = p2;
        }
        s.add(-pm * rm);
        mag += std::fabs(pm * rm);
        rm *= rr;
    }
    T v = s.value();
    double loss = v == 0 ? std::numeric_limits<double>::infinity() : static_cast<double>(mag / std::fabs(v));
    return {static_cast<double>(v / std::pow(rr, T(K))), loss};
}

inline double g_tail_subtraction(int d, double r, double theta, int K) {
    return g_tail_subtraction_monitored(d, r, theta, K).value;
}

// long double keeps ~13 digits after this much cancellation
inline constexpr double kSubtractionMaxLoss = 1e5;

struct TailPair {
    double GN = 0;   // r^{-N}(g - T^{N-1} g)
    double GN1 = 0;  // r^{-(N-1)}(g - T^{N-2} g)
    Provenance path = Provenance::closed_series;
};

inline constexpr double kSeriesRadius = 0.95;

// Both tails of the closed form. G_{N-1} = P_{N-1}^{(d/2)}(cos theta) + r G_N.
inline TailPair g_tails(int d, double r, double theta, int N, bool allow_subtraction) {
    TailPair tp;
    if (N <= 0) {
        double g = g_closed(d, r, theta);
        tp.GN = std::pow(r, -N) * g;
        tp.GN1 = std::pow(r, -(N - 1)) * g;
        tp.path = Provenance::closed_series;
        return tp;
    }
    double st = std::abs(std::sin(theta));
    if (allow_subtraction) {
        auto sub = g_tail_subtraction_monitored(d, r, theta, N);
        if (sub.loss <= kSubtractionMaxLoss) {
            tp.GN = sub.value;
            tp.path = Provenance::closed_subtraction;
            tp.GN1 = gegenbauer_eval<double>(0.5 * d, N - 1, std::clamp(std::cos(theta), -1.0, 1.0)) + r * tp.GN;
            return tp;
        }
    }
    if (r <= kSeriesRadius) {
        tp.GN = g_series_tail(d, r, theta, N).value;
        tp.path = Provenance::closed_series;
    } else if (st >= 1.0 / (2 * N)) {
        auto res = residue_amplitude(d, r, theta, N);
        tp.GN = (res.a * std::polar(1.0, N * theta)).real();
        tp.path = Provenance::closed_residue;
    } else if (allow_subtraction) {
        tp.GN = g_tail_subtraction(d, r, theta, N);
        tp.path = Provenance::closed_subtraction;
    } else {
        throw UncomputableRegion("truncated_kernel_closed: r > 0.95 and |sin theta| < 1/(2N)");
    }
    tp.GN1 = gegenbauer_eval<double>(0.5 * d, N - 1, std::clamp(std::cos(theta), -1.0, 1.0)) + r * tp.GN;
    return tp;
}

namespace detail {
inline KernelValue assemble_closed(const ComplexPoint& z, const ComplexPoint& zeta, const TailPair& tp) {
    KernelValue k;
    k.path = tp.path;
    for (std::size_t j = 0; j < z.n(); ++j)
        k.c.push_back(kClosedFormConstant * (h_j1(z, zeta, j) * tp.GN + h_j2(z, j) * tp.GN1));
    return k;
}
}  // namespace detail

inline KernelValue truncated_kernel_closed(const ComplexPoint& z, const ComplexPoint& zeta, int N) {
    z.same_dim(zeta);
    if (z.is_zero()) throw DomainError("truncated_kernel_closed: z = 0");
    if (zeta.is_zero()) throw DomainError("truncated_kernel_closed: zeta = 0");
    if (N < 0) throw DomainError("truncated_kernel_closed: N < 0");
    PolarData p = polar_data(z, zeta);
    if (p.r == 1 && p.theta == 0) throw SingularityError("truncated_kernel_closed: z = zeta");
    return detail::assemble_closed(z, zeta, g_tails(z.d(), p.r, p.theta, N, false));
}

// Best available path: closed form where it is defined, long-double subtraction otherwise.
inline KernelValue truncated_kernel(const ComplexPoint& z, const ComplexPoint& zeta, int N) {
    z.same_dim(zeta);
    if (N == 0) return truncated_kernel_direct(z, zeta, 0);
    if (z.is_zero()) throw DomainError("truncated_kernel: z = 0");
    if (zeta.is_zero()) throw DomainError("truncated_kernel: zeta = 0");
    PolarData p = polar_data(z, zeta);
    if (distance(z, zeta) == 0) throw SingularityError("truncated_kernel: z = zeta");
    return detail::assemble_closed(z, zeta, g_tails(z.d(), p.r, p.theta, N, true));
}

struct OsculationData {
    double nu = 0;
    double rho = 0;
    int N = 0;
};

// nu - (d-1)/2 + rho = N with rho in [0, 1)
inline OsculationData make_osculation(double nu, int d) {
    double x = nu - 0.5 * (d - 1);
    OsculationData o;
    o.nu = nu;
    o.N = static_cast<int>(std::ceil(x));
    o.rho = o.N - x;
    if (o.rho >= 1.0) {
        o.N -= 1;
        o.rho -= 1.0;
    }
    if (o.N < 1) throw DomainError("make_osculation: nu too small for N >= 1");
    return o;
}

// C-infinity transition: 0 for y <= 0, 1 for y >= 1
inline double smooth_step(double y) {
    if (y <= 0) return 0;
    if (y >= 1) return 1;
    double u = 1.0 / y - 1.0 / (1.0 - y);
    if (u > 700) return 0;
    return 1.0 / (1.0 + std::exp(u));
}

inline double smooth_step_derivative(double y) {
    if (y <= 0 || y >= 1) return 0;
    double S = smooth_step(y);
    return S * (1 - S) * (1.0 / (y * y) + 1.0 / ((1 - y) * (1 - y)));
}

// Splitting function: 1 when |z - zeta| > |zeta|/N, 0 when |z - zeta| < |zeta|/(2N).
struct SmoothCutoff {
    int N = 1;

    explicit SmoothCutoff(int n) : N(n) {
        if (N < 1) throw DomainError("SmoothCutoff: N must be >= 1");
    }
    double profile(double x) const { return smooth_step((x - 0.5 / N) * 2.0 * N); }
    double operator()(const ComplexPoint& z, const ComplexPoint& zeta) const {
        return profile(distance(z, zeta) / zeta.norm());
    }
    // k-th derivative in |z - zeta| is bounded by C_k (N/|zeta|)^k
    static double C1() { return 2.0 * 2.0; }
    static double C2() {
        static const double c2 = [] {
            double m = 0, h = 1e-6;
            for (int i = 1; i < 20000; ++i) {
                double y = i / 20000.0;
                m = std::max(m, std::abs(smooth_step_derivative(y + h) - smooth_step_derivative(y - h)) / (2 * h));
            }
            return 4.0 * m;
        }();
        return c2;
    }
};

inline KernelValue scale(KernelValue k, double a) {
    for (auto& v : k.c) v *= a;
    return k;
}

inline KernelValue l_nu_kernel(const ComplexPoint& z, const ComplexPoint& zeta, const OsculationData& osc) {
    int d = z.d();
    double s = z.norm(), t = zeta.norm();
    double pre = std::pow(s, -0.5 * (d - 1) + osc.rho) * std::pow(t, -0.5 * (d - 1) - osc.rho);
    return scale(truncated_kernel(z, zeta, osc.N), pre);
}

inline std::pair<KernelValue, KernelValue> split_m_n(const ComplexPoint& z, const ComplexPoint& zeta,
                                                     const OsculationData& osc, const SmoothCutoff& cut) {
    KernelValue L = l_nu_kernel(z, zeta, osc);
    double c = cut(z, zeta);
    return {scale(L, 1.0 - c), scale(L, c)};
}

inline double osculation_factor(double sigma, double tau, double nu, const CarlemanWeight& w) {
    return std::exp(-nu * w.second_difference(sigma, tau));
}

inline KernelValue p_nu_kernel(const ComplexPoint& z, const ComplexPoint& zeta, double nu, const CarlemanWeight& w) {
    double sigma = -std::log(z.norm()), tau = -std::log(zeta.norm());
    double f = osculation_factor(sigma, tau, nu, w);
    auto osc = make_osculation(nu * w.dpsi(sigma), z.d());
    return scale(l_nu_kernel(z, zeta, osc), f);
}

}  // namespace sucp
