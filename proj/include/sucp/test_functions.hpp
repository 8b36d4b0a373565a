#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "common.hpp"
#include "geometry.hpp"
#include "kernels.hpp"

namespace sucp {

// Radial profile f(s) with its derivative; the test function is u = h(z) f(|z|)
// with h a holomorphic monomial, so dbar_j u = h f'(|z|) z_j / (2|z|).
struct RadialProfile {
    std::function<double(double)> f;
    std::function<double(double)> df;
    double support_lo = 0, support_hi = 1;
};

struct TestFunction {
    std::string kind;
    std::vector<int> powers;  // exponents of the monomial h
    cplx coefficient{1.0, 0.0};
    RadialProfile profile;
    // where dbar u can be nonzero, as radial shells [lo, hi]
    std::vector<std::pair<double, double>> dbar_shells;
    // radii on which u = h exactly
    double plateau_lo = 0, plateau_hi = 0;

    cplx holo(const ComplexPoint& z) const {
        cplx h = coefficient;
        for (std::size_t j = 0; j < powers.size(); ++j)
            for (int k = 0; k < powers[j]; ++k) h *= z[j];
        return h;
    }
    cplx u(const ComplexPoint& z) const {
        double s = z.norm();
        return holo(z) * profile.f(s);
    }
    std::vector<cplx> dbar(const ComplexPoint& z) const {
        double s = z.norm();
        std::vector<cplx> out(z.n(), cplx{});
        if (s == 0) return out;
        double fp = profile.df(s);
        if (fp == 0) return out;
        cplx h = holo(z);
        for (std::size_t j = 0; j < z.n(); ++j) out[j] = h * fp * z[j] / (2.0 * s);
        return out;
    }
    double dbar_norm(const ComplexPoint& z) const {
        double a = 0;
        for (auto v : dbar(z)) a += std::norm(v);
        return std::sqrt(a);
    }

    // max deviation of the closed-form dbar from central differences, relative to the local scale
    double self_check(int points = 100, std::uint64_t seed = 7, double h = 1e-5) const {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> g;
        std::uniform_real_distribution<double> U(profile.support_lo, profile.support_hi);
        double worst = 0;
        for (int p = 0; p < points; ++p) {
            ComplexPoint z(powers.size());
            for (std::size_t j = 0; j < z.n(); ++j) z[j] = cplx(g(rng), g(rng));
            z = z * (U(rng) / z.norm());
            auto an = dbar(z);
            double scale = 1.0;
            for (auto v : an) scale = std::max(scale, std::abs(v));
            for (std::size_t j = 0; j < z.n(); ++j) {
                ComplexPoint xp = z, xm = z, yp = z, ym = z;
                xp[j] += h;
                xm[j] -= h;
                yp[j] += cplx(0, h);
                ym[j] -= cplx(0, h);
                cplx dx = (u(xp) - u(xm)) / (2 * h), dy = (u(yp) - u(ym)) / (2 * h);
                cplx fd = 0.5 * (dx + cplx(0, 1) * dy);
                worst = std::max(worst, std::abs(fd - an[j]) / scale);
            }
        }
        return worst;
    }
};

inline constexpr double kSelfCheckTol = 1e-6;

inline void require_self_check(const TestFunction& tf) {
    double e = tf.self_check();
    if (!(e < kSelfCheckTol))
        throw DomainError("test function '" + tf.kind + "' failed its dbar self-check (" + std::to_string(e) + ")");
}

// 0 below a0, 1 on [a1, b1], 0 above b0, smooth transitions in between
inline RadialProfile plateau_profile(double a0, double a1, double b1, double b0) {
    if (!(0 < a0 && a0 < a1 && a1 <= b1 && b1 < b0))
        throw DomainError("plateau_profile: need 0 < a0 < a1 <= b1 < b0");
    RadialProfile p;
    double wa = a1 - a0, wb = b0 - b1;
    p.f = [=](double s) {
        return smooth_step((s - a0) / wa) * (1.0 - smooth_step((s - b1) / wb));
    };
    p.df = [=](double s) {
        return smooth_step_derivative((s - a0) / wa) / wa * (1.0 - smooth_step((s - b1) / wb)) -
               smooth_step((s - a0) / wa) * smooth_step_derivative((s - b1) / wb) / wb;
    };
    p.support_lo = a0;
    p.support_hi = b0;
    return p;
}

inline TestFunction radial_bump_polynomial(double a0, double a1, double b1, double b0, std::vector<int> powers,
                                           cplx coefficient = 1.0) {
    if (powers.size() < 2) throw DomainError("radial_bump_polynomial: need n >= 2 exponents");
    for (int k : powers)
        if (k < 0) throw DomainError("radial_bump_polynomial: negative exponent");
    TestFunction t;
    t.kind = "radial-bump-polynomial";
    t.powers = std::move(powers);
    t.coefficient = coefficient;
    t.profile = plateau_profile(a0, a1, b1, b0);
    t.dbar_shells = {{a0, a1}, {b1, b0}};
    t.plateau_lo = a1;
    t.plateau_hi = b1;
    require_self_check(t);
    return t;
}

// exp(4 - 1/(y(1-y))) with y = (s-a)/(b-a): peak value 1 at the midpoint
inline TestFunction annular_bump(double a, double b, int n = 2) {
    if (!(0 < a && a < b)) throw DomainError("annular_bump: need 0 < a < b");
    TestFunction t;
    t.kind = "annular-bump";
    t.powers.assign(n, 0);
    double w = b - a;
    t.profile.f = [=](double s) {
        double y = (s - a) / w;
        if (y <= 0 || y >= 1) return 0.0;
        return std::exp(4.0 - 1.0 / (y * (1 - y)));
    };
    t.profile.df = [=](double s) {
        double y = (s - a) / w;
        if (y <= 0 || y >= 1) return 0.0;
        double q = y * (1 - y);
        return std::exp(4.0 - 1.0 / q) * (1 - 2 * y) / (q * q) / w;
    };
    t.profile.support_lo = a;
    t.profile.support_hi = b;
    t.dbar_shells = {{a, b}};
    require_self_check(t);
    return t;
}

// exp(-|z|^{-eps}) cut off smoothly between b1 and b0
inline TestFunction counterexample_cutoff(double eps, double b1, double b0, int n = 2) {
    if (!(eps > 0)) throw DomainError("counterexample_cutoff: eps must be positive");
    if (!(0 < b1 && b1 < b0)) throw DomainError("counterexample_cutoff: need 0 < b1 < b0");
    TestFunction t;
    t.kind = "counterexample-cutoff";
    t.powers.assign(n, 0);
    double wb = b0 - b1;
    t.profile.f = [=](double s) {
        if (s <= 0) return 0.0;
        return std::exp(-std::pow(s, -eps)) * (1.0 - smooth_step((s - b1) / wb));
    };
    t.profile.df = [=](double s) {
        if (s <= 0) return 0.0;
        double e = std::exp(-std::pow(s, -eps));
        double de = eps * std::pow(s, -eps - 1) * e;
        return de * (1.0 - smooth_step((s - b1) / wb)) - e * smooth_step_derivative((s - b1) / wb) / wb;
    };
    // the FD self-check samples away from the origin, where the profile is smooth
    t.profile.support_lo = 0.05;
    t.profile.support_hi = b0;
    t.dbar_shells = {{0.0, b0}};
    require_self_check(t);
    return t;
}

}  // namespace sucp
