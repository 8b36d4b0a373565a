#pragma once

#include <cmath>
#include <vector>

#include "common.hpp"
#include "geometry.hpp"

namespace sucp {

inline constexpr int kMaxDegree = 2000;

inline void check_lambda(double lambda) {
    if (!(lambda > 0)) throw DomainError("gegenbauer: lambda must be positive");
}

// P_0..P_M of the family C^{(lambda)} at x, forward recurrence.
template <class T = double>
std::vector<T> gegenbauer_table(double lambda, int M, T x) {
    check_lambda(lambda);
    if (M < 0) throw DomainError("gegenbauer_table: negative degree");
    std::vector<T> P(M + 1);
    P[0] = 1;
    if (M >= 1) P[1] = 2 * T(lambda) * x;
    for (int m = 1; m < M; ++m)
        P[m + 1] = (2 * (m + T(lambda)) * x * P[m] - (m + 2 * T(lambda) - 1) * P[m - 1]) / (m + 1);
    return P;
}

template <class T = double>
T gegenbauer_eval(double lambda, int m, T x) {
    check_lambda(lambda);
    if (m < 0) throw DomainError("gegenbauer_eval: negative degree");
    if (!(std::abs(x) <= 1)) throw DomainError("gegenbauer_eval: |x| > 1");
    T p0 = 1;
    if (m == 0) return p0;
    T p1 = 2 * T(lambda) * x;
    for (int k = 1; k < m; ++k) {
        T p2 = (2 * (k + T(lambda)) * x * p1 - (k + 2 * T(lambda) - 1) * p0) / (k + 1);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

// d/dx C_m^{(lambda)} = 2 lambda C_{m-1}^{(lambda+1)}
template <class T = double>
T gegenbauer_derivative(double lambda, int m, T x) {
    if (m == 0) return 0;
    return 2 * T(lambda) * gegenbauer_eval<T>(lambda + 1, m - 1, x);
}

// alpha_k = binom(k + lambda - 1, k)
inline double binomial_alpha(double lambda, int k) {
    check_lambda(lambda);
    if (k < 0) throw DomainError("binomial_alpha: negative index");
    if (k > 170)
        return std::exp(std::lgamma(k + lambda) - std::lgamma(k + 1.0) - std::lgamma(lambda));
    double a = 1;
    for (int i = 1; i <= k; ++i) a *= (i + lambda - 1) / i;
    return a;
}

inline std::vector<double> binomial_alpha_table(double lambda, int K) {
    std::vector<double> a(K + 1);
    a[0] = 1;
    for (int k = 1; k <= K; ++k) a[k] = k > 170 ? binomial_alpha(lambda, k) : a[k - 1] * (k + lambda - 1) / k;
    return a;
}

// P_k(1) = binom(k + 2 lambda - 1, k)
inline double gegenbauer_at_one(double lambda, int k) {
    check_lambda(lambda);
    if (k < 0) throw DomainError("gegenbauer_at_one: negative degree");
    if (k > 170)
        return std::exp(std::lgamma(k + 2 * lambda) - std::lgamma(k + 1.0) - std::lgamma(2 * lambda));
    double a = 1;
    for (int i = 1; i <= k; ++i) a *= (i + 2 * lambda - 1) / i;
    return a;
}

// Cauchy product of (1 - r e^{i theta})^{-lambda} and its conjugate:
// P_k(cos theta) = sum_i alpha_i alpha_{k-i} cos((k - 2i) theta)
inline double gegenbauer_trig(double lambda, int k, double theta) {
    auto a = binomial_alpha_table(lambda, k);
    CompensatedSum<double> s;
    for (int i = 0; i <= k; ++i) s.add(a[i] * a[k - i] * std::cos((k - 2 * i) * theta));
    return s.value();
}

inline double generating_closed_form(double lambda, double r, double theta) {
    return std::pow(1 - 2 * r * std::cos(theta) + r * r, -lambda);
}

inline double generating_partial_sum(double lambda, double r, double theta, int M) {
    if (M < 0) throw DomainError("generating_partial_sum: negative truncation");
    if (M > kMaxDegree) throw BudgetExceeded("generating_partial_sum: degree cap exceeded", 0.0);
    auto P = gegenbauer_table<long double>(lambda, M, std::cos(static_cast<long double>(theta)));
    long double s = 0, rm = 1;
    for (int m = 0; m <= M; ++m) {
        s += P[m] * rm;
        rm *= r;
    }
    return static_cast<double>(s);
}

// sum_{m > M} P_m(1) r^m, summed until the geometric majorant of the rest is negligible
inline double generating_tail_majorant(double lambda, double r, int M) {
    if (!(r >= 0 && r < 1)) throw ConvergenceDomainError("generating_tail_majorant: need 0 <= r < 1");
    if (r == 0) return 0;
    long double s = 0;
    long double term = std::exp(std::log(gegenbauer_at_one(lambda, M + 1)) + (M + 1) * std::log(static_cast<long double>(r)));
    for (int m = M + 1; m < M + 100000; ++m) {
        s += term;
        long double ratio = r * (m + 2 * lambda) / (m + 1);
        term *= ratio;
        if (ratio < 1 && term / (1 - ratio) < 1e-18L * s) break;
    }
    return static_cast<double>(s);
}

// |zeta|^{-(d-2)} sum_{m <= M} P_m^{((d-2)/2)}(cos theta) r^m
inline double newtonian_expansion(const ComplexPoint& z, const ComplexPoint& zeta, int M) {
    z.same_dim(zeta);
    int d = z.d();
    double t = zeta.norm();
    if (!(t > 0)) throw DomainError("newtonian_expansion: zeta = 0");
    double s = z.norm();
    if (s == 0) return std::pow(t, 2.0 - d);
    double r = s / t;
    if (!(r < 1)) throw ConvergenceDomainError("newtonian_expansion: need |z| < |zeta|");
    double theta = angle_between(z, zeta);
    return std::pow(t, 2.0 - d) * generating_partial_sum(0.5 * (d - 2), r, theta, M);
}

struct TailResult {
    double value = 0;
    int last_degree = 0;
};

// sum_{m=N}^{N+M_extra} P_m^{(d/2)}(cos theta) r^{m-N} = r^{-N}(g - T^{N-1} g)
inline TailResult g_series_tail_fixed(int d, double r, double theta, int N, int M_extra) {
    if (!(r >= 0 && r < 1)) throw ConvergenceDomainError("g_series_tail: need r < 1 (use the residue path)");
    if (N < 0 || M_extra < 0) throw DomainError("g_series_tail: negative degree");
    int top = N + M_extra;
    if (top > kMaxDegree) throw BudgetExceeded("g_series_tail: degree cap exceeded", 0.0);
    auto P = gegenbauer_table<long double>(0.5 * d, top, std::cos(static_cast<long double>(theta)));
    CompensatedSum<long double> s;
    long double rm = 1;
    for (int m = N; m <= top; ++m) {
        s.add(P[m] * rm);
        rm *= r;
    }
    return {static_cast<double>(s.value()), top};
}

// Same tail with M_extra chosen so the dropped remainder is below rel_tol of the value.
inline TailResult g_series_tail(int d, double r, double theta, int N, double rel_tol = 1e-12) {
    if (!(r >= 0 && r < 1)) throw ConvergenceDomainError("g_series_tail: need r < 1 (use the residue path)");
    if (N < 0) throw DomainError("g_series_tail: negative degree");
    const long double lam = 0.5L * d;
    const long double x = std::cos(static_cast<long double>(theta));
    long double p0 = 1, p1 = 2 * lam * x;
    // P_m(1) tracked alongside for the remainder majorant
    long double one = 1;
    CompensatedSum<long double> s;
    long double rm = 1, maxterm = 0;
    for (int m = 0;; ++m) {
        long double pm;
        if (m == 0)
            pm = p0;
        else if (m == 1)
            pm = p1;
        else {
            long double p2 = (2 * (m - 1 + lam) * x * p1 - (m - 1 + 2 * lam - 1) * p0) / m;
            p0 = p1;
            p1 = p2;
            pm = p2;
        }
        if (m > 0) one *= (m + 2 * lam - 1) / m;
        if (m >= N) {
            long double term = pm * rm;
            s.add(term);
            maxterm = std::max(maxterm, std::fabs(term));
            rm *= r;
            // remainder <= sum_{k>m} P_k(1) r^{k-N}, bounded by a geometric series
            long double next = one * (m + 1 + 2 * lam - 1) / (m + 1) * rm;
            long double ratio = r * (m + 2 + 2 * lam - 1) / (m + 2);
            if (ratio < 1) {
                long double rem = next / (1 - ratio);
                long double scale = std::max(std::fabs(s.value()), 1e-4L * maxterm);
                if (rem <= rel_tol * scale || rem == 0) return {static_cast<double>(s.value()), m};
            }
        }
        if (m >= kMaxDegree)
            throw BudgetExceeded("g_series_tail: degree cap exceeded", static_cast<double>(s.value()));
    }
}

}  // namespace sucp
