#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "common.hpp"

namespace sucp {

struct Rule1D {
    std::vector<double> x;
    std::vector<double> w;
};

// Gauss-Legendre on [-1, 1] by Newton iteration on P_m.
inline Rule1D gauss_legendre(int m) {
    if (m < 1) throw DomainError("gauss_legendre: need at least one node");
    Rule1D r;
    r.x.assign(m, 0.0);
    r.w.assign(m, 0.0);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        long double x = std::cos(pi * (i + 0.75) / (m + 0.5));
        long double dp = 0;
        for (int it = 0; it < 100; ++it) {
            long double p0 = 1, p1 = x;
            for (int k = 2; k <= m; ++k) {
                long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1);
            long double dx = p1 / dp;
            x -= dx;
            if (std::fabs(static_cast<double>(dx)) < 1e-19) break;
        }
        {
            long double p0 = 1, p1 = x;
            for (int k = 2; k <= m; ++k) {
                long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1);
        }
        double wi = static_cast<double>(2.0L / ((1 - x * x) * dp * dp));
        r.x[i] = -static_cast<double>(x);
        r.x[m - 1 - i] = static_cast<double>(x);
        r.w[i] = wi;
        r.w[m - 1 - i] = wi;
    }
    if (m % 2 == 1) r.x[m / 2] = 0.0;
    return r;
}

// Composite Gauss-Legendre over the given panel edges.
inline Rule1D composite_gauss(const std::vector<double>& edges, int per_panel) {
    Rule1D base = gauss_legendre(per_panel);
    Rule1D out;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        double a = edges[p], b = edges[p + 1];
        if (!(b > a)) continue;
        double h = 0.5 * (b - a), c = 0.5 * (a + b);
        for (int i = 0; i < per_panel; ++i) {
            out.x.push_back(c + h * base.x[i]);
            out.w.push_back(h * base.w[i]);
        }
    }
    return out;
}

inline std::vector<double> uniform_edges(double a, double b, int panels) {
    std::vector<double> e(panels + 1);
    for (int i = 0; i <= panels; ++i) e[i] = a + (b - a) * i / panels;
    e[panels] = b;
    return e;
}

}  // namespace sucp
