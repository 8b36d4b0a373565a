#pragma once

#include <cmath>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

#include "common.hpp"
#include "quadrature.hpp"
#include "weight.hpp"

namespace sucp {

struct ComplexPoint {
    std::vector<cplx> c;

    ComplexPoint() = default;
    explicit ComplexPoint(std::size_t n) : c(n, cplx{}) { check(); }
    ComplexPoint(std::initializer_list<cplx> v) : c(v) { check(); }
    explicit ComplexPoint(std::vector<cplx> v) : c(std::move(v)) { check(); }

    std::size_t n() const { return c.size(); }
    int d() const { return 2 * static_cast<int>(c.size()); }
    cplx& operator[](std::size_t j) { return c[j]; }
    const cplx& operator[](std::size_t j) const { return c[j]; }

    double norm2() const {
        double s = 0;
        for (auto v : c) s += std::norm(v);
        return s;
    }
    double norm() const {
        // scaled to avoid underflow for tiny points
        double m = 0;
        for (auto v : c) m = std::max({m, std::abs(v.real()), std::abs(v.imag())});
        if (m == 0) return 0;
        double s = 0;
        for (auto v : c) s += std::norm(v / m);
        return m * std::sqrt(s);
    }
    bool is_zero() const {
        for (auto v : c)
            if (v != cplx{}) return false;
        return true;
    }

    ComplexPoint operator*(double a) const {
        ComplexPoint r = *this;
        for (auto& v : r.c) v *= a;
        return r;
    }
    ComplexPoint operator+(const ComplexPoint& o) const {
        same_dim(o);
        ComplexPoint r = *this;
        for (std::size_t j = 0; j < n(); ++j) r.c[j] += o.c[j];
        return r;
    }
    ComplexPoint operator-(const ComplexPoint& o) const {
        same_dim(o);
        ComplexPoint r = *this;
        for (std::size_t j = 0; j < n(); ++j) r.c[j] -= o.c[j];
        return r;
    }
    void same_dim(const ComplexPoint& o) const {
        if (o.n() != n()) throw DomainError("ComplexPoint: mixing dimensions");
    }

private:
    void check() const {
        if (c.size() < 2) throw DomainError("ComplexPoint: need n >= 2");
    }
};

inline std::ostream& operator<<(std::ostream& os, const ComplexPoint& z) {
    os << '(';
    for (std::size_t j = 0; j < z.n(); ++j) os << (j ? ", " : "") << z[j];
    return os << ')';
}

// Re <z, zeta> = Re sum z_j conj(zeta_j): the Euclidean inner product in R^{2n}
inline double real_inner(const ComplexPoint& z, const ComplexPoint& w) {
    z.same_dim(w);
    double s = 0;
    for (std::size_t j = 0; j < z.n(); ++j) s += (z[j] * std::conj(w[j])).real();
    return s;
}

inline double distance(const ComplexPoint& a, const ComplexPoint& b) { return (a - b).norm(); }

inline double angle_between(const ComplexPoint& z, const ComplexPoint& zeta) {
    if (z.is_zero()) throw DomainError("angle_between: z is the zero point");
    if (zeta.is_zero()) throw DomainError("angle_between: zeta is the zero point");
    z.same_dim(zeta);
    ComplexPoint u = z * (1.0 / z.norm()), v = zeta * (1.0 / zeta.norm());
    double dm = (u - v).norm(), dp = (u + v).norm();
    return 2.0 * std::atan2(dm, dp);
}

struct PolarData {
    double s = 0, t = 0, r = 0;
    double theta = 0;
    double cos_theta = 1, sin_theta = 0;
    double sigma = 0, tau = 0;
};

inline PolarData polar_data(const ComplexPoint& z, const ComplexPoint& zeta) {
    if (z.is_zero()) throw DomainError("polar_data: z is the zero point");
    if (zeta.is_zero()) throw DomainError("polar_data: zeta is the zero point");
    PolarData p;
    p.s = z.norm();
    p.t = zeta.norm();
    p.r = p.s / p.t;
    p.theta = angle_between(z, zeta);
    p.cos_theta = std::cos(p.theta);
    p.sin_theta = std::sin(p.theta);
    p.sigma = -std::log(p.s);
    p.tau = -std::log(p.t);
    return p;
}

struct LogInterval {
    double lo = 0, hi = 0;

    LogInterval() = default;
    LogInterval(double a, double b) : lo(a), hi(b) {
        if (!(lo <= hi)) throw DomainError("LogInterval: lo > hi");
    }
    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
    bool overlaps(const LogInterval& o) const { return !(hi < o.lo || o.hi < lo); }
    // |gamma|' = min{|gamma|, nu^{-1/2}}
    double reduced_length(double nu) const { return std::min(length(), 1.0 / std::sqrt(nu)); }
};

inline bool annulus_contains(const LogInterval& g, const CarlemanWeight& w, const ComplexPoint& z) {
    double s = z.norm();
    if (!(s > 0)) throw DomainError("annulus_contains: |z| must be positive");
    return g.contains(w.psi(-std::log(s)));
}

// The radial band {s : psi(log 1/s) in gamma}, clipped to psi's increasing branch.
inline std::pair<double, double> annulus_radii(const LogInterval& g, const CarlemanWeight& w) {
    double smax = std::exp(-w.sigma_min());
    double psi_floor = w.psi(w.sigma_min());
    double s_hi = g.lo <= psi_floor ? smax : std::exp(-w.inverse(g.lo));
    double s_lo = g.hi <= psi_floor ? smax : std::exp(-w.inverse(g.hi));
    return {s_lo, s_hi};
}

struct SphereGrid {
    int d = 4;
    int resolution = 0;
    std::string scheme;
    std::vector<ComplexPoint> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }

    void write_csv(std::ostream& os) const {
        os << "index,x1,x2,x3,x4,weight\n";
        os.precision(17);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            os << i;
            for (auto v : nodes[i].c) os << ',' << v.real() << ',' << v.imag();
            os << ',' << weights[i] << '\n';
        }
    }
};

// S^3 in Hopf coordinates z = (cos(eta) e^{i xi1}, sin(eta) e^{i xi2}).
// With t = cos(2 eta) the surface measure is (1/4) dt dxi1 dxi2, so Gauss-Legendre in t
// and the trapezoid rule in both angles integrate polynomials of degree <= resolution exactly.
inline SphereGrid sphere_grid(int d, int resolution) {
    if (d != 4) throw UnsupportedDimension("sphere_grid: only d = 4 is supported");
    if (resolution < 0) throw DomainError("sphere_grid: resolution must be nonnegative");
    int m = resolution / 2 + 2;
    int M = resolution + 2;
    Rule1D gl = gauss_legendre(m);
    SphereGrid g;
    g.d = d;
    g.resolution = resolution;
    g.scheme = "hopf-product(gl=" + std::to_string(m) + ",trap=" + std::to_string(M) + ")";
    double h = 2.0 * pi / M;
    g.nodes.reserve(static_cast<std::size_t>(m) * M * M);
    for (int a = 0; a < m; ++a) {
        double t = gl.x[a];
        double c1 = std::sqrt(0.5 * (1.0 + t)), c2 = std::sqrt(0.5 * (1.0 - t));
        for (int i = 0; i < M; ++i) {
            cplx e1 = std::polar(1.0, h * i);
            for (int k = 0; k < M; ++k) {
                cplx e2 = std::polar(1.0, h * k);
                g.nodes.push_back(ComplexPoint{c1 * e1, c2 * e2});
                g.weights.push_back(0.25 * gl.w[a] * h * h);
            }
        }
    }
    return g;
}

enum class RadialSpacing { uniform_in_sigma, gauss_legendre_in_s };

struct RadialGrid {
    std::vector<double> nodes;
    std::vector<double> weights;  // include the Jacobian s^{d-1}
    std::string spacing;
};

inline RadialGrid radial_grid(double a, double b, int count, RadialSpacing sp, int d = 4) {
    if (count < 2) throw DomainError("radial_grid: count must be >= 2");
    if (!(b > a) || a < 0) throw DomainError("radial_grid: empty interval");
    RadialGrid g;
    if (sp == RadialSpacing::gauss_legendre_in_s) {
        int m = std::max(count, (count + d - 1 + 1) / 2);
        Rule1D r = gauss_legendre(m);
        g.spacing = "gauss-legendre-in-s";
        for (int i = 0; i < m; ++i) {
            double s = 0.5 * (a + b) + 0.5 * (b - a) * r.x[i];
            g.nodes.push_back(s);
            g.weights.push_back(0.5 * (b - a) * r.w[i] * std::pow(s, d - 1));
        }
    } else {
        if (!(a > 0)) throw DomainError("radial_grid: uniform-in-sigma needs a > 0");
        g.spacing = "uniform-in-sigma";
        double s0 = std::log(1.0 / b), s1 = std::log(1.0 / a);
        double h = (s1 - s0) / count;
        // midpoints in sigma, listed by increasing s
        for (int i = count - 1; i >= 0; --i) {
            double sig = s0 + (i + 0.5) * h;
            double s = std::exp(-sig);
            g.nodes.push_back(s);
            g.weights.push_back(h * std::pow(s, d));
        }
    }
    return g;
}

// composite Gauss-Legendre in s over [a, b], Jacobian included
inline RadialGrid radial_grid_panels(double a, double b, int panels, int per_panel, int d = 4) {
    if (!(b > a) || a < 0) throw DomainError("radial_grid_panels: empty interval");
    Rule1D r = composite_gauss(uniform_edges(a, b, panels), per_panel);
    RadialGrid g;
    g.spacing = "composite-gauss-legendre-in-s";
    for (std::size_t i = 0; i < r.x.size(); ++i) {
        g.nodes.push_back(r.x[i]);
        g.weights.push_back(r.w[i] * std::pow(r.x[i], d - 1));
    }
    return g;
}

}  // namespace sucp
