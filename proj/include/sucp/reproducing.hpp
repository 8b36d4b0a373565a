#pragma once

#include <cmath>
#include <vector>

#include "common.hpp"
#include "geometry.hpp"
#include "kernels.hpp"
#include "quadrature.hpp"
#include "test_functions.hpp"
#include "weight.hpp"

namespace sucp {

// Quadrature over the shells carrying dbar u: composite Gauss-Legendre in |zeta|
// times the Hopf product rule on S^3.
struct ReproGrid {
    int panels_per_shell = 4;
    int per_panel = 8;
    int sphere_resolution = 24;
    long max_nodes = 20'000'000;

    ReproGrid refined() const {
        ReproGrid g = *this;
        g.panels_per_shell *= 2;
        g.sphere_resolution *= 2;
        return g;
    }
};

// |zeta|^{-(N+d-1)} reproduces |z|^{-N} u; |zeta|^{-N+d-1} is the sign-flipped variant kept for comparison.
enum class ExponentConvention { reproducing, flipped };

inline double weight_exponent(ExponentConvention e, int N, int d) {
    return e == ExponentConvention::reproducing ? -(N + d - 1.0) : (-N + d - 1.0);
}

// -2/|S^{2n-1}|: the expected calibrated constant
inline double expected_constant(int d) { return -2.0 / sphere_area(d); }

struct ReproResult {
    double N = 0;
    cplx lhs, rhs;
    double rel_error = 0;
    long nodes = 0;
};

namespace detail {

// sum_j int K_j(zeta) dbar_j u(zeta) dV, K supplied per node
template <class KernelFn>
cplx shell_integral(const TestFunction& u, const ReproGrid& grid, int workers, KernelFn&& kernel) {
    const int d = 4;
    SphereGrid sg = sphere_grid(d, grid.sphere_resolution);
    std::vector<double> rn, rw;
    for (auto [lo, hi] : u.dbar_shells) {
        if (lo <= 0) throw DomainError("reproducing_check: dbar u must be supported away from 0");
        RadialGrid rg = radial_grid_panels(lo, hi, grid.panels_per_shell, grid.per_panel, d);
        rn.insert(rn.end(), rg.nodes.begin(), rg.nodes.end());
        rw.insert(rw.end(), rg.weights.begin(), rg.weights.end());
    }
    long total = static_cast<long>(rn.size()) * static_cast<long>(sg.size());
    if (total > grid.max_nodes)
        throw BudgetExceeded("reproducing_check: quadrature budget exceeded", 0.0);
    auto partial = parallel_map<cplx>(rn.size(), workers, [&](std::size_t i) {
        CompensatedSum<cplx> acc;
        double t = rn[i];
        if (u.profile.df(t) == 0) return cplx{};
        for (std::size_t k = 0; k < sg.size(); ++k) {
            ComplexPoint zeta = sg.nodes[k] * t;
            auto du = u.dbar(zeta);
            auto K = kernel(zeta);
            cplx v = 0;
            for (std::size_t j = 0; j < du.size(); ++j) v += K[j] * du[j];
            acc.add(v * sg.weights[k]);
        }
        return acc.value() * rw[i];
    });
    CompensatedSum<cplx> s;
    for (auto v : partial) s.add(v);
    return s.value();
}

}  // namespace detail

// Uncalibrated right-hand side: sum_j int I_j^N(z, zeta) |zeta|^{e} dbar_j u dV.
inline cplx reproducing_integral(const TestFunction& u, const ComplexPoint& z, int N, const ReproGrid& grid,
                                 ExponentConvention conv = ExponentConvention::reproducing, int workers = 1) {
    const int d = z.d();
    double e = weight_exponent(conv, N, d);
    return detail::shell_integral(u, grid, workers, [&](const ComplexPoint& zeta) {
        auto K = truncated_kernel(z, zeta, N);
        double w = std::pow(zeta.norm(), e);
        for (auto& v : K.c) v *= w;
        return K.c;
    });
}

inline double calibrate_constant(const TestFunction& u, const ComplexPoint& z, const ReproGrid& grid,
                                 int workers = 1) {
    cplx raw = reproducing_integral(u, z, 0, grid, ExponentConvention::reproducing, workers);
    cplx lhs = u.u(z);
    if (std::abs(raw) == 0) throw DomainError("calibrate_constant: vanishing integral");
    return (lhs / raw).real();
}

inline ReproResult reproducing_check(const TestFunction& u, const ComplexPoint& z, int N, const ReproGrid& grid,
                                     double c, ExponentConvention conv = ExponentConvention::reproducing,
                                     int workers = 1) {
    ReproResult r;
    r.N = N;
    r.lhs = std::pow(z.norm(), -N) * u.u(z);
    r.rhs = c * reproducing_integral(u, z, N, grid, conv, workers);
    r.rel_error = std::abs(r.rhs - r.lhs) / std::max(std::abs(r.lhs), 1e-300);
    return r;
}

// e^{nu psi(sigma)} u(z) against c int P_nu(z, zeta) e^{nu psi(tau)} dbar u dV
inline ReproResult osculation_check(const TestFunction& u, const ComplexPoint& z, double nu, const CarlemanWeight& w,
                                    const ReproGrid& grid, double c, int workers = 1) {
    double sigma = -std::log(z.norm());
    ReproResult r;
    r.N = nu;
    r.lhs = std::exp(nu * w.psi(sigma)) * u.u(z);
    r.rhs = c * detail::shell_integral(u, grid, workers, [&](const ComplexPoint& zeta) {
        auto K = p_nu_kernel(z, zeta, nu, w);
        double f = std::exp(nu * w.psi(-std::log(zeta.norm())));
        for (auto& v : K.c) v *= f;
        return K.c;
    });
    r.rel_error = std::abs(r.rhs - r.lhs) / std::max(std::abs(r.lhs), 1e-300);
    return r;
}

}  // namespace sucp
