#pragma once

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "common.hpp"
#include "geometry.hpp"
#include "kernels.hpp"
#include "quadrature.hpp"
#include "test_functions.hpp"
#include "verification.hpp"
#include "weight.hpp"

namespace sucp {

// Kernel samples K(xi_i, eta_k)_j. Rows are target nodes; columns are source
// nodes times components, column index k * ncomp + j. The operator is
// (T f)(xi) = sum_j int K_j(xi, eta) f_j(eta) d eta.
struct DiscretizedOperator {
    Eigen::MatrixXcd K;
    std::vector<double> wt;  // target weights, one per row
    std::vector<double> ws;  // source weights, one per source node
    int ncomp = 1;
    double s = 1, t = 1, lambda = 0;
    int N = 0;

    Eigen::Index rows() const { return K.rows(); }
    Eigen::Index cols() const { return K.cols(); }
    double source_weight(Eigen::Index col) const { return ws[static_cast<std::size_t>(col / ncomp)]; }

    void validate() const {
        if (static_cast<std::size_t>(K.rows()) != wt.size())
            throw ShapeError("DiscretizedOperator: target weights do not match rows");
        if (static_cast<std::size_t>(K.cols()) != ws.size() * static_cast<std::size_t>(ncomp))
            throw ShapeError("DiscretizedOperator: source weights do not match columns");
        if (!K.allFinite()) throw DomainError("DiscretizedOperator: non-finite entries");
    }

    // W_t^{1/2} K W_s^{1/2}: its l2 norm is the L2 -> L2 operator norm
    Eigen::MatrixXcd weighted() const {
        validate();
        Eigen::MatrixXcd M = K;
        for (Eigen::Index i = 0; i < M.rows(); ++i) M.row(i) *= std::sqrt(wt[i]);
        for (Eigen::Index c = 0; c < M.cols(); ++c) M.col(c) *= std::sqrt(source_weight(c));
        return M;
    }
};

inline DiscretizedOperator make_operator(Eigen::MatrixXcd K, std::vector<double> wt, std::vector<double> ws,
                                         int ncomp = 1) {
    DiscretizedOperator op;
    op.K = std::move(K);
    op.wt = std::move(wt);
    op.ws = std::move(ws);
    op.ncomp = ncomp;
    op.validate();
    return op;
}

struct NormEstimate {
    double lower = 0;
    double upper = std::numeric_limits<double>::infinity();
    std::string lower_method, upper_method;
    bool consistent() const { return lower <= upper * (1 + 1e-9); }
};

// Largest singular value of the weighted matrix. The top singular value of the sphere
// operators is nearly degenerate (harmonic multiplicities), where plain power iteration on
// M^* M stalls, so the iteration is Krylov-accelerated: Lanczos with full
// reorthogonalization, restarted from the Ritz vector. Converged when the Ritz residual
// ||M^* M v - s^2 v|| is below tol * s^2; max_iter caps the number of products with M^* M.
inline double spectral_norm_matrix(const Eigen::MatrixXcd& M, double tol = 1e-10, int max_iter = 10000,
                                   int krylov = 60) {
    if (M.size() == 0) return 0;
    const Eigen::Index n = M.cols();
    const int k_max = static_cast<int>(std::min<Eigen::Index>(krylov, n));
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = cplx(1.0 + 0.01 * (i % 7), 0.003 * (i % 5));
    v.normalize();
    double best = 0;
    int used = 0;
    while (used < max_iter) {
        Eigen::MatrixXcd Q(n, k_max);
        std::vector<double> alpha, beta;
        Q.col(0) = v;
        int k = 0;
        for (; k < k_max && used < max_iter; ++k) {
            Eigen::VectorXcd w = M.adjoint() * (M * Q.col(k));
            ++used;
            alpha.push_back(Q.col(k).dot(w).real());
            for (int rep = 0; rep < 2; ++rep) w -= Q.leftCols(k + 1) * (Q.leftCols(k + 1).adjoint() * w);
            double b = w.norm();
            if (k + 1 == k_max || b <= 1e-14 * std::abs(alpha[0]) + 1e-300) {
                beta.push_back(b);
                ++k;
                break;
            }
            beta.push_back(b);
            Q.col(k + 1) = w / b;
        }
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
        for (int i = 0; i < k; ++i) {
            T(i, i) = alpha[i];
            if (i + 1 < k) T(i, i + 1) = T(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        double theta = es.eigenvalues()[k - 1];
        Eigen::VectorXd y = es.eigenvectors().col(k - 1);
        best = std::max(best, std::sqrt(std::max(theta, 0.0)));
        v = (Q.leftCols(k) * y.cast<cplx>()).normalized();
        if (theta <= 0) return 0;
        double res = (M.adjoint() * (M * v) - theta * v).norm();
        ++used;
        if (res <= tol * theta) return std::sqrt(theta);
        if (k == n) return std::sqrt(theta);  // Krylov space exhausted: T is exact
    }
    throw IterationLimit("spectral_norm: iteration did not converge", best);
}

inline double spectral_norm(const DiscretizedOperator& op, double tol = 1e-10, int max_iter = 10000) {
    return spectral_norm_matrix(op.weighted(), tol, max_iter);
}

// Lp -> Lp' bound (AB)^{1/2} with the weight functions u (targets) and v (sources).
// With 1/p - 1/p' = 1/q, each kernel entry is scaled by (u v)^{-1/p'} and measured in L^{q'}.
inline double schur_bound(const DiscretizedOperator& op, const std::vector<double>& u, const std::vector<double>& v,
                          double p) {
    op.validate();
    if (!(p >= 1 && p <= 2)) throw DomainError("schur_bound: need 1 <= p <= 2");
    if (u.size() != static_cast<std::size_t>(op.rows()) || v.size() != op.ws.size())
        throw ShapeError("schur_bound: weight functions do not match the grids");
    for (double x : u)
        if (!(x > 0)) throw DomainError("schur_bound: u must be positive");
    for (double x : v)
        if (!(x > 0)) throw DomainError("schur_bound: v must be positive");
    double pp = p == 1 ? std::numeric_limits<double>::infinity() : p / (p - 1);
    double e = std::isinf(pp) ? 0.0 : -1.0 / pp;
    double inv_q = 1.0 / p - (std::isinf(pp) ? 0.0 : 1.0 / pp);
    bool qprime_inf = inv_q >= 1.0;  // q = 1
    double qp = qprime_inf ? 0.0 : 1.0 / (1.0 - inv_q);
    const Eigen::Index R = op.rows(), C = op.cols();
    std::vector<double> rowacc(R, 0.0), colacc(C, 0.0);
    for (Eigen::Index i = 0; i < R; ++i) {
        for (Eigen::Index c = 0; c < C; ++c) {
            std::size_t k = static_cast<std::size_t>(c / op.ncomp);
            double val = std::pow(u[i] * v[k], e) * std::abs(op.K(i, c));
            if (qprime_inf) {
                rowacc[i] = std::max(rowacc[i], val);
                colacc[c] = std::max(colacc[c], val);
            } else {
                double pv = std::pow(val, qp);
                rowacc[i] += pv * v[k] * op.ws[k];
                colacc[c] += pv * u[i] * op.wt[i];
            }
        }
    }
    double A = 0, B = 0;
    for (double x : rowacc) A = std::max(A, qprime_inf ? x : std::pow(x, 1.0 / qp));
    for (double x : colacc) B = std::max(B, qprime_inf ? x : std::pow(x, 1.0 / qp));
    return std::sqrt(A * B);
}

inline double schur_bound(const DiscretizedOperator& op, double p = 2) {
    return schur_bound(op, std::vector<double>(op.rows(), 1.0), std::vector<double>(op.ws.size(), 1.0), p);
}

// Lower bound for the Lp -> Lp' norm by Boyd's nonlinear power method: every iterate
// gives ||T x||_{p'} / ||x||_p, so the best one is a certified lower bound.
inline double lp_lower_bound(const DiscretizedOperator& op, double p, std::uint64_t seed = 1, int iters = 300) {
    op.validate();
    if (!(p > 1 && p <= 2)) throw DomainError("lp_lower_bound: need 1 < p <= 2");
    const double pp = p / (p - 1);
    const Eigen::Index R = op.rows(), C = op.cols();
    auto pnorm_src = [&](const Eigen::VectorXcd& x) {
        double s = 0;
        for (Eigen::Index c = 0; c < C; ++c) s += op.source_weight(c) * std::pow(std::abs(x[c]), p);
        return std::pow(s, 1.0 / p);
    };
    auto ppnorm_tgt = [&](const Eigen::VectorXcd& y) {
        double s = 0;
        for (Eigen::Index i = 0; i < R; ++i) s += op.wt[i] * std::pow(std::abs(y[i]), pp);
        return std::pow(s, 1.0 / pp);
    };
    auto dual = [](cplx v, double r) {
        double a = std::abs(v);
        return a == 0 ? cplx{} : std::pow(a, r - 1) * (v / a);
    };
    Eigen::VectorXcd ws(C), wt(R);
    for (Eigen::Index c = 0; c < C; ++c) ws[c] = op.source_weight(c);
    for (Eigen::Index i = 0; i < R; ++i) wt[i] = op.wt[i];
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Eigen::VectorXcd x(C);
    for (Eigen::Index c = 0; c < C; ++c) x[c] = cplx(g(rng), g(rng));
    double best = 0;
    for (int it = 0; it < iters; ++it) {
        double xn = pnorm_src(x);
        if (xn == 0) break;
        x /= xn;
        Eigen::VectorXcd y = op.K * x.cwiseProduct(ws);
        double val = ppnorm_tgt(y);
        double prev = best;
        best = std::max(best, val);
        Eigen::VectorXcd gy(R);
        for (Eigen::Index i = 0; i < R; ++i) gy[i] = dual(y[i], pp) * wt[i];
        Eigen::VectorXcd z = op.K.adjoint() * gy;
        for (Eigen::Index c = 0; c < C; ++c) x[c] = dual(z[c], pp);
        if (it > 10 && best - prev <= 1e-13 * best) break;
    }
    return best;
}

inline NormEstimate estimate_norm(const DiscretizedOperator& op, double p = 2) {
    NormEstimate e;
    e.upper = schur_bound(op, p);
    e.upper_method = "schur";
    if (p == 2) {
        e.lower = spectral_norm(op);
        e.lower_method = "spectral";
    } else {
        e.lower = lp_lower_bound(op, p);
        e.lower_method = "boyd-power";
    }
    return e;
}

// ---------------------------------------------------------------------------
// angular cutoffs in |sin theta|

enum class ChiKind { band, cap };

struct ChiCutoff {
    ChiKind kind = ChiKind::band;
    double lambda = 0.1;

    ChiCutoff(ChiKind k, double lam) : kind(k), lambda(lam) {
        if (!(lam > 0)) throw DomainError("ChiCutoff: lambda must be positive");
    }
    // band: rises on [lambda/100, lambda/50], falls on [50 lambda, 100 lambda]; cap: falls on [50 lambda, 100 lambda]
    double profile(double x) const {
        double hi = 1.0 - smooth_step((x - 50 * lambda) / (50 * lambda));
        if (kind == ChiKind::cap) return hi;
        return smooth_step((x - lambda / 100) / (lambda / 100)) * hi;
    }
    double at_angle(double theta) const { return profile(std::abs(std::sin(theta))); }
    double operator()(const ComplexPoint& xi, const ComplexPoint& eta) const { return at_angle(angle_between(xi, eta)); }
    // |sin theta| breakpoints of the profile
    std::vector<double> breakpoints() const {
        std::vector<double> b{50 * lambda, 100 * lambda};
        if (kind == ChiKind::band) b.insert(b.begin(), {lambda / 100, lambda / 50});
        return b;
    }
};

inline double splitting_cutoff(double r, double theta, int N) {
    double x = std::sqrt(std::max(0.0, 1 - 2 * r * std::cos(theta) + r * r));
    return smooth_step((x - 0.5 / N) * 2.0 * N);
}

template <class KernelFn>
DiscretizedOperator assemble(const SphereGrid& target, const SphereGrid& source, int ncomp, KernelFn&& kernel,
                             int workers = 1) {
    DiscretizedOperator op;
    op.ncomp = ncomp;
    op.K.resize(static_cast<Eigen::Index>(target.size()), static_cast<Eigen::Index>(source.size() * ncomp));
    op.wt = target.weights;
    op.ws = source.weights;
    parallel_for(target.size(), workers, [&](std::size_t i) {
        for (std::size_t k = 0; k < source.size(); ++k) {
            std::vector<cplx> v = kernel(target.nodes[i], source.nodes[k]);
            for (int j = 0; j < ncomp; ++j) op.K(i, k * ncomp + j) = v[j];
        }
    });
    op.validate();
    return op;
}

// entries chi(xi, eta) * cut * I^N(s xi, t eta)
inline DiscretizedOperator assemble_chi_kernel(int N, double s, double t, const ChiCutoff& chi, const SphereGrid& grid,
                                               int workers = 1) {
    if (chi.kind == ChiKind::band && !(chi.lambda > 1.0 / (200.0 * N)))
        throw DomainError("assemble_chi_kernel: band cutoff needs lambda > 1/(200N)");
    const SmoothCutoff cut(N);
    auto op = assemble(grid, grid, 2, [&](const ComplexPoint& xi, const ComplexPoint& eta) {
        std::vector<cplx> out(2, cplx{});
        double c = chi(xi, eta);
        if (c == 0) return out;
        ComplexPoint z = xi * s, zeta = eta * t;
        double w = cut(z, zeta);
        if (w == 0) return out;
        KernelValue K;
        try {
            K = truncated_kernel(z, zeta, N);
        } catch (const Error& e) {
            std::ostringstream os;
            os << e.what() << " at z=" << z << " zeta=" << zeta;
            throw UncomputableRegion(os.str());
        }
        for (int j = 0; j < 2; ++j) out[j] = c * w * K.c[j];
        return out;
    }, workers);
    op.s = s;
    op.t = t;
    op.lambda = chi.lambda;
    op.N = N;
    return op;
}

// ---------------------------------------------------------------------------
// exact L2 norms of zonal vector kernels on S^3
//
// The kernel chi * cut * I^N(s xi, t eta) has components conj(eta_j) A - conj(xi_j) B with
// A = chi cut G_N and B = chi cut G_{N-1}, both functions of theta only. On the bidegree
// (p,q) harmonics the operator T T^* acts as the scalar
//   |a_l - b_{l+1}|^2 (p+1)/(l+1) + |a_l - b_{l-1}|^2 q/(l+1),   l = p + q,
// where a_l, b_l are the Funk-Hecke eigenvalues of A, B. The sup over p sits at an endpoint.

inline double funk_hecke_weight(int l, double theta) {
    return 4 * pi / (l + 1) * std::sin((l + 1) * theta) * std::sin(theta);
}

struct ThetaRule {
    std::vector<double> x, w;
};

// composite Gauss-Legendre on [0, pi]: geometric panels toward every breakpoint in
// `geometric_from` (0 and pi by default) and panel width at most h_max
inline ThetaRule theta_rule(std::vector<double> breaks, double h_max, int per_panel = 16) {
    breaks.push_back(0);
    breaks.push_back(pi);
    for (auto& b : breaks) b = std::clamp(b, 0.0, pi);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end(), [](double a, double b) { return b - a < 1e-15; }),
                 breaks.end());
    std::vector<double> edges;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        double a = breaks[i], b = breaks[i + 1];
        // power-law behaviour in the distance to 0 or pi: grade geometrically toward the near end
        std::vector<double> e{a, b};
        double mid = 0.5 * (a + b);
        if (mid < pi / 2 && a >= 0) {
            double base = std::max(a, 1e-300);
            if (a > 0)
                for (double x = 2 * a; x < b; x *= 2) e.push_back(x);
            else
                for (double x = b / 2; x > b * 1e-12; x /= 2) e.push_back(x);
            (void)base;
        } else {
            double da = pi - b, db = pi - a;  // distances to pi
            if (da > 0)
                for (double x = 2 * da; x < db; x *= 2) e.push_back(pi - x);
            else
                for (double x = db / 2; x > db * 1e-12; x /= 2) e.push_back(pi - x);
        }
        std::sort(e.begin(), e.end());
        for (std::size_t k = 0; k + 1 < e.size(); ++k) {
            double lo = e[k], hi = e[k + 1];
            int m = std::max(1, static_cast<int>(std::ceil((hi - lo) / h_max)));
            for (int q = 0; q < m; ++q) edges.push_back(lo + (hi - lo) * q / m);
        }
    }
    edges.push_back(pi);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    Rule1D r = composite_gauss(edges, per_panel);
    return {r.x, r.w};
}

struct HarmonicNorm {
    double norm = 0;
    int L = 0;           // highest degree examined
    int argmax_l = 0;
    bool holomorphic_end = true;  // q = 0 endpoint attains the sup
    long theta_nodes = 0;
};

struct ZonalPair {
    std::vector<double> A, B;
};

// a_l, b_l for l = 0..L+1 given samples of A, B on the rule
inline void funk_hecke_coefficients(const ThetaRule& rule, const ZonalPair& ab, int L, std::vector<double>& a,
                                    std::vector<double>& b) {
    a.assign(L + 2, 0.0);
    b.assign(L + 2, 0.0);
    std::vector<CompensatedSum<double>> sa(L + 2), sb(L + 2);
    for (std::size_t k = 0; k < rule.x.size(); ++k) {
        double th = rule.x[k];
        double wA = rule.w[k] * ab.A[k] * std::sin(th), wB = rule.w[k] * ab.B[k] * std::sin(th);
        if (wA == 0 && wB == 0) continue;
        cplx e1 = std::polar(1.0, th), e = e1;  // e^{i (l+1) theta}
        for (int l = 0; l <= L + 1; ++l) {
            if (l % 64 == 0) e = std::polar(1.0, (l + 1) * th);
            double sn = e.imag();
            sa[l].add(wA * sn);
            sb[l].add(wB * sn);
            e *= e1;
        }
    }
    for (int l = 0; l <= L + 1; ++l) {
        a[l] = 4 * pi / (l + 1) * sa[l].value();
        b[l] = 4 * pi / (l + 1) * sb[l].value();
    }
}

// sup over bidegrees given eigenvalue sequences (a, b) up to L+1
inline HarmonicNorm harmonic_sup(const std::vector<double>& a, const std::vector<double>& b, int L) {
    HarmonicNorm h;
    h.L = L;
    for (int l = 0; l <= L; ++l) {
        double up = a[l] - b[l + 1];
        double dn = l >= 1 ? a[l] - b[l - 1] : 0.0;
        double holo = std::abs(up);
        double anti = std::sqrt((up * up + l * dn * dn) / (l + 1));
        double m = std::max(holo, anti);
        if (m > h.norm) {
            h.norm = m;
            h.argmax_l = l;
            h.holomorphic_end = holo >= anti;
        }
    }
    return h;
}

template <class SampleFn>
HarmonicNorm harmonic_norm_adaptive(SampleFn&& sample, const std::vector<double>& breaks, int L0 = 64,
                                    int L_max = 1 << 15, double tail_rel = 1e-3, int per_panel = 16) {
    for (int L = L0;; L *= 2) {
        ThetaRule rule = theta_rule(breaks, std::min(0.25, 10.0 / L), per_panel);
        ZonalPair ab;
        ab.A.resize(rule.x.size());
        ab.B.resize(rule.x.size());
        for (std::size_t k = 0; k < rule.x.size(); ++k) sample(rule.x[k], ab.A[k], ab.B[k]);
        std::vector<double> a, b;
        funk_hecke_coefficients(rule, ab, L, a, b);
        HarmonicNorm h = harmonic_sup(a, b, L);
        h.theta_nodes = static_cast<long>(rule.x.size());
        // the tail [L/2, L] must be negligible before trusting the sup
        double tail = 0;
        for (int l = L / 2; l <= L; ++l) {
            double up = a[l] - b[l + 1], dn = a[l] - b[l - 1];
            tail = std::max({tail, std::abs(up), std::sqrt((up * up + l * dn * dn) / (l + 1))});
        }
        if (tail <= tail_rel * h.norm || h.norm == 0) return h;
        if (L >= L_max) throw BudgetExceeded("harmonic_norm: degree budget exhausted", h.norm);
    }
}

inline std::vector<double> theta_breaks(int N, double r, const ChiCutoff& chi) {
    std::vector<double> br;
    for (double x : chi.breakpoints())
        if (x < 1) {
            br.push_back(std::asin(x));
            br.push_back(pi - std::asin(x));
        }
    for (double delta : {0.5 / N, 1.0 / N}) {
        double c = (1 + r * r - delta * delta) / (2 * r);
        if (c > -1 && c < 1) br.push_back(std::acos(c));
    }
    return br;
}

// exact L2 norm of chi * cut * I^N(s ., t .) on S^3
inline HarmonicNorm harmonic_norm(int N, double s_over_t, const ChiCutoff& chi, int per_panel = 16) {
    const int d = 4;
    const double r = s_over_t;
    auto sample = [&](double th, double& A, double& B) {
        double c = chi.at_angle(th);
        double w = c == 0 ? 0.0 : splitting_cutoff(r, th, N);
        if (w == 0) {
            A = B = 0;
            return;
        }
        auto tp = g_tails(d, r, th, N, true);
        A = c * w * tp.GN;
        B = c * w * tp.GN1;
    };
    return harmonic_norm_adaptive(sample, theta_breaks(N, r, chi), std::max(64, 4 * N), 1 << 15, 1e-3, per_panel);
}

struct NormScalingRow {
    int N = 0;
    double lambda = 0, s_over_t = 0;
    double norm = 0, predicted = 0, ratio = 0;
    int argmax_l = 0;
    std::string kind;
};

struct NormScalingSpec {
    std::vector<int> N{8, 16, 32, 64};
    std::vector<double> s_over_t{0.6, 0.9, 1.0, 1.1, 1.5};
    double lambda_max = 0.25;
    double mu = 1.25;
};

struct NormScalingResult {
    std::vector<NormScalingRow> band, cap;
    double sup_ratio = 0, inf_ratio = 0, variation = 0;
    double variation_lambda_ge_inv_N = 0;  // same, restricted to lambda >= 1/N
    std::vector<std::pair<int, FitResult>> lambda_slope_at_1;  // per N, norm vs lambda at s/t = 1
    // cap table: variation of norm / (lambda^{d-1-mu(d-2)} W) for both lambda regimes and both W's
    std::map<std::string, double> cap_variation;
};

inline std::vector<double> dyadic_lambdas(int N, double lambda_max) {
    std::vector<double> l;
    for (double x = 1.0 / (100.0 * N); x <= lambda_max * (1 + 1e-12); x *= 2) l.push_back(x);
    return l;
}

inline NormScalingResult norm_scaling_experiment(const NormScalingSpec& spec, int workers = 1) {
    const int d = 4;
    NormScalingResult res;
    struct Job {
        int N;
        double lam, st;
        ChiKind kind;
        std::string tag;
    };
    std::vector<Job> jobs;
    for (int N : spec.N)
        for (double lam : dyadic_lambdas(N, spec.lambda_max))
            for (double st : spec.s_over_t) jobs.push_back({N, lam, st, ChiKind::band, "band"});
    std::vector<Job> capjobs;
    for (int N : spec.N)
        for (double st : spec.s_over_t) {
            capjobs.push_back({N, std::pow(double(N), -1.0 / spec.mu), st, ChiKind::cap, "cap-lambda=N^-1/mu"});
            capjobs.push_back({N, std::pow(double(N), -1.0 / (1.0 + spec.mu)), st, ChiKind::cap, "cap-lambda=N^-1/(1+mu)"});
        }
    auto run = [&](const std::vector<Job>& js) {
        return parallel_map<NormScalingRow>(js.size(), workers, [&](std::size_t i) {
            const Job& j = js[i];
            auto h = harmonic_norm(j.N, j.st, ChiCutoff(j.kind, j.lam));
            NormScalingRow row;
            row.N = j.N;
            row.lambda = j.lam;
            row.s_over_t = j.st;
            row.norm = h.norm;
            row.argmax_l = h.argmax_l;
            row.kind = j.tag;
            row.predicted = 1.0 / (std::abs(1 - j.st) + j.lam);
            row.ratio = row.norm / row.predicted;
            return row;
        });
    };
    res.band = run(jobs);
    res.cap = run(capjobs);
    double sup = 0, inf = std::numeric_limits<double>::infinity(), sup2 = 0, inf2 = inf;
    for (auto& r : res.band) {
        sup = std::max(sup, r.ratio);
        inf = std::min(inf, r.ratio);
        if (r.lambda >= 1.0 / r.N) sup2 = std::max(sup2, r.ratio), inf2 = std::min(inf2, r.ratio);
    }
    res.sup_ratio = sup;
    res.inf_ratio = inf;
    res.variation = inf > 0 ? sup / inf : std::numeric_limits<double>::infinity();
    res.variation_lambda_ge_inv_N = inf2 > 0 ? sup2 / inf2 : std::numeric_limits<double>::infinity();
    for (int N : spec.N) {
        std::vector<double> x, y;
        for (auto& r : res.band)
            if (r.N == N && r.s_over_t == 1.0 && r.norm > 0) x.push_back(r.lambda), y.push_back(r.norm);
        if (x.size() >= 3) res.lambda_slope_at_1.push_back({N, fit_exponent(x, y)});
    }
    // cap normalizations: lambda^{d-1-mu(d-2)} (|1-s/t| + lambda^mu)^{-1} and the W_{s,t,lambda} variant
    for (const char* tag : {"cap-lambda=N^-1/mu", "cap-lambda=N^-1/(1+mu)"}) {
        for (int variant = 0; variant < 2; ++variant) {
            double hi = 0, lo = std::numeric_limits<double>::infinity();
            for (auto& r : res.cap) {
                if (r.kind != tag || r.norm == 0) continue;
                double lamfac = std::pow(r.lambda, d - 1 - spec.mu * (d - 2));
                double W = variant == 0 ? 1.0 / (std::abs(1 - r.s_over_t) + std::pow(r.lambda, spec.mu))
                                        : 1.0 / (std::abs(1 - r.s_over_t) + r.lambda);
                double q = r.norm / (lamfac * W);
                hi = std::max(hi, q);
                lo = std::min(lo, q);
            }
            res.cap_variation[std::string(tag) + (variant == 0 ? "/W_lambda^mu" : "/W_lambda")] = hi / lo;
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// product-space assembly: the norm of the radial majorant kernel n(w, y) bounds the full operator

inline NormEstimate product_assemble(const Eigen::MatrixXd& radial_norms, const std::vector<double>& wr_target,
                                     const std::vector<double>& wr_source, double p = 2) {
    DiscretizedOperator op = make_operator(radial_norms.cast<cplx>(), wr_target, wr_source, 1);
    NormEstimate e;
    e.upper = schur_bound(op, p);
    e.upper_method = "schur-on-radial-majorant";
    e.lower = 0;
    e.lower_method = "none";
    return e;
}

// ---------------------------------------------------------------------------
// min-estimate: int_gamma e^{-rho q' x^2} (|x| + lambda)^{-q'} dx <= C^{q'} lambda^{-q'} min{lambda, |gamma|, rho^{-1/2}}

struct MinEstimate {
    double integral = 0, majorant = 0, ratio = 0;
};

inline double min_estimate_constant(double qp) { return std::max(1.0 / (qp - 1.0), 2.0); }

inline double min_estimate_integral(double rho, double lambda, double g_lo, double g_hi, double qp) {
    if (!(g_hi > g_lo)) return 0.0;
    auto f = [&](double x) { return std::exp(-rho * qp * x * x) * std::pow(std::abs(x) + lambda, -qp); };
    std::vector<double> cuts{g_lo, g_hi, 0.0};
    // (|x| + lambda)^{-q'} is a power law beyond lambda: geometric breakpoints keep each piece smooth
    double reach = std::max(std::abs(g_lo), std::abs(g_hi));
    for (double x = lambda; x < reach; x *= 2) cuts.push_back(x), cuts.push_back(-x);
    if (rho > 0) cuts.push_back(1 / std::sqrt(rho)), cuts.push_back(-1 / std::sqrt(rho));
    std::vector<double> pts;
    for (double c : cuts)
        if (c >= g_lo && c <= g_hi) pts.push_back(c);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    CompensatedSum<double> s;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double a = pts[i], b = pts[i + 1];
        // beyond a few Gaussian widths the integrand is below double resolution
        if (rho > 0) {
            double cutoff = std::sqrt(800.0 / (rho * qp));
            if (a >= cutoff || b <= -cutoff) continue;
            a = std::max(a, -cutoff);
            b = std::min(b, cutoff);
        }
        double err = 0;
        double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-10, &err);
        s.add(v);
    }
    return s.value();
}

inline MinEstimate min_estimate_check(double rho, double lambda, double g_lo, double g_hi, double qp) {
    if (!(qp > 1)) throw DomainError("min_estimate_check: need q' > 1");
    if (!(lambda > 0)) throw DomainError("min_estimate_check: need lambda > 0");
    if (rho < 0) throw DomainError("min_estimate_check: need rho >= 0");
    MinEstimate m;
    double len = std::max(0.0, g_hi - g_lo);
    m.integral = min_estimate_integral(rho, lambda, g_lo, g_hi, qp);
    double mn = std::min(lambda, len);
    if (rho > 0) mn = std::min(mn, 1 / std::sqrt(rho));
    double C = min_estimate_constant(qp);
    m.majorant = std::pow(C, qp) * std::pow(lambda, -qp) * mn;
    m.ratio = m.majorant > 0 ? m.integral / m.majorant : (m.integral == 0 ? 0.0 : std::numeric_limits<double>::infinity());
    return m;
}

struct MinEstimateSample {
    double rho, lambda, g_lo, g_hi, qp;
    MinEstimate result;
};

struct MinEstimateSweep {
    std::vector<MinEstimateSample> samples;
    long violations = 0;
    double max_ratio = 0;
};

// one_sided: gamma in [0, inf), the case the estimate is used for; otherwise gamma may straddle 0
inline MinEstimateSweep min_estimate_sweep(long count, std::uint64_t seed, bool one_sided, int workers = 1) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0, 1);
    auto logu = [&](double lo, double hi) { return lo * std::pow(hi / lo, U(rng)); };
    std::vector<MinEstimateSample> s(count);
    for (long i = 0; i < count; ++i) {
        double rho = U(rng) < 0.1 ? 0.0 : logu(1e-6, 1e6);
        double lambda = logu(1e-4, 10);
        double len = logu(1e-4, 10);
        double qp = i % 5 == 0 ? 31.0 / 30.0 : 1.01 + 2.99 * U(rng);
        double lo;
        if (one_sided)
            lo = U(rng) < 0.3 ? 0.0 : logu(1e-4, 10);
        else
            lo = -len * U(rng);
        s[i] = {rho, lambda, lo, lo + len, qp, {}};
    }
    parallel_for(s.size(), workers, [&](std::size_t i) {
        s[i].result = min_estimate_check(s[i].rho, s[i].lambda, s[i].g_lo, s[i].g_hi, s[i].qp);
    });
    MinEstimateSweep out;
    for (auto& x : s) {
        out.max_ratio = std::max(out.max_ratio, x.result.ratio);
        if (x.result.integral > x.result.majorant) ++out.violations;
    }
    out.samples = std::move(s);
    return out;
}

// ---------------------------------------------------------------------------
// Carleman ratio R = ||e^{nu psi} u||_{L^{p'}(A(psi^{-1} gamma))} / ||e^{nu psi} dbar u||_{L^p(B(0,1))}
//
// For u = h(z) f(|z|) with h a monomial of degree k both norms factor into an angular
// constant int_{S^3} |h|^r and a radial integral in sigma = log 1/|z|, evaluated in log space.

struct CarlemanSpec {
    std::vector<double> nu{16, 32, 64, 128};
    std::vector<double> gamma_factor{0.1, 1.0, 10.0};  // |gamma| = factor * nu^{-1/2}
    double q = 31;  // 2 d^2 - 1 at d = 4
    int per_panel = 16;
    long max_nodes = 2'000'000;
    int sphere_resolution = 32;

    double p() const { return 2 * q / (q + 1); }
    double p_prime() const { return 2 * q / (q - 1); }
};

struct CarlemanRow {
    std::string function;
    double nu = 0, gamma_factor = 0;
    LogInterval gamma;
    double log_numerator = 0, log_denominator = 0;
    double ratio = 0, normalized = 0;
};

struct CarlemanResult {
    std::vector<CarlemanRow> rows;
    double sup_normalized = 0, inf_normalized = 0, variation = 0;
    double max_nu_slope = 0;
    std::vector<std::pair<std::string, FitResult>> slopes;  // per (function, regime)
};

namespace detail {

inline int monomial_degree(const TestFunction& u) {
    int k = 0;
    for (int e : u.powers) k += e;
    return k;
}

// log int_{S^3} |h|^r
inline double log_angular_moment(const TestFunction& u, double r, int resolution) {
    SphereGrid g = sphere_grid(4, resolution);
    CompensatedSum<double> acc;
    for (std::size_t i = 0; i < g.size(); ++i) acc.add(g.weights[i] * std::pow(std::abs(u.holo(g.nodes[i])), r));
    double v = acc.value();
    return v > 0 ? std::log(v) : -std::numeric_limits<double>::infinity();
}

// log int_{sig_lo}^{sig_hi} exp(r (nu psi(sigma) + log|F(s)| + k log s)) s^4 d sigma, s = e^{-sigma}
template <class LogF>
double log_radial_integral(double sig_lo, double sig_hi, double nu, double r, int k, const CarlemanWeight& w,
                           LogF&& logF, int per_panel, long& budget) {
    if (!(sig_hi > sig_lo)) return -std::numeric_limits<double>::infinity();
    // e^{r nu psi} changes by a factor e per 1/(r nu) in sigma
    double h = std::min(1.0 / (r * nu), (sig_hi - sig_lo) / 4);
    int panels = static_cast<int>(std::ceil((sig_hi - sig_lo) / h));
    budget -= static_cast<long>(panels) * per_panel;
    if (budget < 0) throw BudgetExceeded("carleman_ratio_experiment: quadrature budget exceeded", 0.0);
    Rule1D rule = composite_gauss(uniform_edges(sig_lo, sig_hi, panels), per_panel);
    std::vector<double> terms;
    terms.reserve(rule.x.size());
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        double sig = rule.x[i], s = std::exp(-sig);
        double lf = logF(s);
        if (!std::isfinite(lf)) continue;
        terms.push_back(std::log(rule.w[i]) + r * (nu * w.psi(sig) + lf + k * std::log(s)) - 4 * sig);
    }
    if (terms.empty()) return -std::numeric_limits<double>::infinity();
    return log_sum_exp(terms);
}

}  // namespace detail

// sigma-range of the support of u inside the unit ball, on psi's increasing branch
inline std::pair<double, double> carleman_sigma_range(const TestFunction& u, const CarlemanWeight& w) {
    double s_hi = std::min(u.profile.support_hi, 1.0);
    double s_lo = u.profile.support_lo;
    if (!(s_lo > 0)) throw DomainError("carleman_ratio: u must be supported away from 0");
    double lo = std::max(-std::log(s_hi), w.sigma_min());
    return {lo, -std::log(s_lo)};
}

inline CarlemanRow carleman_ratio(const TestFunction& u, const CarlemanWeight& w, double nu, const LogInterval& gamma,
                                  const CarlemanSpec& spec) {
    const double p = spec.p(), pp = spec.p_prime();
    const int k = detail::monomial_degree(u);
    auto [sig_lo, sig_hi] = carleman_sigma_range(u, w);
    long budget = spec.max_nodes;
    auto logf = [&](double s) { return std::log(std::abs(u.profile.f(s))); };
    auto logdf = [&](double s) { return std::log(0.5 * std::abs(u.profile.df(s))); };
    CarlemanRow row;
    row.nu = nu;
    row.gamma = gamma;
    row.function = u.kind;
    // numerator over sigma with psi(sigma) in gamma
    double a = sig_lo, b = sig_hi;
    if (gamma.hi < w.psi(sig_lo) || gamma.lo > w.psi(sig_hi)) {
        b = a;
    } else {
        if (gamma.lo > w.psi(a)) a = w.inverse(gamma.lo);
        if (gamma.hi < w.psi(b)) b = w.inverse(gamma.hi);
    }
    double num = detail::log_radial_integral(a, b, nu, pp, k, w, logf, spec.per_panel, budget);
    double den = detail::log_radial_integral(sig_lo, sig_hi, nu, p, k, w, logdf, spec.per_panel, budget);
    row.log_numerator = (detail::log_angular_moment(u, pp, spec.sphere_resolution) + num) / pp;
    row.log_denominator = (detail::log_angular_moment(u, p, spec.sphere_resolution) + den) / p;
    if (!std::isfinite(row.log_denominator)) throw DomainError("carleman_ratio: dbar u vanishes on the unit ball");
    row.ratio = std::isfinite(row.log_numerator) ? std::exp(row.log_numerator - row.log_denominator) : 0.0;
    row.normalized = row.ratio / (nu * gamma.reduced_length(nu));
    return row;
}

// psi-value where e^{nu psi} |u| peaks on the support
inline double carleman_peak(const TestFunction& u, const CarlemanWeight& w, double nu, int samples = 4000) {
    auto [lo, hi] = carleman_sigma_range(u, w);
    const int k = detail::monomial_degree(u);
    double best = -std::numeric_limits<double>::infinity(), arg = lo;
    for (int i = 1; i < samples; ++i) {
        double sig = lo + (hi - lo) * i / samples, s = std::exp(-sig);
        double f = std::abs(u.profile.f(s));
        if (f == 0) continue;
        double v = nu * w.psi(sig) + std::log(f) + k * std::log(s);
        if (v > best) best = v, arg = sig;
    }
    return w.psi(arg);
}

inline CarlemanResult carleman_ratio_experiment(const std::vector<TestFunction>& fns, const CarlemanWeight& w,
                                                const CarlemanSpec& spec, int workers = 1) {
    struct Job {
        std::size_t f;
        double nu, factor;
    };
    std::vector<Job> jobs;
    for (std::size_t f = 0; f < fns.size(); ++f)
        for (double nu : spec.nu)
            for (double g : spec.gamma_factor) jobs.push_back({f, nu, g});
    CarlemanResult res;
    res.rows = parallel_map<CarlemanRow>(jobs.size(), workers, [&](std::size_t i) {
        const Job& j = jobs[i];
        double c = carleman_peak(fns[j.f], w, j.nu);
        double len = j.factor / std::sqrt(j.nu);
        CarlemanRow r = carleman_ratio(fns[j.f], w, j.nu, LogInterval(c - len / 2, c + len / 2), spec);
        r.gamma_factor = j.factor;
        return r;
    });
    res.sup_normalized = 0;
    res.inf_normalized = std::numeric_limits<double>::infinity();
    for (auto& r : res.rows) {
        res.sup_normalized = std::max(res.sup_normalized, r.normalized);
        res.inf_normalized = std::min(res.inf_normalized, r.normalized);
    }
    res.variation = res.inf_normalized > 0 ? res.sup_normalized / res.inf_normalized
                                           : std::numeric_limits<double>::infinity();
    res.max_nu_slope = -std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < fns.size(); ++f)
        for (double g : spec.gamma_factor) {
            std::vector<double> x, y;
            for (auto& r : res.rows)
                if (r.function == fns[f].kind && r.gamma_factor == g && r.normalized > 0)
                    x.push_back(r.nu), y.push_back(r.normalized);
            if (x.size() < 2) continue;
            FitResult fit = fit_exponent(x, y);
            std::ostringstream tag;
            tag << fns[f].kind << "/gamma=" << g << "nu^-1/2";
            res.slopes.push_back({tag.str(), fit});
            res.max_nu_slope = std::max(res.max_nu_slope, fit.slope);
        }
    return res;
}

}  // namespace sucp
