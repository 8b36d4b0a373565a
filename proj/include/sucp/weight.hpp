#pragma once

#include <cmath>

#include "common.hpp"

namespace sucp {

// psi(sigma) = sigma + exp(-delta sigma). Convex, with
// 1 - delta < psi' < 1 for sigma > 0 and psi'' = delta^2 exp(-delta sigma).
struct CarlemanWeight {
    double delta = 0.5;

    explicit CarlemanWeight(double d = 0.5) : delta(d) {
        if (!(d > 0.0 && d < 1.0)) throw DomainError("CarlemanWeight: delta must lie in (0,1)");
    }

    double psi(double s) const { return s + std::exp(-delta * s); }
    double dpsi(double s) const { return 1.0 - delta * std::exp(-delta * s); }
    double ddpsi(double s) const { return delta * delta * std::exp(-delta * s); }

    double C() const { return 1.0 / (1.0 - delta); }
    double C_delta() const { return delta * delta; }

    // psi is increasing for sigma above this point
    double sigma_min() const { return std::log(delta) / delta; }

    // Delta_2 psi(sigma, tau) = psi(tau) - psi(sigma) - psi'(sigma)(tau - sigma)
    double second_difference(double sigma, double tau) const {
        double h = tau - sigma;
        // exp(-delta tau) - exp(-delta sigma) + delta h exp(-delta sigma), written to avoid cancellation
        double e = std::exp(-delta * sigma);
        double x = -delta * h;
        return e * (std::expm1(x) - x);
    }

    double inverse(double x) const {
        double lo = sigma_min(), hi = std::max(1.0, x + 1.0);
        if (x < psi(lo)) throw DomainError("CarlemanWeight::inverse: value below the range of psi");
        while (psi(hi) < x) hi *= 2.0;
        for (int i = 0; i < 200; ++i) {
            double mid = 0.5 * (lo + hi);
            if (psi(mid) < x)
                lo = mid;
            else
                hi = mid;
            if (hi - lo < 1e-15 * std::max(1.0, std::abs(hi))) break;
        }
        return 0.5 * (lo + hi);
    }
};

}  // namespace sucp
