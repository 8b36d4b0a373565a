#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace sucp {

using cplx = std::complex<double>;
using cplxl = std::complex<long double>;

inline constexpr double pi = std::numbers::pi;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : Error { using Error::Error; };
struct UnsupportedDimension : Error { using Error::Error; };
struct ConvergenceDomainError : Error { using Error::Error; };
struct SingularityError : Error { using Error::Error; };
struct UncomputableRegion : Error { using Error::Error; };
struct GeometryError : Error { using Error::Error; };
struct ShapeError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

struct IterationLimit : Error {
    double last_estimate;
    IterationLimit(const std::string& what, double last) : Error(what), last_estimate(last) {}
};

// carries whatever was computed before the budget ran out
struct BudgetExceeded : Error {
    double partial;
    BudgetExceeded(const std::string& what, double p) : Error(what), partial(p) {}
};

// Neumaier's variant of Kahan summation
template <class T>
struct CompensatedSum {
    T sum{};
    T comp{};
    void add(T x) {
        T t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    T value() const { return sum + comp; }
};

template <class T>
struct CompensatedSum<std::complex<T>> {
    CompensatedSum<T> re, im;
    void add(std::complex<T> x) {
        re.add(x.real());
        im.add(x.imag());
    }
    std::complex<T> value() const { return {re.value(), im.value()}; }
};

inline int resolve_workers(int workers) {
    if (workers > 0) return workers;
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs fn(i) for i in [0, n). Each index writes its own slot, so results never
// depend on scheduling; callers reduce in index order.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
    int w = std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(n, 1));
    if (w <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto body = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(w - 1);
    for (int k = 1; k < w; ++k) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

template <class R, class Fn>
std::vector<R> parallel_map(std::size_t n, int workers, Fn&& fn) {
    std::vector<R> out(n);
    parallel_for(n, workers, [&](std::size_t i) { out[i] = fn(i); });
    return out;
}

// log(sum exp(v)) without overflow; -inf for an empty or all -inf input
inline double log_sum_exp(const std::vector<double>& v) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : v) m = std::max(m, x);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

inline double sphere_area(int d) {
    // |S^{d-1}| = 2 pi^{d/2} / Gamma(d/2)
    return 2.0 * std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d);
}

}  // namespace sucp
