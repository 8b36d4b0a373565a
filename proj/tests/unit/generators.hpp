#pragma once

#include <cstdint>
#include <random>

#include "sucp/geometry.hpp"

// Hand-rolled generators for the property tests. Every case index gets its own stream,
// so a failing case can be replayed from the index printed in the assertion message.
namespace gen {

inline std::mt19937_64 stream(std::uint64_t suite, std::uint64_t index) {
    std::seed_seq s{suite, index, std::uint64_t{0x5cc9}};
    return std::mt19937_64(s);
}

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline int integer(std::mt19937_64& g, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); }

inline double log_uniform(std::mt19937_64& g, double lo, double hi) {
    return lo * std::pow(hi / lo, uniform(g, 0, 1));
}

inline sucp::ComplexPoint point(std::mt19937_64& g, double radius) {
    std::normal_distribution<double> n;
    sucp::ComplexPoint p{sucp::cplx(n(g), n(g)), sucp::cplx(n(g), n(g))};
    return p * (radius / p.norm());
}

}  // namespace gen
