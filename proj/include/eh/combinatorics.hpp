#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "eh/errors.hpp"

namespace eh {

constexpr double kLog2E = 1.4426950408889634074; // 1/ln 2

inline double log2_of(double v) { return std::log(v) * kLog2E; }

// x * log2(1/x) with the 0 log 0 = 0 convention.
inline double xlog2_inv(double x) {
    return x > 0.0 ? -x * (std::log(x) * kLog2E) : 0.0;
}

inline double log2_factorial(std::int64_t n) {
    return std::lgamma(static_cast<double>(n) + 1.0) * kLog2E;
}

// log2 of C(n, r); r is small in all callers so the product form is exact
// enough and avoids lgamma cancellation.
inline double log2_binomial(std::int64_t n, std::int64_t r) {
    if (r < 0 || r > n) return -std::numeric_limits<double>::infinity();
    if (r > n - r) r = n - r;
    double acc = 0.0;
    for (std::int64_t i = 1; i <= r; ++i)
        acc += log2_of(static_cast<double>(n - r + i) / static_cast<double>(i));
    return acc;
}

inline std::int64_t binomial_i64(std::int64_t n, std::int64_t r) {
    if (r < 0 || r > n) return 0;
    if (r > n - r) r = n - r;
    std::int64_t acc = 1;
    for (std::int64_t i = 1; i <= r; ++i) acc = acc * (n - r + i) / i;
    return acc;
}

// Number of ordered r-tuples with distinct entries from an n-set.
inline std::int64_t falling_factorial(std::int64_t n, std::int64_t r) {
    std::int64_t acc = 1;
    for (std::int64_t i = 0; i < r; ++i) acc *= (n - i);
    return acc;
}

// Visit all r-subsets of {0..n-1} in lexicographic order.
template <typename F>
void for_each_subset(int n, int r, F&& fn) {
    if (r < 0 || r > n) return;
    std::vector<int> c(r);
    for (int i = 0; i < r; ++i) c[i] = i;
    while (true) {
        fn(std::span<const int>(c));
        int i = r - 1;
        while (i >= 0 && c[i] == n - r + i) --i;
        if (i < 0) break;
        ++c[i];
        for (int j = i + 1; j < r; ++j) c[j] = c[j - 1] + 1;
    }
}

// Packed key for a vertex tuple (ordered or sorted, caller's choice).
// 16 bits per vertex while it fits, 7 bits otherwise; this covers every
// geometry the library targets (in-memory hypergraphs, k <= 9, n <= 65535).
inline int subset_key_bits(int n, int len) {
    if (len <= 0) return 16;
    if (len * 16 <= 64) {
        if (n <= 0xFFFF) return 16;
    }
    if (len * 7 <= 64 && n <= 0x7F) return 7;
    throw UnsupportedGeometry("tuple key does not fit in 64 bits (n=" +
                              std::to_string(n) + ", len=" + std::to_string(len) + ")");
}

inline std::uint64_t pack_tuple(std::span<const int> t, int bits) {
    std::uint64_t key = 0;
    for (int v : t) key = (key << bits) | static_cast<std::uint64_t>(v + 1);
    return key;
}

} // namespace eh
