#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eh/hypergraph.hpp"

namespace eh {

// Theorem right-hand sides in bits, with no asymptotic slack folded in; the
// per-vertex slack c is carried separately for callers that want to subtract
// c*n themselves.
struct BoundReport {
    std::string instance;
    int n = 0, k = 0, ell = 0;
    double delta = 0.0;
    double h_bits = 0.0;
    double hbar = 0.0;      // h - (n/k) log2 C(n,k-1) + (n/k) log2 n
    double hbar_ell = 0.0;
    double bound_t16 = 0.0;  // k h - n log2 C(n,k-1) + n log2 n - n log2 e
    double bound_t17 = 0.0;  // n log2 delta + log2 n!
    double bound_t18 = 0.0;  // general-overlap analogue of t16
    double slack_c = 0.0;
    std::optional<double> exact_log2;  // log2 of the exact cycle count
    std::optional<double> gap;         // exact_log2 - bound_t16 (or t18 for ell < k-1)
    double runtime_s = 0.0;
};

// Pure calculator; h comes from the solver, delta from the exact codegree
// ratio. Throws DivisibilityViolated when (k - ell) does not divide n.
BoundReport theorem_bounds(int n, int k, int ell, double delta, double h_bits,
                           double slack_c = 0.0);

struct SweepOptions {
    int ell = -1;  // -1: tight (k-1 per instance)
    double slack_c = 0.0;
    int exact_max_n = 10;  // exact counts only for n <= this
    int threads = 1;
    double solver_tol = 1e-10;
    int solver_max_iters = 10000;
};

struct SweepRow {
    std::string instance;
    std::optional<BoundReport> report;
    std::string error;  // nonempty when this row failed
};

// Solve + bound every instance; per-row errors are captured and the sweep
// continues.
std::vector<SweepRow> sweep(const std::vector<std::pair<std::string, const Hypergraph*>>& instances,
                            const SweepOptions& opts = {});

} // namespace eh
