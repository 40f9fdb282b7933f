#pragma once

#include <vector>

#include "eh/matching.hpp"

namespace eh {

// Per-vertex Lagrange multipliers of the max-entropy program. The induced
// primal is x_e = exp(sum_{v in e} lambda_v - 1), strictly positive on every
// edge.
struct DualPotentials {
    std::vector<double> lambda;
    double residual_norm = 0.0;  // max_v |vertex_sum_v - 1| at exit
    int iterations = 0;
    int newton_steps = 0;
    int sinkhorn_rounds = 0;
};

struct SolveOptions {
    double tol = 1e-10;
    int max_iters = 10000;
    // Dual divergence guard: declare Infeasible when ||lambda||_inf exceeds
    // divergence_factor * k * ln n while the residual is stalled. Heuristic;
    // reported as such in the error message.
    double divergence_factor = 50.0;
};

// Entropy-maximizing perfect fractional matching of G. Throws Infeasible when
// no perfect fractional matching exists, NotConverged when max_iters is
// exhausted with the residual above tol.
std::pair<FractionalMatching, DualPotentials>
max_entropy_pfm(const Hypergraph& g, const SolveOptions& opts = {});

} // namespace eh
