#pragma once

#include <memory>
#include <span>
#include <vector>

#include "eh/matching.hpp"

namespace eh {

struct SurgeryReport {
    double lambda = 1.0;          // scaling factor
    int shift_count = 0;          // weight-shift rounds
    double max_deviation = 0.0;   // max |x'_v - 1| before shifting
    double b_star_in = 1.0;
    double b_star_out = 1.0;
    double b_star_predicted = 1.0;  // (1 + n^(-2/3-alpha/2)) * b_star_in
    double entropy_in = 0.0;        // bits, matching on the full graph
    double entropy_out = 0.0;       // bits, repaired matching
    double entropy_floor = 0.0;     // guaranteed floor when hypotheses hold
    bool floor_asserted = false;    // hypotheses verified (well-behaved M or small M)
    bool hypotheses_well_behaved = false;
    bool hypotheses_small_set = false;
    // Worst per-round margin of the entropy-loss diagnostic
    // (bound - actual loss); negative values flag a violated diagnostic.
    double entropy_loss_margin = 0.0;
};

struct ScaleRestrictResult {
    Hypergraph reduced;
    std::vector<int> old_to_new;
    std::vector<int> new_to_old;
    std::vector<double> weights;  // scaled weights on the reduced graph
    double lambda = 1.0;
};

// x' = Lambda * x on the surviving edges, with Lambda = (n'/k) / sum x_e over
// E(G - M); total weight of x' is exactly n'/k.
ScaleRestrictResult scale_restrict(const FractionalMatching& x, std::span<const int> removed);

struct NormalizationStats {
    int shift_count = 0;
    double max_deviation_in = 0.0;
    double entropy_loss_margin = 0.0;
    double total_weight_drift = 0.0;  // |sum after - sum before|, conservation audit
};

// The weight-shift loop: repeatedly move mass from a vertex above 1 to a
// vertex below 1 across their common co-neighbourhood until every vertex sum
// is within tol of 1. Throws NoCommonNeighbors when an unbalanced pair has no
// common (k-1)-set, NegativeWeight when a shift stalls at a zero weight.
std::pair<FractionalMatching, NormalizationStats>
normalization_procedure(const Hypergraph& g, FractionalMatching x, double tol);

struct RepairResult {
    std::unique_ptr<Hypergraph> reduced;  // address-stable: z references *reduced
    std::vector<int> old_to_new;
    std::vector<int> new_to_old;
    FractionalMatching z;
    SurgeryReport report;
};

// scale_restrict followed by normalization_procedure, with the entropy floor
// and normality prediction evaluated. The floor is asserted only when M is
// well-behaved or |M| <= n / log2(n)^2; otherwise it is reported as
// unverified and the procedure still runs.
RepairResult remove_and_repair(const FractionalMatching& x, std::span<const int> removed,
                               double alpha, double tol);

} // namespace eh
