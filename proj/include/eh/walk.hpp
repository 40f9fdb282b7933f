#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eh/aux_chain.hpp"

namespace eh {

// A realized walk: ordered visited vertices plus the seed that produced it.
// Consecutive k-windows (stride k-ell) of vertex_sequence are edges of the
// underlying graph; self_avoiding means all vertices are distinct.
struct WalkRecord {
    int ell = 0;
    std::vector<int> start_state;
    std::vector<int> vertex_sequence;
    std::uint64_t seed = 0;
    bool self_avoiding = false;
    int length_steps = 0;

    std::string to_json_line() const;
};

WalkRecord sample_walk(const AuxChain& chain, std::size_t start, int m, std::uint64_t seed);

// Entropy in bits of the outgoing distribution at S (|S| = ell <= k-1):
// sum_X y[S->X] log2((k-ell)!/y[S->X]); the factorial term vanishes for
// ell = k-1. Throws ZeroSupport when x_S = 0.
double tuple_entropy(const FractionalMatching& x, std::span<const int> sorted_subset);

struct WellBehavedReport {
    double alpha = 0.0;
    std::size_t set_size = 0;
    // Worst-case margins (threshold - |deviation|), negative = violated.
    double slack_count = 0.0;      // condition on |M ∩ N(S)|
    double slack_weight = 0.0;     // condition on sum of y over M ∩ N(S)
    double slack_entropy = 0.0;    // condition on the entropy sum
    bool pass = false;
    // Tuples violating each condition (diagnostics).
    std::int64_t fail_count = 0, fail_weight = 0, fail_entropy = 0;
};

// Exact evaluation of the three well-behavedness conditions over every
// (k-1)-subset S, with thresholds n^(1/3-alpha) and n^(-2/3-alpha).
WellBehavedReport well_behaved_check(const FractionalMatching& x,
                                     std::span<const int> m_set, double alpha);

// Self-avoiding AND the first length_steps*(k-ell) visited vertices form a
// well-behaved set.
bool is_well_behaved_walk(const FractionalMatching& x, const WalkRecord& w, double alpha);
WellBehavedReport well_behaved_walk_report(const FractionalMatching& x,
                                           const WalkRecord& w, double alpha);

struct WalkEntropy {
    double chain_rule_bits = 0.0;
    std::optional<double> direct_bits;  // present when the trajectory count fits the guard
};

// H(Z) for the m-step walk started at `start`, computed by the chain rule
// over exact marginals and, when feasible, by direct trajectory enumeration.
WalkEntropy walk_entropy_exact(const AuxChain& chain, std::size_t start, int m,
                               std::int64_t max_trajectories = 10'000'000);

// Shannon entropy in bits of a probability vector (validated).
double shannon_entropy(std::span<const double> dist);

// Structural check: every k-window at the walk stride is an edge.
bool walk_windows_valid(const Hypergraph& g, std::span<const int> seq, int ell);

} // namespace eh
