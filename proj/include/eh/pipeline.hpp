#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "eh/exact_count.hpp"
#include "eh/hypergraph.hpp"

namespace eh {

struct PipelineConfig {
    double alpha = 0.1;  // well-behavedness exponent, in (0, 1/3)
    double beta = 0.3;   // stop path building once n_i <= n^(1-beta)
    // |U| = ceil(n^absorb_exponent); <= 0 means the default 1 - beta/2.
    double absorb_exponent = 0.0;
    int max_resamples = 500;
    std::uint64_t seed = 0;
    double tol = 1e-10;
    int absorb_max_tries = 20000;
    // Per-stage matching: re-solve (default) or repair the previous matching
    // through the weight-shift procedure.
    bool repair_matching = false;
    // Accept only fully well-behaved walks. Off by default: at desk scale the
    // all-tuples thresholds are rarely met, so the sampler falls back to the
    // best self-avoiding walk and records the well-behavedness statistics.
    bool require_well_behaved = false;
    int desk_scale_limit = 120;
    bool override_scale_guard = false;
    std::uint64_t closure_node_budget = 5'000'000;
    int closure_restarts = 12;
    int threads = 1;

    double effective_absorb_exponent() const {
        return absorb_exponent > 0.0 ? absorb_exponent : 1.0 - beta / 2.0;
    }
};

struct StageLog {
    int stage = 0;
    int n_i = 0;
    int m_i = 0;
    int resamples = 0;        // walks sampled this stage
    bool well_behaved = false;  // accepted walk passed the full check
    std::int64_t wb_violations = 0;  // failing tuples of the accepted walk
    bool dirac_ok = false;    // measured codegree >= n_i / 2
    double delta_i = 0.0;     // measured codegree ratio of G_i
    double h_bits = 0.0;      // entropy of the stage matching
    double b_star = 0.0;
    std::uint64_t walk_seed = 0;
};

struct HamiltonCertificate {
    std::vector<int> cycle;  // cyclic vertex order, every k-window an edge
    bool valid = false;
    std::uint64_t seed = 0;
    std::vector<int> absorption_set;
    double absorb_delta_hat = 0.0;  // margin level the accepted U satisfied
    std::vector<StageLog> stage_log;
    bool dirac_ok_all_stages = false;
    PathSearchStats closure_stats;

    std::string to_json() const;
};

// Uniformly random U of the given size with |N(S) ∩ U| >= (1/2 + 3 delta_hat/4)|U|
// for every (k-1)-subset S, found by rejection sampling.
std::vector<int> select_absorption_set(const Hypergraph& g, double delta_hat, int size,
                                       std::uint64_t seed, int max_tries);

struct LongPathResult {
    std::vector<int> path;  // tight path in g's vertex ids
    std::vector<StageLog> stage_log;
};

// Iterated walk-remove-repair construction of a long tight path.
LongPathResult build_long_path(const Hypergraph& g, const PipelineConfig& cfg);

// Complete the path Q (in g's ids, built in g - U) into a Hamilton cycle by
// exact search through the leftover vertices and U.
HamiltonCertificate close_cycle(const Hypergraph& g, const std::vector<int>& q,
                                const std::vector<int>& absorption,
                                const PipelineConfig& cfg);

// select_absorption_set + build_long_path + close_cycle, fully seeded.
HamiltonCertificate sample_hamilton_cycle(const Hypergraph& g, const PipelineConfig& cfg);

// Independent validation: cycle is a permutation of V(G) and every cyclic
// k-window is an edge.
bool validate_certificate(const Hypergraph& g, std::span<const int> cycle);

// Lexicographically minimal rotation/reflection; canonical form for dedup.
std::vector<int> canonical_cycle_form(std::span<const int> cycle);

} // namespace eh
