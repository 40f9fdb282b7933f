#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "eh/hypergraph.hpp"

namespace eh {

struct CountResult {
    mpz_class value;
    double elapsed_s = 0.0;
    std::uint64_t nodes = 0;
};

// C_{n,k,ell}: the constant relating ordered and unordered Hamilton
// ell-cycle counts. pi1 = k mod (k-ell), pi2 = (k-ell) - pi1.
struct CycleConstants {
    int n = 0, k = 0, ell = 0;
    mpz_class c;
    int pi1 = 0, pi2 = 0;
};

CycleConstants cycle_constants(int n, int k, int ell);

// Tight Hamilton cycles up to rotation and reflection, by canonical-anchored
// DFS (vertex 0 first, orientation fixed lexicographically).
CountResult count_tight_hamilton_cycles(const Hypergraph& g, int threads = 1);

struct EllCycleCounts {
    CountResult unordered;
    CountResult ordered;  // = C_{n,k,ell} * unordered, enforced internally
};

// Hamilton ell-cycles, counted by two independent routes that must agree:
// a raw ordered-traversal DFS quotiented by exact division, and a
// canonical-representative DFS (ell >= 1) or a direct matching DFS (ell = 0).
EllCycleCounts count_hamilton_ell_cycles(const Hypergraph& g, int ell, int threads = 1);

// Exact number of walks of length L between two ordered tuples: tight walks
// for |S| = k-1, ell-walks for |S| = ell < k-1. Transfer-matrix product with
// big-integer entries on the unweighted auxiliary digraph.
CountResult count_walks_between(const Hypergraph& g, std::span<const int> s,
                                std::span<const int> t, int L);

struct PathSearchOptions {
    std::uint64_t seed = 0;
    std::uint64_t node_budget = 2'000'000;  // per restart
    int restarts = 8;
};

struct PathSearchStats {
    std::uint64_t nodes = 0;
    int restarts_used = 0;
    bool exhaustive = false;  // search space fully explored (NotFound is definitive)
};

// Tight Hamilton path beginning with S and ending with T (both ordered
// (k-1)-tuples, disjoint). Backtracking with codegree pruning and
// fewest-continuations ordering; seeded restarts reshuffle ties.
std::optional<std::vector<int>> find_hamilton_path_between(
    const Hypergraph& g, std::span<const int> s, std::span<const int> t,
    const PathSearchOptions& opts = {}, PathSearchStats* stats = nullptr);

} // namespace eh
