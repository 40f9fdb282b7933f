#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "eh/errors.hpp"

namespace eh {

struct DiracParams {
    double delta = 0.0;      // threshold in (1/2, 1]
    double delta_hat = 0.0;  // delta - 1/2

    static DiracParams from_delta(double d) { return {d, d - 0.5}; }
};

struct CodegreeEntry {
    std::int32_t vertex;   // the vertex completing the (k-1)-set to an edge
    std::int32_t edge_id;
};

// Immutable k-uniform hypergraph on vertices 0..n-1. Edges are stored
// canonically (sorted, deduplicated, lexicographic order); indices for
// per-vertex incidence and (k-1)-set codegrees are built once at
// construction and shared by all readers.
class Hypergraph {
public:
    static Hypergraph build(int n, int k, const std::vector<std::vector<int>>& edge_list);

    int vertex_count() const { return n_; }
    int uniformity() const { return k_; }
    std::size_t edge_count() const { return edge_count_; }

    std::span<const std::int32_t> edge(std::size_t id) const {
        return {edge_flat_.data() + id * k_, static_cast<std::size_t>(k_)};
    }

    // Edge id of a sorted k-set, if present.
    std::optional<std::int32_t> find_edge(std::span<const int> sorted_edge) const;
    bool has_edge(std::span<const int> sorted_edge) const { return find_edge(sorted_edge).has_value(); }

    // Edge ids incident to v, ascending.
    std::span<const std::int32_t> incident_edges(int v) const;

    // Codegree neighbourhood of a sorted (k-1)-set: entries (v, edge_id)
    // sorted by v. Empty span when the set extends to no edge.
    std::span<const CodegreeEntry> codegree(std::span<const int> sorted_tuple) const;
    std::int64_t codegree_count(std::span<const int> sorted_tuple) const {
        return static_cast<std::int64_t>(codegree(sorted_tuple).size());
    }
    // True iff sorted_tuple + {v} is an edge; fills edge id when asked.
    bool completes_edge(std::span<const int> sorted_tuple, int v, std::int32_t* edge_id = nullptr) const;

    // Minimum d-degree over all d-subsets; d = 0 gives |E|.
    std::int64_t min_d_degree(int d) const;

    // delta_d(G) / C(n-d, k-d) for d = 0..k-1.
    std::vector<double> degree_monotonicity_profile() const;

    bool is_dirac(const DiracParams& p) const;
    // Largest delta for which the graph is delta-Dirac: delta_{k-1}(G)/n.
    double dirac_ratio() const;

    int key_bits() const { return key_bits_; }

private:
    int n_ = 0;
    int k_ = 0;
    std::size_t edge_count_ = 0;
    int key_bits_ = 16;

    std::vector<std::int32_t> edge_flat_;  // k entries per edge, sorted within edge
    std::vector<std::int32_t> incidence_;  // per-vertex edge ids (CSR)
    std::vector<std::int64_t> incidence_off_;
    std::vector<CodegreeEntry> codegree_entries_;  // CSR payload
    std::unordered_map<std::uint64_t, std::pair<std::int64_t, std::int32_t>> codegree_index_;

    void build_indices();
};

struct RemovalResult {
    Hypergraph graph;
    std::vector<int> old_to_new;  // -1 for removed vertices
    std::vector<int> new_to_old;
};

// Induced subgraph on V \ removed, vertices relabeled to 0..n-|M|-1.
RemovalResult remove_vertices(const Hypergraph& g, std::span<const int> removed);

Hypergraph complete_hypergraph(int n, int k);
Hypergraph binomial_hypergraph(int n, int k, double p, std::uint64_t seed);
// Resample binomial graphs until one is delta-Dirac.
Hypergraph dirac_rejection_hypergraph(int n, int k, double delta, double p,
                                      std::uint64_t seed, int max_tries = 1000);

// Edge-file format: first non-comment line "n k", then one edge per line as
// k 0-based vertex ids; '#' starts a comment line. Duplicates collapse on
// read; the count of collapsed lines is reported via duplicate_count.
Hypergraph read_edge_file(std::istream& in, int* duplicate_count = nullptr);
Hypergraph read_edge_file(const std::string& path, int* duplicate_count = nullptr);
void write_edge_file(std::ostream& out, const Hypergraph& g);
void write_edge_file(const std::string& path, const Hypergraph& g);

} // namespace eh
