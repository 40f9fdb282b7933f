#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "eh/matching.hpp"

namespace eh {

enum class ChainMode { Tuple, OrderedEdge };

struct MixingProfile {
    std::vector<double> max_rel_err;  // index t: max_S |P[Z_t=S] - sigma_S| / sigma_S
    double alpha_hat = 0.0;           // fitted e-folding rate on the tail
    double rho_hat = 1.0;             // exp(-alpha_hat)
};

// The transition-weighted digraph on ordered (k-1)-tuples (Tuple mode) or
// ordered edges (OrderedEdge mode, overlap ell). Rows are derived from the
// graph and matching on demand; nothing quadratic is materialized.
class AuxChain {
public:
    ChainMode mode() const { return mode_; }
    int ell() const { return ell_; }
    const Hypergraph& graph() const { return *g_; }
    const FractionalMatching& matching() const { return *x_; }

    std::size_t state_count() const { return count_; }
    std::span<const int> state(std::size_t i) const {
        return {states_.data() + i * stride_, static_cast<std::size_t>(stride_)};
    }
    std::optional<std::size_t> find_state(std::span<const int> ordered) const;
    // Throws ZeroSupport when the tuple/edge is outside the supported space.
    std::size_t state_index(std::span<const int> ordered) const;

    struct Transition {
        std::int64_t target;
        double prob;
    };
    // Outgoing row of state i, deterministic order, probabilities summing to 1.
    void row(std::size_t i, std::vector<Transition>& out) const;
    double row_entropy_bits(std::size_t i) const;

    // Closed-form stationary vector sigma_S = x_S / ((k-1)! n); verified
    // against sigma P = sigma by one multiply.
    std::vector<double> stationary(double verify_tol = 1e-9) const;
    std::vector<double> stationary_unverified() const;

    std::vector<double> exact_distribution(std::size_t start, int t) const;
    MixingProfile mixing_profile(std::size_t start, int t_max) const;

    friend AuxChain build_chain(const Hypergraph& g, const FractionalMatching& x,
                                int ell, bool allow_zero_support);
    friend AuxChain build_chain_ordered_edge(const Hypergraph& g,
                                             const FractionalMatching& x, int ell,
                                             bool allow_zero_support);

private:
    const Hypergraph* g_ = nullptr;
    const FractionalMatching* x_ = nullptr;
    ChainMode mode_ = ChainMode::Tuple;
    int ell_ = 0;
    int stride_ = 0;   // vertices per state
    std::size_t count_ = 0;
    bool allow_zero_support_ = false;
    int key_bits_ = 16;

    std::vector<int> states_;                     // flat, stride_ per state
    std::vector<double> denom_;                   // x_S of the row denominator set
    std::vector<double> sigma_weight_;            // x_S (tuple) or x_e (edge) for sigma
    std::unordered_map<std::uint64_t, std::int64_t> index_;

    void check_exact_guard() const;
    void apply(const std::vector<double>& in, std::vector<double>& out) const;
};

// ell = k-1 uses Tuple mode; ell < k-1 uses OrderedEdge mode. States without
// matching support are excluded unless allow_zero_support, in which case
// they carry the uniform 1/deg fallback row.
AuxChain build_chain(const Hypergraph& g, const FractionalMatching& x, int ell,
                     bool allow_zero_support = false);
// Same state space and transition law, but forcing OrderedEdge mode even for
// ell = k-1 (cross-mode checks).
AuxChain build_chain_ordered_edge(const Hypergraph& g, const FractionalMatching& x,
                                  int ell, bool allow_zero_support = false);

} // namespace eh
