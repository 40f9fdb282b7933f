#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eh/hypergraph.hpp"

namespace eh {

// Nonnegative edge weighting of a fixed hypergraph with cached vertex sums.
// "Perfect" means every vertex sum is 1 within a tolerance. All reported
// entropies are in bits.
class FractionalMatching {
public:
    FractionalMatching(const Hypergraph& g, std::vector<double> weights);

    // All edges get the same weight w.
    static FractionalMatching constant(const Hypergraph& g, double w);

    const Hypergraph& graph() const { return *g_; }
    std::size_t size() const { return w_.size(); }
    double weight(std::size_t edge_id) const { return w_[edge_id]; }
    std::span<const double> weights() const { return w_; }
    double vertex_sum(int v) const { return vertex_sums_[v]; }
    std::span<const double> vertex_sums() const { return vertex_sums_; }
    double total_weight() const;

    void set_weight(std::size_t edge_id, double w);
    void recompute_sums();

    double max_vertex_residual() const;  // max_v |sum_v - 1|
    bool is_perfect(double tol) const { return max_vertex_residual() <= tol; }

private:
    const Hypergraph* g_;
    std::vector<double> w_;
    std::vector<double> vertex_sums_;
};

// Sum_e x_e log2(1/x_e), with 0 log 0 = 0.
double entropy_bits(const FractionalMatching& x);

// Total weight of edges containing S (|S| in [0, k]). |S| = 0 returns the
// total weight, |S| = k the single edge weight (0 if absent).
double subset_weight(const FractionalMatching& x, std::span<const int> sorted_subset);

struct NormalityCert {
    double b = 1.0;
    bool holds = false;
    std::int32_t witness_edge = -1;  // edge attaining the extreme ratio
    double b_star = 1.0;             // minimal b for which x is b-normal (inf if a weight is 0)
};

// Checks 1/(b n^{k-1}) <= x_e <= b / n^{k-1} for every edge and reports the
// minimal feasible b*.
NormalityCert certify_normality(const FractionalMatching& x, double b);

// Residuals / slacks for the structural identities every perfect fractional
// matching satisfies, plus the b-normality range checks.
struct IdentityReport {
    double res_total_weight = 0.0;     // |sum_e x_e - n/k|
    double res_tuple_sum = 0.0;        // |sum_S x_S - n|
    double res_vertex_tuple = 0.0;     // max_v |sum_{S ∋ v} x_S - (k-1)|
    double res_entropy_identity = 0.0; // |sum_S x_S h_x(S) - k h(x) - sum_S x_S log2 x_S|
    bool tuple_weight_bounds_ok = false;  // delta/(b n^{k-2}) <= x_S <= b/n^{k-2}
    double tuple_weight_slack = 0.0;      // min margin over both sides
    bool transition_bounds_ok = false;    // 1/(b^2 n) <= y <= b^2/(delta n)
    double transition_slack = 0.0;
    double max_residual() const;
};

IdentityReport verify_identities(const FractionalMatching& x, double b, double delta);

// General-overlap analogues: sum over ell-subsets and the entropy identity
// with the (k-ell)! term.
struct EllIdentityReport {
    int ell = 0;
    double res_subset_sum = 0.0;       // |sum_S x_S - C(k,ell) n/k|
    double res_vertex_subset = 0.0;    // max_v |sum_{S ∋ v} x_S - C(k-1,ell-1)|
    double res_entropy_identity = 0.0;
    bool subset_weight_bounds_ok = false;   // delta/(k^k b n^(ell-1)) <= x_S <= b/n^(ell-1)
    double subset_weight_slack = 0.0;
    bool transition_bounds_ok = false;      // appendix transition range
    double transition_slack = 0.0;
    double max_residual() const;
};

EllIdentityReport verify_identities_ell(const FractionalMatching& x, int ell,
                                        double b, double delta);

// Theorem bounds for h(G) of a delta-Dirac graph, in bits:
// lower = (n/k)(log2 C(n,k-1) + log2 delta), upper = ((k-1)/k) n log2 n.
std::pair<double, double> entropy_sandwich(int n, int k, double delta);

// Matching file: one line per edge, "v1 ... vk weight" (17 significant digits).
void write_matching_file(std::ostream& out, const FractionalMatching& x);
void write_matching_file(const std::string& path, const FractionalMatching& x);
FractionalMatching read_matching_file(std::istream& in, const Hypergraph& g);
FractionalMatching read_matching_file(const std::string& path, const Hypergraph& g);

} // namespace eh
