#include "eh/surgery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eh/combinatorics.hpp"
#include "eh/walk.hpp"

namespace eh {

ScaleRestrictResult scale_restrict(const FractionalMatching& x, std::span<const int> removed) {
    const Hypergraph& g = x.graph();
    if (static_cast<std::size_t>(g.vertex_count()) <
        removed.size() + static_cast<std::size_t>(g.uniformity()))
        throw NoSurvivingEdges("fewer than k vertices would remain");
    RemovalResult rem = remove_vertices(g, removed);
    const Hypergraph& gr = rem.graph;
    if (gr.edge_count() == 0) throw NoSurvivingEdges("no edges survive the removal");

    // Surviving weight, looked up edge by edge through the vertex maps.
    std::vector<double> w(gr.edge_count(), 0.0);
    std::vector<int> orig(static_cast<std::size_t>(g.uniformity()));
    double surviving = 0.0;
    for (std::size_t e = 0; e < gr.edge_count(); ++e) {
        auto ev = gr.edge(e);
        for (int i = 0; i < gr.uniformity(); ++i) orig[i] = rem.new_to_old[ev[i]];
        std::sort(orig.begin(), orig.end());
        auto id = g.find_edge(orig);
        w[e] = id ? x.weight(static_cast<std::size_t>(*id)) : 0.0;
        surviving += w[e];
    }
    if (surviving <= 0.0) throw NoSurvivingEdges("surviving edges all have zero weight");

    double lambda =
        (static_cast<double>(gr.vertex_count()) / gr.uniformity()) / surviving;
    for (double& we : w) we *= lambda;

    ScaleRestrictResult out{std::move(rem.graph), std::move(rem.old_to_new),
                            std::move(rem.new_to_old), std::move(w), lambda};
    return out;
}

std::pair<FractionalMatching, NormalizationStats>
normalization_procedure(const Hypergraph& g, FractionalMatching x, double tol) {
    if (tol <= 0.0) throw PreconditionViolation("tol must be positive");
    const int n = g.vertex_count();
    const double nk1 = std::pow(static_cast<double>(n), g.uniformity() - 1);

    NormalizationStats stats;
    double weight_before = x.total_weight();
    stats.max_deviation_in = x.max_vertex_residual();
    stats.entropy_loss_margin = std::numeric_limits<double>::infinity();

    double total_dev = 0.0;
    for (int v = 0; v < n; ++v) total_dev += std::abs(x.vertex_sum(v) - 1.0);
    int stall_window = 10 * n;
    double stall_ref = total_dev;
    int rounds_since_check = 0;
    bool clamped_in_window = false;

    while (true) {
        int v_hi = -1, v_lo = -1;
        double dev_hi = tol, dev_lo = tol;
        for (int v = 0; v < n; ++v) {
            double d = x.vertex_sum(v) - 1.0;
            if (d > dev_hi) { dev_hi = d; v_hi = v; }
            if (-d > dev_lo) { dev_lo = -d; v_lo = v; }
        }
        if (v_hi < 0 && v_lo < 0) break;
        if (v_hi < 0 || v_lo < 0) {
            // One-sided imbalance: the total weight does not match n/k, which
            // shifts cannot repair. Treat as a stall.
            throw NegativeWeight("imbalance is one-sided (total weight mismatch); "
                                 "weight shifts cannot restore vertex sums");
        }

        // Common co-neighbourhood of the pair: (k-1)-sets S with both
        // S+{v_hi} and S+{v_lo} edges.
        std::vector<std::pair<std::int32_t, std::int32_t>> gamma;  // (edge at hi, edge at lo)
        std::vector<int> s(static_cast<std::size_t>(g.uniformity() - 1));
        for (std::int32_t e : g.incident_edges(v_hi)) {
            auto ev = g.edge(static_cast<std::size_t>(e));
            bool has_lo = false;
            int t = 0;
            for (int u : ev) {
                if (u == v_lo) has_lo = true;
                if (u != v_hi) s[t++] = u;
            }
            if (has_lo) continue;  // S would contain v_lo
            std::int32_t other;
            if (g.completes_edge(std::span<const int>(s.data(), s.size()), v_lo, &other))
                gamma.emplace_back(e, other);
        }
        if (gamma.empty())
            throw NoCommonNeighbors("vertices " + std::to_string(v_hi) + " and " +
                                    std::to_string(v_lo) + " share no co-neighbourhood");

        double d = std::min(dev_hi, dev_lo);
        double per_edge = d / static_cast<double>(gamma.size());
        // Clamp to keep weights nonnegative.
        double min_w = std::numeric_limits<double>::infinity();
        for (auto [ehi, elo] : gamma) min_w = std::min(min_w, x.weight(ehi));
        bool clamped = false;
        if (per_edge > min_w) {
            per_edge = min_w;
            d = per_edge * static_cast<double>(gamma.size());
            clamped = true;
        }
        if (clamped) clamped_in_window = true;
        if (d <= 0.0)
            throw NegativeWeight("shift stalled: a required donor edge already has weight 0");

        double h_before = entropy_bits(x);
        double b_round = 1.0;
        for (auto [ehi, elo] : gamma) {
            double w_hi = x.weight(ehi), w_lo = x.weight(elo);
            for (double w : {w_hi, w_lo})
                if (w > 0.0) b_round = std::max({b_round, w * nk1, 1.0 / (w * nk1)});
            x.set_weight(ehi, w_hi - per_edge);
            x.set_weight(elo, w_lo + per_edge);
        }
        ++stats.shift_count;
        double h_after = entropy_bits(x);
        double loss_bound = 4.0 * d * std::max(1.0, log2_of(b_round)) + 1e-12;
        stats.entropy_loss_margin =
            std::min(stats.entropy_loss_margin, loss_bound - (h_before - h_after));

        // Progress guard: the total deviation must keep shrinking.
        if (++rounds_since_check >= stall_window) {
            double td = 0.0;
            for (int v = 0; v < n; ++v) td += std::abs(x.vertex_sum(v) - 1.0);
            if (td > 0.5 * stall_ref && clamped_in_window)
                throw NegativeWeight("normalization stalled against zero weights");
            if (td > stall_ref)
                throw NegativeWeight("normalization failed to make progress");
            stall_ref = td;
            rounds_since_check = 0;
            clamped_in_window = false;
        }
    }

    x.recompute_sums();
    stats.total_weight_drift = std::abs(x.total_weight() - weight_before);
    return {std::move(x), stats};
}

RepairResult remove_and_repair(const FractionalMatching& x, std::span<const int> removed,
                               double alpha, double tol) {
    const Hypergraph& g = x.graph();
    const int n = g.vertex_count();
    const int k = g.uniformity();

    SurgeryReport rep;
    rep.entropy_in = entropy_bits(x);
    rep.b_star_in = certify_normality(x, 1.0).b_star;

    rep.hypotheses_well_behaved =
        !removed.empty() && well_behaved_check(x, removed, alpha).pass;
    double log2n = log2_of(static_cast<double>(n));
    rep.hypotheses_small_set =
        static_cast<double>(removed.size()) <= static_cast<double>(n) / (log2n * log2n);
    rep.floor_asserted = rep.hypotheses_well_behaved || rep.hypotheses_small_set;

    ScaleRestrictResult sr = scale_restrict(x, removed);
    rep.lambda = sr.lambda;

    auto reduced = std::make_unique<Hypergraph>(std::move(sr.reduced));
    FractionalMatching scaled(*reduced, std::move(sr.weights));
    auto [z, stats] = normalization_procedure(*reduced, std::move(scaled), tol);
    rep.shift_count = stats.shift_count;
    rep.max_deviation = stats.max_deviation_in;
    rep.entropy_loss_margin = stats.entropy_loss_margin;
    rep.entropy_out = entropy_bits(z);
    rep.b_star_out = certify_normality(z, 1.0).b_star;

    const double np = static_cast<double>(reduced->vertex_count());
    rep.b_star_predicted =
        (1.0 + std::pow(static_cast<double>(n), -2.0 / 3.0 - alpha / 2.0)) * rep.b_star_in;
    rep.entropy_floor =
        (np / n) * rep.entropy_in -
        (static_cast<double>(k - 1) / k) * np * log2_of(static_cast<double>(n) / np) -
        std::pow(static_cast<double>(n), 1.0 / 3.0 - alpha / 2.0);

    RepairResult out{std::move(reduced), std::move(sr.old_to_new),
                     std::move(sr.new_to_old), std::move(z), rep};
    return out;
}

} // namespace eh
