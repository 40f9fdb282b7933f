#include "eh/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace eh {

namespace {

// All exponentials go through the edge scores s_e = sum_{v in e} lambda_v - 1,
// so the working state is the potential vector; weights are materialized from
// it on demand.
struct Workspace {
    const Hypergraph& g;
    std::vector<double> lambda;
    std::vector<double> score;   // s_e
    std::vector<double> weight;  // exp(s_e)
    std::vector<double> vsum;    // per-vertex total

    explicit Workspace(const Hypergraph& graph) : g(graph) {
        const int n = g.vertex_count();
        const int k = g.uniformity();
        double w0 = (static_cast<double>(n) / k) / static_cast<double>(g.edge_count());
        lambda.assign(static_cast<std::size_t>(n), (1.0 + std::log(w0)) / k);
        score.resize(g.edge_count());
        weight.resize(g.edge_count());
        vsum.resize(static_cast<std::size_t>(n));
        refresh();
    }

    void refresh() {
        const int k = g.uniformity();
        for (std::size_t e = 0; e < g.edge_count(); ++e) {
            auto ev = g.edge(e);
            double s = -1.0;
            for (int i = 0; i < k; ++i) s += lambda[ev[i]];
            score[e] = s;
            weight[e] = std::exp(s);
        }
        for (int v = 0; v < g.vertex_count(); ++v) {
            double acc = 0.0;
            for (std::int32_t e : g.incident_edges(v)) acc += weight[e];
            vsum[v] = acc;
        }
    }

    double residual() const {
        double worst = 0.0;
        for (double s : vsum) worst = std::max(worst, std::abs(s - 1.0));
        return worst;
    }

    // Dual objective g(lambda) = sum_e exp(s_e) - sum_v lambda_v.
    double objective() const {
        double acc = 0.0;
        for (double w : weight) acc += w;
        for (double l : lambda) acc -= l;
        return acc;
    }

    double lambda_inf() const {
        double worst = 0.0;
        for (double l : lambda) worst = std::max(worst, std::abs(l));
        return worst;
    }

    // Exact coordinate update lambda_v -= ln(vsum_v), applied once per vertex
    // with scores kept in sync. Log-sum-exp keeps the update finite even when
    // scores are far from equilibrium.
    void sinkhorn_round() {
        for (int v = 0; v < g.vertex_count(); ++v) {
            auto inc = g.incident_edges(v);
            if (inc.empty()) continue;
            double mx = -std::numeric_limits<double>::infinity();
            for (std::int32_t e : inc) mx = std::max(mx, score[e]);
            double acc = 0.0;
            for (std::int32_t e : inc) acc += std::exp(score[e] - mx);
            double log_sum = mx + std::log(acc);
            lambda[v] -= log_sum;
            for (std::int32_t e : inc) score[e] -= log_sum;
        }
        for (std::size_t e = 0; e < g.edge_count(); ++e) weight[e] = std::exp(score[e]);
        for (int v = 0; v < g.vertex_count(); ++v) {
            double acc = 0.0;
            for (std::int32_t e : g.incident_edges(v)) acc += weight[e];
            vsum[v] = acc;
        }
    }
};

} // namespace

std::pair<FractionalMatching, DualPotentials>
max_entropy_pfm(const Hypergraph& g, const SolveOptions& opts) {
    if (g.edge_count() == 0) throw Infeasible("graph has no edges");
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.incident_edges(v).empty())
            throw Infeasible("vertex " + std::to_string(v) +
                             " is isolated; no perfect fractional matching exists");

    const int n = g.vertex_count();
    const int k = g.uniformity();
    const double lambda_bound =
        opts.divergence_factor * k * std::log(static_cast<double>(std::max(n, 3)));

    Workspace ws(g);
    DualPotentials dual;

    Eigen::MatrixXd hess(n, n);
    Eigen::VectorXd grad(n), step(n);

    double best_res = std::numeric_limits<double>::infinity();
    int since_improved = 0;

    for (dual.iterations = 0; dual.iterations < opts.max_iters; ++dual.iterations) {
        double res = ws.residual();
        if (res <= opts.tol) break;
        if (res < best_res * (1.0 - 1e-3)) {
            best_res = res;
            since_improved = 0;
        } else {
            ++since_improved;
        }
        if (ws.lambda_inf() > lambda_bound && since_improved > 50)
            throw Infeasible(
                "dual potentials diverged past the configured bound with a stalled "
                "residual (heuristic infeasibility detection); residual=" +
                std::to_string(res));

        // Warm up with coordinate rounds while far from equilibrium; Newton
        // takes over for the quadratic phase.
        if (res > 1e-2) {
            ws.sinkhorn_round();
            ++dual.sinkhorn_rounds;
            continue;
        }

        hess.setZero();
        for (int v = 0; v < n; ++v) grad(v) = ws.vsum[v] - 1.0;
        for (std::size_t e = 0; e < g.edge_count(); ++e) {
            auto ev = g.edge(e);
            double w = ws.weight[e];
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) hess(ev[i], ev[j]) += w;
        }
        double ridge = 1e-14 * std::max(1.0, hess.trace() / n);
        for (int v = 0; v < n; ++v) hess(v, v) += ridge;
        step = hess.ldlt().solve(-grad);

        double g0 = ws.objective();
        std::vector<double> saved = ws.lambda;
        double t = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 40; ++bt) {
            for (int v = 0; v < n; ++v) ws.lambda[v] = saved[v] + t * step(v);
            ws.refresh();
            double g1 = ws.objective();
            // Near the optimum the objective decrease drops below rounding
            // noise, so a residual contraction also accepts the step.
            bool armijo = g1 <= g0 - 1e-4 * t * std::abs(grad.dot(step));
            bool contraction = ws.residual() <= 0.9 * res;
            if (std::isfinite(g1) && (armijo || contraction)) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (accepted) {
            ++dual.newton_steps;
        } else {
            ws.lambda = saved;
            ws.refresh();
            ws.sinkhorn_round();
            ++dual.sinkhorn_rounds;
        }
    }

    double res = ws.residual();
    if (res > opts.tol)
        throw NotConverged("residual " + std::to_string(res) + " above tol after " +
                           std::to_string(opts.max_iters) + " iterations");

    dual.lambda = ws.lambda;
    dual.residual_norm = res;
    return {FractionalMatching(g, std::move(ws.weight)), std::move(dual)};
}

} // namespace eh
