#include "eh/matching.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "eh/combinatorics.hpp"

namespace eh {

FractionalMatching::FractionalMatching(const Hypergraph& g, std::vector<double> weights)
    : g_(&g), w_(std::move(weights)) {
    if (w_.size() != g.edge_count())
        throw PreconditionViolation("weight vector size does not match edge count");
    for (double w : w_)
        if (!(w >= 0.0))
            throw PreconditionViolation("matching weights must be nonnegative");
    recompute_sums();
}

FractionalMatching FractionalMatching::constant(const Hypergraph& g, double w) {
    return FractionalMatching(g, std::vector<double>(g.edge_count(), w));
}

void FractionalMatching::recompute_sums() {
    vertex_sums_.assign(static_cast<std::size_t>(g_->vertex_count()), 0.0);
    for (int v = 0; v < g_->vertex_count(); ++v) {
        double acc = 0.0;
        for (std::int32_t e : g_->incident_edges(v)) acc += w_[e];
        vertex_sums_[v] = acc;
    }
}

double FractionalMatching::total_weight() const {
    double acc = 0.0;
    for (double w : w_) acc += w;
    return acc;
}

void FractionalMatching::set_weight(std::size_t edge_id, double w) {
    double old = w_[edge_id];
    w_[edge_id] = w;
    for (std::int32_t v : g_->edge(edge_id)) vertex_sums_[v] += w - old;
}

double FractionalMatching::max_vertex_residual() const {
    double worst = 0.0;
    for (double s : vertex_sums_) worst = std::max(worst, std::abs(s - 1.0));
    return worst;
}

double entropy_bits(const FractionalMatching& x) {
    double acc = 0.0;
    for (double w : x.weights()) acc += xlog2_inv(w);
    return acc;
}

double subset_weight(const FractionalMatching& x, std::span<const int> s) {
    const Hypergraph& g = x.graph();
    const int k = g.uniformity();
    const int len = static_cast<int>(s.size());
    if (len < 0 || len > k) throw PreconditionViolation("|S| must be in [0, k]");
    if (len == 0) return x.total_weight();
    if (len == k) {
        auto id = g.find_edge(s);
        return id ? x.weight(static_cast<std::size_t>(*id)) : 0.0;
    }
    if (len == k - 1) {
        double acc = 0.0;
        for (const auto& ce : g.codegree(s)) acc += x.weight(static_cast<std::size_t>(ce.edge_id));
        return acc;
    }
    // General case: scan the incidence list of one member vertex.
    double acc = 0.0;
    for (std::int32_t e : g.incident_edges(s[0])) {
        auto ev = g.edge(static_cast<std::size_t>(e));
        bool super = true;
        for (int v : s)
            if (!std::binary_search(ev.begin(), ev.end(), v)) { super = false; break; }
        if (super) acc += x.weight(static_cast<std::size_t>(e));
    }
    return acc;
}

NormalityCert certify_normality(const FractionalMatching& x, double b) {
    if (b < 1.0) throw PreconditionViolation("normality constant b must be >= 1");
    const Hypergraph& g = x.graph();
    const double scale = std::pow(static_cast<double>(g.vertex_count()), g.uniformity() - 1);
    NormalityCert cert;
    cert.b = b;
    cert.b_star = 1.0;
    for (std::size_t e = 0; e < x.size(); ++e) {
        double w = x.weight(e);
        if (w <= 0.0) {
            cert.b_star = std::numeric_limits<double>::infinity();
            cert.witness_edge = static_cast<std::int32_t>(e);
            cert.holds = false;
            return cert;
        }
        double r = w * scale;
        double need = std::max(r, 1.0 / r);
        if (need > cert.b_star) {
            cert.b_star = need;
            cert.witness_edge = static_cast<std::int32_t>(e);
        }
    }
    cert.holds = x.size() > 0 && cert.b_star <= b;
    return cert;
}

double IdentityReport::max_residual() const {
    return std::max({res_total_weight, res_tuple_sum, res_vertex_tuple, res_entropy_identity});
}

IdentityReport verify_identities(const FractionalMatching& x, double b, double delta) {
    const Hypergraph& g = x.graph();
    const int n = g.vertex_count();
    const int k = g.uniformity();
    IdentityReport rep;

    double total = x.total_weight();
    rep.res_total_weight = std::abs(total - static_cast<double>(n) / k);

    const double y_lo = 1.0 / (b * b * n);
    const double y_hi = b * b / (delta * n);
    const double s_lo = delta / (b * std::pow(static_cast<double>(n), k - 2));
    const double s_hi = b / std::pow(static_cast<double>(n), k - 2);

    double sum_xs = 0.0;
    double sum_xs_h = 0.0;
    double sum_xs_logxs = 0.0;
    std::vector<double> per_vertex(static_cast<std::size_t>(n), 0.0);
    double tuple_slack = std::numeric_limits<double>::infinity();
    double trans_slack = std::numeric_limits<double>::infinity();

    for_each_subset(n, k - 1, [&](std::span<const int> s) {
        auto nb = g.codegree(s);
        double xs = 0.0;
        for (const auto& ce : nb) xs += x.weight(static_cast<std::size_t>(ce.edge_id));
        sum_xs += xs;
        for (int v : s) per_vertex[v] += xs;
        tuple_slack = std::min({tuple_slack, xs - s_lo, s_hi - xs});
        if (xs > 0.0) {
            double h_s = 0.0;
            for (const auto& ce : nb) {
                double y = x.weight(static_cast<std::size_t>(ce.edge_id)) / xs;
                h_s += xlog2_inv(y);
                if (y > 0.0) trans_slack = std::min({trans_slack, y - y_lo, y_hi - y});
            }
            sum_xs_h += xs * h_s;
            sum_xs_logxs += xs * log2_of(xs);
        }
    });

    rep.res_tuple_sum = std::abs(sum_xs - static_cast<double>(n));
    for (double pv : per_vertex)
        rep.res_vertex_tuple = std::max(rep.res_vertex_tuple, std::abs(pv - (k - 1)));
    rep.res_entropy_identity =
        std::abs(sum_xs_h - k * entropy_bits(x) - sum_xs_logxs);
    rep.tuple_weight_slack = tuple_slack;
    rep.tuple_weight_bounds_ok = tuple_slack >= 0.0;
    rep.transition_slack = trans_slack;
    rep.transition_bounds_ok = trans_slack >= 0.0;
    return rep;
}

double EllIdentityReport::max_residual() const {
    return std::max({res_subset_sum, res_vertex_subset, res_entropy_identity});
}

EllIdentityReport verify_identities_ell(const FractionalMatching& x, int ell,
                                        double b, double delta) {
    const Hypergraph& g = x.graph();
    const int n = g.vertex_count();
    const int k = g.uniformity();
    if (ell < 0 || ell > k - 1) throw PreconditionViolation("ell must be in [0, k-1]");
    EllIdentityReport rep;
    rep.ell = ell;

    // Group edge weights by ell-subset.
    const int bits = subset_key_bits(n, std::max(ell, 1));
    std::unordered_map<std::uint64_t, std::vector<std::int32_t>> by_subset;
    std::vector<int> sub(static_cast<std::size_t>(std::max(ell, 1)));
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        auto ev = g.edge(e);
        for_each_subset(k, ell, [&](std::span<const int> idx) {
            for (int i = 0; i < ell; ++i) sub[i] = ev[idx[i]];
            by_subset[pack_tuple(std::span<const int>(sub.data(), ell), bits)]
                .push_back(static_cast<std::int32_t>(e));
        });
    }

    double total = x.total_weight();
    double fact = 1.0;
    for (int i = 2; i <= k - ell; ++i) fact *= i;
    const double log2_fact = log2_of(fact);
    const double s_lo = delta / (std::pow(static_cast<double>(k), k) * b *
                                 std::pow(static_cast<double>(n), ell - 1));
    const double s_hi = b / std::pow(static_cast<double>(n), ell - 1);
    const double y_lo = 1.0 / (fact * b * b * std::pow(static_cast<double>(n), k - ell));
    const double y_hi = std::pow(static_cast<double>(k), k) * b * b /
                        (fact * delta * std::pow(static_cast<double>(n), k - ell));

    double sum_xs = 0.0, sum_xs_h = 0.0, sum_xs_logxs = 0.0;
    std::vector<double> per_vertex(static_cast<std::size_t>(n), 0.0);
    double sub_slack = std::numeric_limits<double>::infinity();
    double trans_slack = std::numeric_limits<double>::infinity();

    auto handle_subset = [&](std::span<const int> s, const std::vector<std::int32_t>& edges) {
        double xs = 0.0;
        for (std::int32_t e : edges) xs += x.weight(static_cast<std::size_t>(e));
        sum_xs += xs;
        for (int v : s) per_vertex[v] += xs;
        sub_slack = std::min({sub_slack, xs - s_lo, s_hi - xs});
        if (xs > 0.0) {
            double h_s = 0.0;
            for (std::int32_t e : edges) {
                double y = x.weight(static_cast<std::size_t>(e)) / xs;
                if (y > 0.0) {
                    h_s += y * (log2_fact - log2_of(y));
                    double y_dir = y / fact;
                    trans_slack = std::min({trans_slack, y_dir - y_lo, y_hi - y_dir});
                }
            }
            sum_xs_h += xs * h_s;
            sum_xs_logxs += xs * log2_of(xs);
        }
    };

    if (ell == 0) {
        handle_subset({}, [&] {
            std::vector<std::int32_t> all(g.edge_count());
            for (std::size_t e = 0; e < g.edge_count(); ++e) all[e] = static_cast<std::int32_t>(e);
            return all;
        }());
    } else {
        std::vector<int> s(static_cast<std::size_t>(ell));
        for_each_subset(n, ell, [&](std::span<const int> sv) {
            for (int i = 0; i < ell; ++i) s[i] = sv[i];
            auto it = by_subset.find(pack_tuple(std::span<const int>(s.data(), ell), bits));
            static const std::vector<std::int32_t> empty;
            handle_subset(sv, it == by_subset.end() ? empty : it->second);
        });
    }

    double choose_k_ell = static_cast<double>(binomial_i64(k, ell));
    rep.res_subset_sum =
        std::abs(sum_xs - choose_k_ell * static_cast<double>(n) / k);
    if (ell >= 1) {
        double expect = static_cast<double>(binomial_i64(k - 1, ell - 1));
        for (double pv : per_vertex)
            rep.res_vertex_subset = std::max(rep.res_vertex_subset, std::abs(pv - expect));
    }
    rep.res_entropy_identity = std::abs(
        sum_xs_h - choose_k_ell * entropy_bits(x) - choose_k_ell * total * log2_fact - sum_xs_logxs);
    rep.subset_weight_slack = sub_slack;
    rep.subset_weight_bounds_ok = sub_slack >= 0.0;
    rep.transition_slack = trans_slack;
    rep.transition_bounds_ok = trans_slack >= 0.0;
    return rep;
}

std::pair<double, double> entropy_sandwich(int n, int k, double delta) {
    double lower = (static_cast<double>(n) / k) * (log2_binomial(n, k - 1) + log2_of(delta));
    double upper = (static_cast<double>(k - 1) / k) * n * log2_of(static_cast<double>(n));
    return {lower, upper};
}

void write_matching_file(std::ostream& out, const FractionalMatching& x) {
    const Hypergraph& g = x.graph();
    char buf[64];
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        auto ev = g.edge(e);
        for (int i = 0; i < g.uniformity(); ++i) out << ev[i] << ' ';
        std::snprintf(buf, sizeof buf, "%.17g", x.weight(e));
        out << buf << '\n';
    }
}

void write_matching_file(const std::string& path, const FractionalMatching& x) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    write_matching_file(out, x);
}

FractionalMatching read_matching_file(std::istream& in, const Hypergraph& g) {
    std::vector<double> w(g.edge_count(), 0.0);
    std::string line;
    int line_no = 0;
    std::vector<int> e(static_cast<std::size_t>(g.uniformity()));
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        std::istringstream ss(line);
        for (int i = 0; i < g.uniformity(); ++i)
            if (!(ss >> e[i]))
                throw ParseError("line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(g.uniformity()) + " vertex ids");
        double weight;
        if (!(ss >> weight))
            throw ParseError("line " + std::to_string(line_no) + ": missing weight");
        std::sort(e.begin(), e.end());
        auto id = g.find_edge(e);
        if (!id)
            throw ParseError("line " + std::to_string(line_no) + ": not an edge of the graph");
        w[static_cast<std::size_t>(*id)] = weight;
    }
    return FractionalMatching(g, std::move(w));
}

FractionalMatching read_matching_file(const std::string& path, const Hypergraph& g) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return read_matching_file(in, g);
}

} // namespace eh
