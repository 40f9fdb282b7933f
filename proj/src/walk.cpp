#include "eh/walk.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "eh/combinatorics.hpp"
#include "eh/rng.hpp"

namespace eh {

std::string WalkRecord::to_json_line() const {
    std::ostringstream os;
    os << "{\"seed\":" << seed << ",\"ell\":" << ell << ",\"start\":[";
    for (std::size_t i = 0; i < start_state.size(); ++i)
        os << (i ? "," : "") << start_state[i];
    os << "],\"vertices\":[";
    for (std::size_t i = 0; i < vertex_sequence.size(); ++i)
        os << (i ? "," : "") << vertex_sequence[i];
    os << "],\"self_avoiding\":" << (self_avoiding ? "true" : "false") << "}";
    return os.str();
}

WalkRecord sample_walk(const AuxChain& chain, std::size_t start, int m, std::uint64_t seed) {
    if (start >= chain.state_count()) throw PreconditionViolation("start state out of range");
    if (m < 0) throw PreconditionViolation("m must be >= 0");
    const int k = chain.graph().uniformity();

    WalkRecord rec;
    rec.ell = chain.mode() == ChainMode::Tuple ? k - 1 : chain.ell();
    rec.seed = seed;
    rec.length_steps = m;
    auto st = chain.state(start);
    rec.start_state.assign(st.begin(), st.end());
    rec.vertex_sequence.assign(st.begin(), st.end());

    SplitMix64 rng(seed);
    std::vector<AuxChain::Transition> row;
    std::size_t cur = start;
    const int appended = chain.mode() == ChainMode::Tuple ? 1 : k - rec.ell;
    for (int step = 0; step < m; ++step) {
        chain.row(cur, row);
        if (row.empty()) throw ZeroSupport("walk reached a state with no outgoing transitions");
        double u = rng.uniform01();
        double acc = 0.0;
        std::size_t pick = row.size() - 1;
        for (std::size_t i = 0; i < row.size(); ++i) {
            acc += row[i].prob;
            if (u < acc) { pick = i; break; }
        }
        cur = static_cast<std::size_t>(row[pick].target);
        auto ts = chain.state(cur);
        rec.vertex_sequence.insert(rec.vertex_sequence.end(),
                                   ts.end() - appended, ts.end());
    }

    std::unordered_set<int> seen(rec.vertex_sequence.begin(), rec.vertex_sequence.end());
    rec.self_avoiding = seen.size() == rec.vertex_sequence.size();
    return rec;
}

double tuple_entropy(const FractionalMatching& x, std::span<const int> s) {
    const Hypergraph& g = x.graph();
    const int k = g.uniformity();
    const int ell = static_cast<int>(s.size());
    if (ell < 0 || ell > k - 1) throw PreconditionViolation("|S| must be in [0, k-1]");
    double fact = 1.0;
    for (int i = 2; i <= k - ell; ++i) fact *= i;
    const double log2_fact = log2_of(fact);

    double xs, h = 0.0;
    if (ell == k - 1) {
        auto nb = g.codegree(s);
        xs = 0.0;
        for (const auto& ce : nb) xs += x.weight(static_cast<std::size_t>(ce.edge_id));
        if (xs <= 0.0) throw ZeroSupport("x_S = 0: tuple entropy undefined");
        for (const auto& ce : nb)
            h += xlog2_inv(x.weight(static_cast<std::size_t>(ce.edge_id)) / xs);
    } else {
        xs = subset_weight(x, s);
        if (xs <= 0.0) throw ZeroSupport("x_S = 0: tuple entropy undefined");
        auto accumulate = [&](std::size_t e) {
            auto ev = g.edge(e);
            for (int v : s)
                if (!std::binary_search(ev.begin(), ev.end(), v)) return;
            double y = x.weight(e) / xs;
            if (y > 0.0) h += y * (log2_fact - log2_of(y));
        };
        if (ell == 0) {
            for (std::size_t e = 0; e < g.edge_count(); ++e) accumulate(e);
        } else {
            for (std::int32_t e : g.incident_edges(s[0])) accumulate(static_cast<std::size_t>(e));
        }
    }
    return h;
}

WellBehavedReport well_behaved_check(const FractionalMatching& x,
                                     std::span<const int> m_set, double alpha) {
    const Hypergraph& g = x.graph();
    const int n = g.vertex_count();
    const int k = g.uniformity();
    if (!(alpha > 0.0 && alpha < 1.0 / 3.0))
        throw PreconditionViolation("alpha must be in (0, 1/3)");

    std::vector<char> in_m(static_cast<std::size_t>(n), 0);
    for (int v : m_set) {
        if (v < 0 || v >= n) throw VertexOutOfRange("M contains vertex " + std::to_string(v));
        in_m[v] = 1;
    }
    std::size_t m_size = 0;
    for (char c : in_m) m_size += c;

    const double frac = static_cast<double>(m_size) / n;
    const double thr_count = std::pow(static_cast<double>(n), 1.0 / 3.0 - alpha);
    const double thr_fine = std::pow(static_cast<double>(n), -2.0 / 3.0 - alpha);

    WellBehavedReport rep;
    rep.alpha = alpha;
    rep.set_size = m_size;
    rep.slack_count = std::numeric_limits<double>::infinity();
    rep.slack_weight = std::numeric_limits<double>::infinity();
    rep.slack_entropy = std::numeric_limits<double>::infinity();

    for_each_subset(n, k - 1, [&](std::span<const int> s) {
        auto nb = g.codegree(s);
        double xs = 0.0;
        for (const auto& ce : nb) xs += x.weight(static_cast<std::size_t>(ce.edge_id));

        std::int64_t hits = 0;
        double ysum = 0.0, hsum = 0.0, h_s = 0.0;
        for (const auto& ce : nb) {
            double y = xs > 0.0 ? x.weight(static_cast<std::size_t>(ce.edge_id)) / xs : 0.0;
            double contrib = xlog2_inv(y);
            h_s += contrib;
            if (in_m[ce.vertex]) {
                ++hits;
                ysum += y;
                hsum += contrib;
            }
        }
        double dev_count = std::abs(static_cast<double>(hits) -
                                    frac * static_cast<double>(nb.size()));
        double dev_weight = std::abs(ysum - frac);
        double dev_entropy = std::abs(hsum - frac * h_s);
        rep.slack_count = std::min(rep.slack_count, thr_count - dev_count);
        rep.slack_weight = std::min(rep.slack_weight, thr_fine - dev_weight);
        rep.slack_entropy = std::min(rep.slack_entropy, thr_fine - dev_entropy);
        if (dev_count >= thr_count) ++rep.fail_count;
        if (dev_weight >= thr_fine) ++rep.fail_weight;
        if (dev_entropy >= thr_fine) ++rep.fail_entropy;
    });

    rep.pass = rep.slack_count > 0.0 && rep.slack_weight > 0.0 && rep.slack_entropy > 0.0;
    return rep;
}

namespace {

std::vector<int> walk_prefix_set(const WalkRecord& w, int k) {
    int stride = k - w.ell;
    std::size_t take = std::min(w.vertex_sequence.size(),
                                static_cast<std::size_t>(w.length_steps) * stride);
    return {w.vertex_sequence.begin(),
            w.vertex_sequence.begin() + static_cast<std::ptrdiff_t>(take)};
}

} // namespace

WellBehavedReport well_behaved_walk_report(const FractionalMatching& x,
                                           const WalkRecord& w, double alpha) {
    return well_behaved_check(x, walk_prefix_set(w, x.graph().uniformity()), alpha);
}

bool is_well_behaved_walk(const FractionalMatching& x, const WalkRecord& w, double alpha) {
    if (!w.self_avoiding) return false;
    return well_behaved_walk_report(x, w, alpha).pass;
}

WalkEntropy walk_entropy_exact(const AuxChain& chain, std::size_t start, int m,
                               std::int64_t max_trajectories) {
    if (m < 0) throw PreconditionViolation("m must be >= 0");
    WalkEntropy we;

    // Chain rule: H(Z) = sum_i sum_s P[Z_{i-1}=s] * H(row at s).
    {
        std::vector<double> dist = chain.exact_distribution(start, 0);
        std::vector<double> row_h(chain.state_count(),
                                  std::numeric_limits<double>::quiet_NaN());
        std::vector<AuxChain::Transition> row;
        double h = 0.0;
        std::vector<double> next;
        for (int i = 0; i < m; ++i) {
            next.assign(chain.state_count(), 0.0);
            for (std::size_t s = 0; s < chain.state_count(); ++s) {
                if (dist[s] == 0.0) continue;
                if (std::isnan(row_h[s])) row_h[s] = chain.row_entropy_bits(s);
                h += dist[s] * row_h[s];
                chain.row(s, row);
                for (const auto& t : row) next[t.target] += dist[s] * t.prob;
            }
            dist.swap(next);
        }
        we.chain_rule_bits = h;
    }

    // Direct enumeration over all length-m trajectories when it fits.
    {
        std::int64_t count = 0;
        double h = 0.0;
        bool overflow = false;
        std::vector<AuxChain::Transition> row;
        auto dfs = [&](auto&& self, std::size_t s, int depth, double p) -> void {
            if (overflow) return;
            if (depth == m) {
                ++count;
                if (count > max_trajectories) { overflow = true; return; }
                h += xlog2_inv(p);
                return;
            }
            chain.row(s, row);
            std::vector<AuxChain::Transition> local = row;
            for (const auto& t : local)
                self(self, static_cast<std::size_t>(t.target), depth + 1, p * t.prob);
        };
        dfs(dfs, start, 0, 1.0);
        if (!overflow) we.direct_bits = h;
    }
    return we;
}

double shannon_entropy(std::span<const double> dist) {
    double total = 0.0;
    for (double p : dist) {
        if (p < 0.0) throw NotADistribution("negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw NotADistribution("probabilities sum to " + std::to_string(total));
    double h = 0.0;
    for (double p : dist) h += xlog2_inv(p);
    return h;
}

bool walk_windows_valid(const Hypergraph& g, std::span<const int> seq, int ell) {
    const int k = g.uniformity();
    const int stride = k - ell;
    if (static_cast<int>(seq.size()) < k) return true;
    std::vector<int> window(static_cast<std::size_t>(k));
    for (std::size_t off = 0; off + k <= seq.size();
         off += static_cast<std::size_t>(stride)) {
        window.assign(seq.begin() + static_cast<std::ptrdiff_t>(off),
                      seq.begin() + static_cast<std::ptrdiff_t>(off) + k);
        std::sort(window.begin(), window.end());
        if (!g.has_edge(window)) return false;
    }
    return true;
}

} // namespace eh
