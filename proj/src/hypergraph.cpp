#include "eh/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "eh/combinatorics.hpp"
#include "eh/rng.hpp"

namespace eh {

namespace {

// Lexicographic comparison of two flat k-edges.
struct EdgeLess {
    const std::int32_t* flat;
    int k;
    bool operator()(std::size_t a, std::size_t b) const {
        const std::int32_t* ea = flat + a * k;
        const std::int32_t* eb = flat + b * k;
        return std::lexicographical_compare(ea, ea + k, eb, eb + k);
    }
};

} // namespace

Hypergraph Hypergraph::build(int n, int k, const std::vector<std::vector<int>>& edge_list) {
    if (k < 2) throw PreconditionViolation("uniformity k must be >= 2");
    if (n < k) throw PreconditionViolation("need n >= k");

    Hypergraph g;
    g.n_ = n;
    g.k_ = k;
    g.key_bits_ = subset_key_bits(n, k);  // k >= k-1, one width covers both uses

    std::vector<std::int32_t> flat;
    flat.reserve(edge_list.size() * static_cast<std::size_t>(k));
    std::vector<int> scratch;
    for (const auto& e : edge_list) {
        if (static_cast<int>(e.size()) != k)
            throw EdgeArityMismatch("edge of size " + std::to_string(e.size()) +
                                    " in a " + std::to_string(k) + "-uniform graph");
        scratch.assign(e.begin(), e.end());
        std::sort(scratch.begin(), scratch.end());
        for (std::size_t i = 0; i < scratch.size(); ++i) {
            int v = scratch[i];
            if (v < 0 || v >= n)
                throw VertexOutOfRange("vertex " + std::to_string(v) + " not in [0, " +
                                       std::to_string(n) + ")");
            if (i > 0 && scratch[i] == scratch[i - 1])
                throw EdgeArityMismatch("edge has a repeated vertex " + std::to_string(v));
        }
        flat.insert(flat.end(), scratch.begin(), scratch.end());
    }

    // Canonical order + dedup via an index sort over the flat storage.
    std::size_t m = edge_list.size();
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), EdgeLess{flat.data(), k});

    g.edge_flat_.reserve(flat.size());
    for (std::size_t idx : order) {
        const std::int32_t* e = flat.data() + idx * static_cast<std::size_t>(k);
        if (!g.edge_flat_.empty() &&
            std::equal(e, e + k, g.edge_flat_.end() - k, g.edge_flat_.end()))
            continue;
        g.edge_flat_.insert(g.edge_flat_.end(), e, e + k);
    }
    g.edge_count_ = g.edge_flat_.size() / static_cast<std::size_t>(k);
    g.build_indices();
    return g;
}

void Hypergraph::build_indices() {
    const int k = k_;
    const std::size_t m = edge_count_;

    // Per-vertex incidence (CSR).
    incidence_off_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (std::size_t e = 0; e < m; ++e)
        for (int j = 0; j < k; ++j) ++incidence_off_[edge_flat_[e * k + j] + 1];
    for (std::size_t v = 0; v < static_cast<std::size_t>(n_); ++v)
        incidence_off_[v + 1] += incidence_off_[v];
    incidence_.resize(m * static_cast<std::size_t>(k));
    {
        std::vector<std::int64_t> cursor(incidence_off_.begin(), incidence_off_.end() - 1);
        for (std::size_t e = 0; e < m; ++e)
            for (int j = 0; j < k; ++j)
                incidence_[cursor[edge_flat_[e * k + j]]++] = static_cast<std::int32_t>(e);
    }

    // Codegree index: for each edge and each of its (k-1)-sub-subsets,
    // record (missing vertex, edge id) grouped by subset key.
    std::unordered_map<std::uint64_t, std::int32_t> counts;
    counts.reserve(m * static_cast<std::size_t>(k) / 2 + 1);
    std::vector<int> tuple(static_cast<std::size_t>(k - 1));
    auto key_of_sub = [&](std::size_t e, int skip) {
        int t = 0;
        for (int j = 0; j < k; ++j)
            if (j != skip) tuple[t++] = edge_flat_[e * k + j];
        return pack_tuple(std::span<const int>(tuple), key_bits_);
    };
    for (std::size_t e = 0; e < m; ++e)
        for (int skip = 0; skip < k; ++skip) ++counts[key_of_sub(e, skip)];

    codegree_index_.reserve(counts.size());
    std::int64_t offset = 0;
    for (auto& [key, cnt] : counts) {
        codegree_index_.emplace(key, std::make_pair(offset, cnt));
        offset += cnt;
    }
    codegree_entries_.resize(static_cast<std::size_t>(offset));
    {
        std::unordered_map<std::uint64_t, std::int64_t> cursor;
        cursor.reserve(counts.size());
        for (const auto& [key, span] : codegree_index_) cursor[key] = span.first;
        for (std::size_t e = 0; e < m; ++e)
            for (int skip = 0; skip < k; ++skip) {
                std::uint64_t key = key_of_sub(e, skip);
                codegree_entries_[cursor[key]++] = {edge_flat_[e * k + skip],
                                                    static_cast<std::int32_t>(e)};
            }
    }
    // Deterministic neighbour order within each bucket.
    for (const auto& [key, span] : codegree_index_) {
        auto* begin = codegree_entries_.data() + span.first;
        std::sort(begin, begin + span.second,
                  [](const CodegreeEntry& a, const CodegreeEntry& b) { return a.vertex < b.vertex; });
    }
}

std::optional<std::int32_t> Hypergraph::find_edge(std::span<const int> sorted_edge) const {
    if (static_cast<int>(sorted_edge.size()) != k_) return std::nullopt;
    // Binary search over the lexicographically sorted flat edges.
    std::size_t lo = 0, hi = edge_count_;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        const std::int32_t* e = edge_flat_.data() + mid * k_;
        bool less = std::lexicographical_compare(e, e + k_, sorted_edge.begin(), sorted_edge.end());
        if (less)
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo < edge_count_) {
        const std::int32_t* e = edge_flat_.data() + lo * k_;
        if (std::equal(e, e + k_, sorted_edge.begin(), sorted_edge.end()))
            return static_cast<std::int32_t>(lo);
    }
    return std::nullopt;
}

std::span<const std::int32_t> Hypergraph::incident_edges(int v) const {
    return {incidence_.data() + incidence_off_[v],
            static_cast<std::size_t>(incidence_off_[v + 1] - incidence_off_[v])};
}

std::span<const CodegreeEntry> Hypergraph::codegree(std::span<const int> sorted_tuple) const {
    auto it = codegree_index_.find(pack_tuple(sorted_tuple, key_bits_));
    if (it == codegree_index_.end()) return {};
    return {codegree_entries_.data() + it->second.first,
            static_cast<std::size_t>(it->second.second)};
}

bool Hypergraph::completes_edge(std::span<const int> sorted_tuple, int v,
                                std::int32_t* edge_id) const {
    auto nb = codegree(sorted_tuple);
    auto it = std::lower_bound(nb.begin(), nb.end(), v,
                               [](const CodegreeEntry& e, int x) { return e.vertex < x; });
    if (it == nb.end() || it->vertex != v) return false;
    if (edge_id) *edge_id = it->edge_id;
    return true;
}

std::int64_t Hypergraph::min_d_degree(int d) const {
    if (d < 0 || d > k_ - 1) throw PreconditionViolation("d must be in [0, k-1]");
    if (d == 0) return static_cast<std::int64_t>(edge_count_);

    // Count edges over each occupied d-subset, then compare against the
    // number of all d-subsets: any unoccupied subset has degree 0.
    std::unordered_map<std::uint64_t, std::int64_t> deg;
    std::vector<int> sub(static_cast<std::size_t>(d));
    std::vector<int> idx(static_cast<std::size_t>(d));
    for (std::size_t e = 0; e < edge_count_; ++e) {
        const std::int32_t* ev = edge_flat_.data() + e * k_;
        for (int i = 0; i < d; ++i) idx[i] = i;
        while (true) {
            for (int i = 0; i < d; ++i) sub[i] = ev[idx[i]];
            ++deg[pack_tuple(std::span<const int>(sub), key_bits_)];
            int i = d - 1;
            while (i >= 0 && idx[i] == k_ - d + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < d; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    double total_subsets = 1.0;
    for (int i = 0; i < d; ++i)
        total_subsets *= static_cast<double>(n_ - i) / static_cast<double>(i + 1);
    if (static_cast<double>(deg.size()) + 0.5 < total_subsets) return 0;
    std::int64_t best = static_cast<std::int64_t>(edge_count_);
    for (const auto& [key, cnt] : deg) best = std::min(best, cnt);
    return best;
}

std::vector<double> Hypergraph::degree_monotonicity_profile() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(k_));
    for (int d = 0; d < k_; ++d) {
        double denom = 1.0;
        for (int i = 0; i < k_ - d; ++i)
            denom *= static_cast<double>(n_ - d - i) / static_cast<double>(i + 1);
        out.push_back(static_cast<double>(min_d_degree(d)) / denom);
    }
    return out;
}

bool Hypergraph::is_dirac(const DiracParams& p) const {
    return static_cast<double>(min_d_degree(k_ - 1)) >= p.delta * static_cast<double>(n_);
}

double Hypergraph::dirac_ratio() const {
    return static_cast<double>(min_d_degree(k_ - 1)) / static_cast<double>(n_);
}

RemovalResult remove_vertices(const Hypergraph& g, std::span<const int> removed) {
    std::vector<char> gone(static_cast<std::size_t>(g.vertex_count()), 0);
    for (int v : removed) {
        if (v < 0 || v >= g.vertex_count())
            throw VertexOutOfRange("removal vertex " + std::to_string(v) + " out of range");
        gone[v] = 1;
    }
    RemovalResult r;
    r.old_to_new.assign(static_cast<std::size_t>(g.vertex_count()), -1);
    for (int v = 0; v < g.vertex_count(); ++v)
        if (!gone[v]) {
            r.old_to_new[v] = static_cast<int>(r.new_to_old.size());
            r.new_to_old.push_back(v);
        }
    int n_new = static_cast<int>(r.new_to_old.size());
    if (n_new < g.uniformity())
        throw PreconditionViolation("fewer than k vertices would remain");

    std::vector<std::vector<int>> edges;
    std::vector<int> mapped(static_cast<std::size_t>(g.uniformity()));
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        auto ev = g.edge(e);
        bool keep = true;
        for (int i = 0; i < g.uniformity(); ++i) {
            if (gone[ev[i]]) { keep = false; break; }
            mapped[i] = r.old_to_new[ev[i]];
        }
        if (keep) edges.emplace_back(mapped.begin(), mapped.end());
    }
    r.graph = Hypergraph::build(n_new, g.uniformity(), edges);
    return r;
}

Hypergraph complete_hypergraph(int n, int k) {
    std::vector<std::vector<int>> edges;
    for_each_subset(n, k, [&](std::span<const int> s) {
        edges.emplace_back(s.begin(), s.end());
    });
    return Hypergraph::build(n, k, edges);
}

Hypergraph binomial_hypergraph(int n, int k, double p, std::uint64_t seed) {
    if (p < 0.0 || p > 1.0) throw PreconditionViolation("p must be in [0, 1]");
    SplitMix64 rng(seed);
    std::vector<std::vector<int>> edges;
    for_each_subset(n, k, [&](std::span<const int> s) {
        if (rng.uniform01() < p) edges.emplace_back(s.begin(), s.end());
    });
    return Hypergraph::build(n, k, edges);
}

Hypergraph dirac_rejection_hypergraph(int n, int k, double delta, double p,
                                      std::uint64_t seed, int max_tries) {
    DiracParams params = DiracParams::from_delta(delta);
    for (int t = 0; t < max_tries; ++t) {
        Hypergraph g = binomial_hypergraph(n, k, p, derive_seed(seed, static_cast<std::uint64_t>(t)));
        if (g.is_dirac(params)) return g;
    }
    throw GenerationExhausted("no delta-Dirac binomial sample within " +
                              std::to_string(max_tries) + " tries (n=" + std::to_string(n) +
                              ", p=" + std::to_string(p) + ", delta=" + std::to_string(delta) + ")");
}

Hypergraph read_edge_file(std::istream& in, int* duplicate_count) {
    std::string line;
    int line_no = 0;
    int n = -1, k = -1;
    std::vector<std::vector<int>> edges;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        std::istringstream ss(line);
        if (n < 0) {
            if (!(ss >> n >> k) || n < 1 || k < 2)
                throw ParseError("line " + std::to_string(line_no) + ": expected header \"n k\"");
            std::string rest;
            if (ss >> rest)
                throw ParseError("line " + std::to_string(line_no) + ": trailing tokens after header");
            continue;
        }
        std::vector<int> e;
        int v;
        while (ss >> v) e.push_back(v);
        if (!ss.eof())
            throw ParseError("line " + std::to_string(line_no) + ": non-integer token");
        if (static_cast<int>(e.size()) != k)
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(k) + " vertices, got " + std::to_string(e.size()));
        edges.push_back(std::move(e));
    }
    if (n < 0) throw ParseError("missing header line \"n k\"");
    Hypergraph g = [&] {
        try {
            return Hypergraph::build(n, k, edges);
        } catch (const Error& err) {
            throw ParseError(std::string("invalid edge data: ") + err.what());
        }
    }();
    if (duplicate_count)
        *duplicate_count = static_cast<int>(edges.size() - g.edge_count());
    return g;
}

Hypergraph read_edge_file(const std::string& path, int* duplicate_count) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return read_edge_file(in, duplicate_count);
}

void write_edge_file(std::ostream& out, const Hypergraph& g) {
    out << g.vertex_count() << ' ' << g.uniformity() << '\n';
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        auto ev = g.edge(e);
        for (int i = 0; i < g.uniformity(); ++i) {
            if (i) out << ' ';
            out << ev[i];
        }
        out << '\n';
    }
}

void write_edge_file(const std::string& path, const Hypergraph& g) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    write_edge_file(out, g);
    if (!out) throw ParseError("write failed for " + path);
}

} // namespace eh
