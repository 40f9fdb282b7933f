#include "eh/exact_count.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_map>

#include "eh/combinatorics.hpp"
#include "eh/parallel.hpp"
#include "eh/rng.hpp"

namespace eh {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

mpz_class factorial_mpz(unsigned long v) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), v);
    return r;
}

mpz_class mpz_from_u64(std::uint64_t v) {
    mpz_class r;
    mpz_import(r.get_mpz_t(), 1, 1, sizeof v, 0, 0, &v);
    return r;
}

// DFS over vertex sequences whose windows (stride s, cyclic) are all edges.
// Window membership is checked at the position completing each window.
// `pin` optionally fixes one position to one vertex (canonical enumeration).
struct SequenceDfs {
    const Hypergraph& g;
    int n, k, s, c;
    int pin_pos = -1, pin_vertex = -1;
    std::vector<std::vector<int>> complete_at;       // windows finishing at position p
    std::vector<std::vector<int>> window_positions;  // k positions per window

    // Per-leaf acceptance hook (canonical tie-break); null accepts all.
    bool (*accept)(const std::vector<int>&, const SequenceDfs&) = nullptr;

    std::vector<int> seq;
    std::vector<char> used;
    unsigned long long leaves = 0;
    std::uint64_t nodes = 0;
    std::vector<int> window_scratch;

    SequenceDfs(const Hypergraph& graph, int ell)
        : g(graph), n(graph.vertex_count()), k(graph.uniformity()), s(k - ell) {
        c = n / s;
        window_positions.resize(static_cast<std::size_t>(c));
        complete_at.assign(static_cast<std::size_t>(n), {});
        for (int i = 0; i < c; ++i) {
            auto& pos = window_positions[static_cast<std::size_t>(i)];
            pos.resize(static_cast<std::size_t>(k));
            int mx = 0;
            for (int j = 0; j < k; ++j) {
                pos[static_cast<std::size_t>(j)] = (i * s + j) % n;
                mx = std::max(mx, pos[static_cast<std::size_t>(j)]);
            }
            complete_at[static_cast<std::size_t>(mx)].push_back(i);
        }
        seq.assign(static_cast<std::size_t>(n), -1);
        used.assign(static_cast<std::size_t>(n), 0);
        window_scratch.resize(static_cast<std::size_t>(k));
    }

    bool window_ok(int w) {
        for (int j = 0; j < k; ++j)
            window_scratch[static_cast<std::size_t>(j)] =
                seq[static_cast<std::size_t>(window_positions[static_cast<std::size_t>(w)]
                                                             [static_cast<std::size_t>(j)])];
        std::sort(window_scratch.begin(), window_scratch.end());
        return g.has_edge(window_scratch);
    }

    void run_from(int first_vertex) {
        // Roots the DFS at position 0 = first_vertex (skipping when it
        // conflicts with the pin), used to split work across threads.
        if (pin_pos == 0) {
            if (first_vertex != pin_vertex) return;
        } else if (first_vertex == pin_vertex) {
            return;
        }
        seq[0] = first_vertex;
        used[static_cast<std::size_t>(first_vertex)] = 1;
        place(1);
        used[static_cast<std::size_t>(first_vertex)] = 0;
        seq[0] = -1;
    }

    void place(int p) {
        ++nodes;
        if (p == n) {
            if (!accept || accept(seq, *this)) ++leaves;
            return;
        }
        if (pin_pos == p) {
            if (used[static_cast<std::size_t>(pin_vertex)]) return;
            try_vertex(p, pin_vertex);
            return;
        }
        // Tight fast path: the window ending at p constrains the candidate to
        // the codegree neighbourhood of the previous k-1 entries.
        if (s == 1 && p >= k - 1 && !complete_at[static_cast<std::size_t>(p)].empty()) {
            for (int j = 0; j < k - 1; ++j)
                window_scratch[static_cast<std::size_t>(j)] =
                    seq[static_cast<std::size_t>(p - k + 1 + j)];
            std::sort(window_scratch.begin(), window_scratch.begin() + (k - 1));
            auto nb = g.codegree(std::span<const int>(window_scratch.data(),
                                                      static_cast<std::size_t>(k - 1)));
            for (const auto& ce : nb) {
                if (used[static_cast<std::size_t>(ce.vertex)]) continue;
                if (ce.vertex == pin_vertex) continue;
                try_vertex(p, ce.vertex);
            }
            return;
        }
        for (int v = 0; v < n; ++v) {
            if (used[static_cast<std::size_t>(v)]) continue;
            if (v == pin_vertex) continue;
            try_vertex(p, v);
        }
    }

private:
    void try_vertex(int p, int v) {
        seq[static_cast<std::size_t>(p)] = v;
        used[static_cast<std::size_t>(v)] = 1;
        bool ok = true;
        for (int w : complete_at[static_cast<std::size_t>(p)])
            if (!window_ok(w)) { ok = false; break; }
        if (ok) place(p + 1);
        used[static_cast<std::size_t>(v)] = 0;
        seq[static_cast<std::size_t>(p)] = -1;
    }
};

// Raw count of vertex sequences with all stride-s windows being edges.
mpz_class raw_traversal_count(const Hypergraph& g, int ell, int threads,
                              std::uint64_t* nodes_out) {
    const int n = g.vertex_count();
    struct Part {
        unsigned long long leaves = 0;
        std::uint64_t nodes = 0;
    };
    auto worker = [&](std::size_t first) {
        SequenceDfs dfs(g, ell);
        dfs.run_from(static_cast<int>(first));
        return Part{dfs.leaves, dfs.nodes};
    };
    Part total = parallel_map_reduce<Part>(
        static_cast<std::size_t>(n), threads, Part{}, worker,
        [](Part a, Part b) { return Part{a.leaves + b.leaves, a.nodes + b.nodes}; });
    if (nodes_out) *nodes_out = total.nodes;
    return mpz_from_u64(total.leaves);
}

// Canonical representative test for ordered ell-cycles: the sequence must be
// lexicographically smaller than its orientation partner (the reflected,
// window-aligned rotation with vertex 0 in the first block).
bool canonical_accept(const std::vector<int>& seq, const SequenceDfs& dfs) {
    const int n = dfs.n, s = dfs.s, k = dfs.k;
    int pos0 = 0;
    for (int i = 0; i < n; ++i)
        if (seq[static_cast<std::size_t>(i)] == 0) { pos0 = i; break; }
    int pos_r0 = n - 1 - pos0;              // position of vertex 0 in the reversal
    int q = ((pos_r0 + k) % s + s) % s;     // its slot in the partner's first block
    int shift = ((pos_r0 - q) % n + n) % n; // partner[i] = seq[(n-1-i-shift) mod n]
    for (int i = 0; i < n; ++i) {
        int j = ((n - 1 - i - shift) % n + n) % n;
        int a = seq[static_cast<std::size_t>(i)];
        int b = seq[static_cast<std::size_t>(j)];
        if (a != b) return a < b;
    }
    return false;  // self-symmetric: impossible for n >= 3, never counted twice
}

// Ordered ell-cycles (ell >= 1) by canonical enumeration: vertex 0 pinned to
// each slot of the first block, reflections quotiented by canonical_accept.
mpz_class canonical_ordered_count(const Hypergraph& g, int ell, int threads,
                                  std::uint64_t* nodes_out) {
    const int n = g.vertex_count();
    const int s = g.uniformity() - ell;
    struct Part {
        unsigned long long leaves = 0;
        std::uint64_t nodes = 0;
    };
    // Task grid: pin slot q in [0, s) x first free vertex choice.
    auto worker = [&](std::size_t task) {
        int q = static_cast<int>(task) / n;
        int first = static_cast<int>(task) % n;
        SequenceDfs dfs(g, ell);
        dfs.pin_pos = q;
        dfs.pin_vertex = 0;
        dfs.accept = &canonical_accept;
        dfs.run_from(first);
        return Part{dfs.leaves, dfs.nodes};
    };
    Part total = parallel_map_reduce<Part>(
        static_cast<std::size_t>(s) * static_cast<std::size_t>(n), threads, Part{}, worker,
        [](Part a, Part b) { return Part{a.leaves + b.leaves, a.nodes + b.nodes}; });
    if (nodes_out) *nodes_out = total.nodes;
    return mpz_from_u64(total.leaves);
}

// Perfect matchings by cover-lowest-vertex DFS; counts each edge set once.
void matching_dfs(const Hypergraph& g, std::vector<char>& covered, int covered_count,
                  unsigned long long& leaves, std::uint64_t& nodes) {
    ++nodes;
    const int n = g.vertex_count();
    if (covered_count == n) {
        ++leaves;
        return;
    }
    int v = 0;
    while (covered[static_cast<std::size_t>(v)]) ++v;
    for (std::int32_t e : g.incident_edges(v)) {
        auto ev = g.edge(static_cast<std::size_t>(e));
        bool free = true;
        for (int u : ev)
            if (covered[static_cast<std::size_t>(u)]) { free = false; break; }
        if (!free) continue;
        for (int u : ev) covered[static_cast<std::size_t>(u)] = 1;
        matching_dfs(g, covered, covered_count + g.uniformity(), leaves, nodes);
        for (int u : ev) covered[static_cast<std::size_t>(u)] = 0;
    }
}

void validate_tuple(const Hypergraph& g, std::span<const int> t, int expect_len) {
    if (static_cast<int>(t.size()) != expect_len)
        throw PreconditionViolation("tuple has wrong length");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < 0 || t[i] >= g.vertex_count())
            throw VertexOutOfRange("tuple vertex out of range");
        for (std::size_t j = i + 1; j < t.size(); ++j)
            if (t[i] == t[j]) throw PreconditionViolation("tuple has repeated entries");
    }
}

} // namespace

CycleConstants cycle_constants(int n, int k, int ell) {
    if (ell < 0 || ell > k - 1) throw PreconditionViolation("ell must be in [0, k-1]");
    if (n % (k - ell) != 0)
        throw DivisibilityViolated("(k - ell) = " + std::to_string(k - ell) +
                                   " must divide n = " + std::to_string(n));
    CycleConstants cc;
    cc.n = n;
    cc.k = k;
    cc.ell = ell;
    if (ell == 0) {
        cc.pi1 = 0;
        cc.pi2 = k;
        cc.c = factorial_mpz(static_cast<unsigned long>(n / k));
        mpz_class kf = factorial_mpz(static_cast<unsigned long>(k));
        mpz_class pw;
        mpz_pow_ui(pw.get_mpz_t(), kf.get_mpz_t(), static_cast<unsigned long>(n / k));
        cc.c *= pw;
    } else {
        cc.pi1 = k % (k - ell);
        cc.pi2 = (k - ell) - cc.pi1;
        mpz_class base = factorial_mpz(static_cast<unsigned long>(cc.pi1)) *
                         factorial_mpz(static_cast<unsigned long>(cc.pi2));
        mpz_pow_ui(cc.c.get_mpz_t(), base.get_mpz_t(),
                   static_cast<unsigned long>(n / (k - ell)));
    }
    return cc;
}

CountResult count_tight_hamilton_cycles(const Hypergraph& g, int threads) {
    if (g.vertex_count() < g.uniformity() + 1)
        throw PreconditionViolation("need n >= k + 1 for a tight Hamilton cycle");
    auto t0 = Clock::now();
    CountResult r;
    r.value = canonical_ordered_count(g, g.uniformity() - 1, threads, &r.nodes);
    r.elapsed_s = seconds_since(t0);
    return r;
}

EllCycleCounts count_hamilton_ell_cycles(const Hypergraph& g, int ell, int threads) {
    const int n = g.vertex_count();
    const int k = g.uniformity();
    CycleConstants cc = cycle_constants(n, k, ell);
    auto t0 = Clock::now();

    EllCycleCounts out;
    mpz_class raw = raw_traversal_count(g, ell, threads, &out.unordered.nodes);

    if (ell == 0) {
        // Unordered = perfect matchings, counted directly and independently.
        std::vector<char> covered(static_cast<std::size_t>(n), 0);
        unsigned long long leaves = 0;
        std::uint64_t nodes = 0;
        matching_dfs(g, covered, 0, leaves, nodes);
        out.ordered.value = raw;
        out.ordered.nodes = out.unordered.nodes;
        out.unordered.value = mpz_from_u64(leaves);
        out.unordered.nodes = nodes;
    } else {
        mpz_class orbit = 2 * mpz_class(n / (k - ell));
        mpz_class q, rem;
        mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), raw.get_mpz_t(), orbit.get_mpz_t());
        if (rem != 0)
            throw Error("internal: raw traversal count " + raw.get_str() +
                        " not divisible by the orbit size " + orbit.get_str());
        mpz_class unordered, rem2;
        mpz_fdiv_qr(unordered.get_mpz_t(), rem2.get_mpz_t(), q.get_mpz_t(),
                    cc.c.get_mpz_t());
        if (rem2 != 0)
            throw Error("internal: ordered count " + q.get_str() +
                        " not divisible by C = " + cc.c.get_str());
        out.unordered.value = unordered;
        out.ordered.value = canonical_ordered_count(g, ell, threads, &out.ordered.nodes);
    }

    if (out.ordered.value != cc.c * out.unordered.value)
        throw Error("internal: ordered/unordered cross-check failed: " +
                    out.ordered.value.get_str() + " != C * " + out.unordered.value.get_str());

    out.unordered.elapsed_s = seconds_since(t0);
    out.ordered.elapsed_s = out.unordered.elapsed_s;
    return out;
}

CountResult count_walks_between(const Hypergraph& g, std::span<const int> s,
                                std::span<const int> t, int L) {
    const int n = g.vertex_count();
    const int k = g.uniformity();
    if (L < 0) throw PreconditionViolation("L must be >= 0");
    if (s.size() != t.size()) throw PreconditionViolation("tuple sizes differ");
    const int ell = static_cast<int>(s.size());
    if (ell < 0 || ell > k - 1) throw PreconditionViolation("tuple size must be in [0, k-1]");
    validate_tuple(g, s, ell);
    validate_tuple(g, t, ell);

    auto t0 = Clock::now();
    CountResult r;
    if (L == 0) {
        r.value = std::equal(s.begin(), s.end(), t.begin(), t.end()) ? 1 : 0;
        r.elapsed_s = seconds_since(t0);
        return r;
    }

    if (ell == k - 1) {
        // Tight walks: transfer matrix on ordered (k-1)-tuples.
        std::int64_t states = falling_factorial(n, k - 1);
        if (states > 5'000'000) throw StateSpaceTooLarge("too many tuples");
        int bits = subset_key_bits(n, k - 1);
        std::unordered_map<std::uint64_t, std::int64_t> index;
        std::vector<std::vector<int>> tuples;
        index.reserve(static_cast<std::size_t>(states));
        std::vector<int> perm(static_cast<std::size_t>(k - 1));
        for_each_subset(n, k - 1, [&](std::span<const int> sub) {
            perm.assign(sub.begin(), sub.end());
            do {
                index.emplace(pack_tuple(perm, bits),
                              static_cast<std::int64_t>(tuples.size()));
                tuples.emplace_back(perm.begin(), perm.end());
            } while (std::next_permutation(perm.begin(), perm.end()));
        });

        std::vector<mpz_class> vec(tuples.size()), next(tuples.size());
        vec[static_cast<std::size_t>(index.at(pack_tuple(s, bits)))] = 1;
        std::vector<int> sorted(static_cast<std::size_t>(k - 1));
        std::vector<int> target(static_cast<std::size_t>(k - 1));
        for (int step = 0; step < L; ++step) {
            for (auto& v : next) v = 0;
            for (std::size_t i = 0; i < tuples.size(); ++i) {
                if (vec[i] == 0) continue;
                ++r.nodes;
                const auto& tp = tuples[i];
                sorted.assign(tp.begin(), tp.end());
                std::sort(sorted.begin(), sorted.end());
                std::copy(tp.begin() + 1, tp.end(), target.begin());
                for (const auto& ce : g.codegree(sorted)) {
                    target[static_cast<std::size_t>(k - 2)] = ce.vertex;
                    next[static_cast<std::size_t>(index.at(pack_tuple(target, bits)))] +=
                        vec[i];
                }
            }
            vec.swap(next);
        }
        r.value = vec[static_cast<std::size_t>(index.at(pack_tuple(t, bits)))];
        r.elapsed_s = seconds_since(t0);
        return r;
    }

    // ell-walks: transfer matrix on ordered edges; a length-L walk has L
    // edges, i.e. L-1 steps between ordered-edge states.
    double projected = static_cast<double>(g.edge_count());
    for (int i = 2; i <= k; ++i) projected *= i;
    if (projected > 5'000'000) throw StateSpaceTooLarge("too many ordered edges");

    int bits = subset_key_bits(n, k);
    std::unordered_map<std::uint64_t, std::int64_t> index;
    std::vector<std::vector<int>> states;
    std::vector<int> perm(static_cast<std::size_t>(k));
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        auto ev = g.edge(e);
        perm.assign(ev.begin(), ev.end());
        do {
            index.emplace(pack_tuple(perm, bits), static_cast<std::int64_t>(states.size()));
            states.emplace_back(perm.begin(), perm.end());
        } while (std::next_permutation(perm.begin(), perm.end()));
    }

    std::vector<mpz_class> vec(states.size()), next(states.size());
    for (std::size_t i = 0; i < states.size(); ++i)
        if (std::equal(s.begin(), s.end(), states[i].begin())) vec[i] = 1;

    std::vector<int> suffix_sorted(static_cast<std::size_t>(std::max(ell, 1)));
    std::vector<int> target(static_cast<std::size_t>(k));
    for (int step = 0; step < L - 1; ++step) {
        for (auto& v : next) v = 0;
        for (std::size_t i = 0; i < states.size(); ++i) {
            if (vec[i] == 0) continue;
            ++r.nodes;
            const auto& st = states[i];
            for (int j = 0; j < ell; ++j) {
                suffix_sorted[static_cast<std::size_t>(j)] = st[static_cast<std::size_t>(k - ell + j)];
                target[static_cast<std::size_t>(j)] = st[static_cast<std::size_t>(k - ell + j)];
            }
            std::sort(suffix_sorted.begin(), suffix_sorted.begin() + ell);
            auto emit = [&](std::size_t f) {
                auto fv = g.edge(f);
                std::vector<int> rest;
                for (int v : fv)
                    if (!std::binary_search(suffix_sorted.begin(),
                                            suffix_sorted.begin() + ell, v))
                        rest.push_back(v);
                if (static_cast<int>(rest.size()) != k - ell) return;
                std::sort(rest.begin(), rest.end());
                do {
                    for (int j = 0; j < k - ell; ++j)
                        target[static_cast<std::size_t>(ell + j)] = rest[static_cast<std::size_t>(j)];
                    next[static_cast<std::size_t>(index.at(pack_tuple(target, bits)))] += vec[i];
                } while (std::next_permutation(rest.begin(), rest.end()));
            };
            if (ell == 0) {
                for (std::size_t f = 0; f < g.edge_count(); ++f) emit(f);
            } else {
                for (std::int32_t f : g.incident_edges(suffix_sorted[0]))
                    emit(static_cast<std::size_t>(f));
            }
        }
        vec.swap(next);
    }
    mpz_class total = 0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (vec[i] == 0) continue;
        if (std::equal(t.begin(), t.end(), states[i].end() - ell, states[i].end()))
            total += vec[i];
    }
    r.value = total;
    r.elapsed_s = seconds_since(t0);
    return r;
}

namespace {

struct PathDfs {
    const Hypergraph& g;
    int n, k;
    std::span<const int> target;
    std::vector<char> used;
    std::vector<char> reserved;  // target vertices, only usable as the suffix
    std::vector<int> seq;
    std::uint64_t nodes = 0, budget = 0;
    bool aborted = false;
    SplitMix64 jitter;

    PathDfs(const Hypergraph& graph, std::span<const int> t, std::uint64_t node_budget,
            std::uint64_t seed)
        : g(graph), n(graph.vertex_count()), k(graph.uniformity()), target(t),
          used(static_cast<std::size_t>(graph.vertex_count()), 0),
          reserved(static_cast<std::size_t>(graph.vertex_count()), 0),
          budget(node_budget), jitter(seed) {}

    bool window_edge(std::span<const int> win) {
        std::vector<int> sorted(win.begin(), win.end());
        std::sort(sorted.begin(), sorted.end());
        return g.has_edge(sorted);
    }

    // Tries to finish the path with the target tuple; windows spanning the
    // junction and inside the suffix are checked one append at a time.
    bool try_finish() {
        std::size_t base = seq.size();
        for (int v : target) {
            seq.push_back(v);
            if (seq.size() >= static_cast<std::size_t>(k) &&
                !window_edge(std::span<const int>(seq.data() + seq.size() - k,
                                                  static_cast<std::size_t>(k)))) {
                seq.resize(base);
                return false;
            }
        }
        return true;
        // On failure the caller resizes; on success seq is the full path.
    }

    bool extend() {
        if (++nodes > budget) { aborted = true; return false; }
        if (seq.size() == static_cast<std::size_t>(n - (k - 1))) {
            if (try_finish()) return true;
            return false;
        }
        std::vector<int> last(seq.end() - (k - 1), seq.end());
        std::sort(last.begin(), last.end());

        // Candidates with their onward continuation counts (fewest first).
        std::vector<std::pair<std::uint64_t, int>> cand;
        std::vector<int> next_tuple(static_cast<std::size_t>(k - 1));
        for (const auto& ce : g.codegree(last)) {
            int v = ce.vertex;
            if (used[static_cast<std::size_t>(v)] || reserved[static_cast<std::size_t>(v)])
                continue;
            for (int j = 0; j < k - 2; ++j)
                next_tuple[static_cast<std::size_t>(j)] = seq[seq.size() - (k - 2) + j];
            next_tuple[static_cast<std::size_t>(k - 2)] = v;
            std::sort(next_tuple.begin(), next_tuple.end());
            std::uint64_t onward = 0;
            for (const auto& nb : g.codegree(next_tuple)) {
                if (!used[static_cast<std::size_t>(nb.vertex)] &&
                    !reserved[static_cast<std::size_t>(nb.vertex)] && nb.vertex != v)
                    ++onward;
            }
            cand.emplace_back((onward << 16) | (jitter.next() & 0xFFFF), v);
        }
        std::sort(cand.begin(), cand.end());
        for (const auto& [key, v] : cand) {
            seq.push_back(v);
            used[static_cast<std::size_t>(v)] = 1;
            if (extend()) return true;
            used[static_cast<std::size_t>(v)] = 0;
            seq.pop_back();
            if (aborted) return false;
        }
        return false;
    }
};

} // namespace

std::optional<std::vector<int>> find_hamilton_path_between(
    const Hypergraph& g, std::span<const int> s, std::span<const int> t,
    const PathSearchOptions& opts, PathSearchStats* stats) {
    const int k = g.uniformity();
    const int n = g.vertex_count();
    validate_tuple(g, s, k - 1);
    validate_tuple(g, t, k - 1);
    for (int a : s)
        for (int b : t)
            if (a == b) throw PreconditionViolation("start and end tuples overlap");
    if (n < 2 * (k - 1))
        throw PreconditionViolation("graph too small for disjoint end tuples");

    PathSearchStats local;
    for (int attempt = 0; attempt < std::max(1, opts.restarts); ++attempt) {
        PathDfs dfs(g, t, opts.node_budget, derive_seed(opts.seed, static_cast<std::uint64_t>(attempt)));
        for (int v : t) dfs.reserved[static_cast<std::size_t>(v)] = 1;
        dfs.seq.assign(s.begin(), s.end());
        for (int v : s) dfs.used[static_cast<std::size_t>(v)] = 1;
        bool found = dfs.extend();
        local.nodes += dfs.nodes;
        local.restarts_used = attempt + 1;
        if (found) {
            local.exhaustive = false;
            if (stats) *stats = local;
            return dfs.seq;
        }
        if (!dfs.aborted) {
            // Full exploration without a budget abort: NotFound is definitive.
            local.exhaustive = true;
            if (stats) *stats = local;
            return std::nullopt;
        }
    }
    local.exhaustive = false;
    if (stats) *stats = local;
    return std::nullopt;
}

} // namespace eh
