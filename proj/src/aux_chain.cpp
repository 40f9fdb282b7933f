#include "eh/aux_chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eh/combinatorics.hpp"

namespace eh {

namespace {

constexpr std::size_t kMaxStates = 5'000'000;        // exact-vector guard
constexpr std::size_t kMaxBuildStates = 20'000'000;  // state enumeration guard
constexpr std::int64_t kMaxWorkPerMultiply = 200'000'000;

std::int64_t factorial_i64(int v) {
    std::int64_t acc = 1;
    for (int i = 2; i <= v; ++i) acc *= i;
    return acc;
}

} // namespace

AuxChain build_chain_ordered_edge(const Hypergraph& g, const FractionalMatching& x,
                                  int ell, bool allow_zero_support) {
    const int k = g.uniformity();
    if (ell < 0 || ell > k - 1) throw PreconditionViolation("ell must be in [0, k-1]");
    if (&x.graph() != &g) throw PreconditionViolation("matching belongs to a different graph");

    AuxChain c;
    c.g_ = &g;
    c.x_ = &x;
    c.mode_ = ChainMode::OrderedEdge;
    c.ell_ = ell;
    c.stride_ = k;
    c.allow_zero_support_ = allow_zero_support;
    c.key_bits_ = subset_key_bits(g.vertex_count(), k);

    std::size_t projected = g.edge_count() * static_cast<std::size_t>(factorial_i64(k));
    if (projected > kMaxBuildStates)
        throw StateSpaceTooLarge("ordered-edge state space too large: " +
                                 std::to_string(projected));

    std::vector<int> perm(static_cast<std::size_t>(k));
    std::vector<int> suffix(static_cast<std::size_t>(std::max(ell, 1)));
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        double we = x.weight(e);
        if (we <= 0.0 && !allow_zero_support) continue;
        auto ev = g.edge(e);
        perm.assign(ev.begin(), ev.end());
        do {
            std::size_t id = c.count_++;
            c.states_.insert(c.states_.end(), perm.begin(), perm.end());
            c.sigma_weight_.push_back(we);
            for (int i = 0; i < ell; ++i) suffix[i] = perm[k - ell + i];
            std::sort(suffix.begin(), suffix.begin() + ell);
            double xs = subset_weight(x, std::span<const int>(suffix.data(),
                                                              static_cast<std::size_t>(ell)));
            c.denom_.push_back(xs);
            c.index_.emplace(pack_tuple(std::span<const int>(perm), c.key_bits_),
                             static_cast<std::int64_t>(id));
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return c;
}

AuxChain build_chain(const Hypergraph& g, const FractionalMatching& x, int ell,
                     bool allow_zero_support) {
    const int k = g.uniformity();
    if (ell < 0 || ell > k - 1) throw PreconditionViolation("ell must be in [0, k-1]");
    if (ell < k - 1) return build_chain_ordered_edge(g, x, ell, allow_zero_support);
    if (&x.graph() != &g) throw PreconditionViolation("matching belongs to a different graph");

    AuxChain c;
    c.g_ = &g;
    c.x_ = &x;
    c.mode_ = ChainMode::Tuple;
    c.ell_ = ell;
    c.stride_ = k - 1;
    c.allow_zero_support_ = allow_zero_support;
    c.key_bits_ = subset_key_bits(g.vertex_count(), k - 1);

    std::vector<int> perm(static_cast<std::size_t>(k - 1));
    for_each_subset(g.vertex_count(), k - 1, [&](std::span<const int> s) {
        double xs = 0.0;
        auto nb = g.codegree(s);
        for (const auto& ce : nb) xs += x.weight(static_cast<std::size_t>(ce.edge_id));
        bool include = xs > 0.0 || (allow_zero_support && !nb.empty());
        if (!include) return;
        perm.assign(s.begin(), s.end());
        do {
            std::size_t id = c.count_++;
            c.states_.insert(c.states_.end(), perm.begin(), perm.end());
            c.denom_.push_back(xs);
            c.sigma_weight_.push_back(xs);
            c.index_.emplace(pack_tuple(std::span<const int>(perm), c.key_bits_),
                             static_cast<std::int64_t>(id));
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (c.count_ > kMaxBuildStates)
            throw StateSpaceTooLarge("tuple state space too large");
    });
    return c;
}

std::optional<std::size_t> AuxChain::find_state(std::span<const int> ordered) const {
    if (static_cast<int>(ordered.size()) != stride_) return std::nullopt;
    for (int v : ordered)
        if (v < 0 || v >= g_->vertex_count()) return std::nullopt;
    auto it = index_.find(pack_tuple(ordered, key_bits_));
    if (it == index_.end()) return std::nullopt;
    return static_cast<std::size_t>(it->second);
}

std::size_t AuxChain::state_index(std::span<const int> ordered) const {
    auto id = find_state(ordered);
    if (!id)
        throw ZeroSupport("tuple is not a supported state of the chain");
    return *id;
}

void AuxChain::row(std::size_t i, std::vector<Transition>& out) const {
    out.clear();
    const Hypergraph& g = *g_;
    const int k = g.uniformity();
    auto st = state(i);
    double xs = denom_[i];

    if (mode_ == ChainMode::Tuple) {
        // Target tuple drops the head vertex and appends the new one.
        std::vector<int> sorted(st.begin(), st.end());
        std::sort(sorted.begin(), sorted.end());
        auto nb = g.codegree(sorted);
        std::vector<int> target(st.begin() + 1, st.end());
        target.push_back(0);
        if (xs > 0.0) {
            for (const auto& ce : nb) {
                double w = x_->weight(static_cast<std::size_t>(ce.edge_id));
                if (w <= 0.0) continue;
                target.back() = ce.vertex;
                auto it = index_.find(pack_tuple(target, key_bits_));
                if (it == index_.end())
                    throw ZeroSupport("transition reaches an unsupported state");
                out.push_back({it->second, w / xs});
            }
        } else {
            // Uniform fallback over the neighbourhood; reachable only when the
            // chain was built with allow_zero_support.
            double p = 1.0 / static_cast<double>(nb.size());
            for (const auto& ce : nb) {
                target.back() = ce.vertex;
                auto it = index_.find(pack_tuple(target, key_bits_));
                if (it == index_.end())
                    throw ZeroSupport("transition reaches an unsupported state");
                out.push_back({it->second, p});
            }
        }
        return;
    }

    // Ordered-edge mode: successors keep the ordered ell-suffix as prefix and
    // append the remaining k-ell vertices of the next edge in every order.
    const int ell = ell_;
    const double fact = static_cast<double>(factorial_i64(k - ell));
    std::vector<int> suffix(st.end() - ell, st.end());
    std::vector<int> suffix_sorted(suffix);
    std::sort(suffix_sorted.begin(), suffix_sorted.end());

    auto emit_edge = [&](std::size_t f) {
        auto fv = g.edge(f);
        std::vector<int> rest;
        rest.reserve(static_cast<std::size_t>(k - ell));
        for (int v : fv)
            if (!std::binary_search(suffix_sorted.begin(), suffix_sorted.end(), v))
                rest.push_back(v);
        if (static_cast<int>(rest.size()) != k - ell) return;  // f does not contain the suffix
        double wf = x_->weight(f);
        double p;
        if (xs > 0.0) {
            if (wf <= 0.0) return;
            p = wf / (fact * xs);
        } else {
            p = 0.0;  // filled below once the extension count is known
        }
        std::vector<int> target(suffix);
        target.resize(static_cast<std::size_t>(k));
        std::sort(rest.begin(), rest.end());
        do {
            for (int i = 0; i < k - ell; ++i) target[ell + i] = rest[i];
            auto it = index_.find(pack_tuple(target, key_bits_));
            if (it == index_.end())
                throw ZeroSupport("transition reaches an unsupported state");
            out.push_back({it->second, p});
        } while (std::next_permutation(rest.begin(), rest.end()));
    };

    if (ell == 0) {
        for (std::size_t f = 0; f < g.edge_count(); ++f) emit_edge(f);
    } else {
        for (std::int32_t f : g.incident_edges(suffix_sorted[0]))
            emit_edge(static_cast<std::size_t>(f));
    }

    if (xs <= 0.0 && !out.empty()) {
        double p = 1.0 / static_cast<double>(out.size());
        for (auto& tr : out) tr.prob = p;
    }
}

double AuxChain::row_entropy_bits(std::size_t i) const {
    std::vector<Transition> tr;
    row(i, tr);
    double h = 0.0;
    for (const auto& t : tr) h += xlog2_inv(t.prob);
    return h;
}

std::vector<double> AuxChain::stationary_unverified() const {
    const int k = g_->uniformity();
    double denom = static_cast<double>(factorial_i64(k - 1)) * g_->vertex_count();
    std::vector<double> sigma(count_);
    for (std::size_t i = 0; i < count_; ++i) sigma[i] = sigma_weight_[i] / denom;
    return sigma;
}

void AuxChain::apply(const std::vector<double>& in, std::vector<double>& out) const {
    out.assign(count_, 0.0);
    std::vector<Transition> tr;
    std::int64_t work = 0;
    for (std::size_t i = 0; i < count_; ++i) {
        if (in[i] == 0.0) continue;
        row(i, tr);
        work += static_cast<std::int64_t>(tr.size());
        if (work > kMaxWorkPerMultiply)
            throw StateSpaceTooLarge("transition work exceeds the exact-computation guard");
        for (const auto& t : tr) out[t.target] += in[i] * t.prob;
    }
}

std::vector<double> AuxChain::stationary(double verify_tol) const {
    std::vector<double> sigma = stationary_unverified();
    check_exact_guard();
    // sigma P = sigma is an algebraic identity of the closed form; the
    // normalization is what breaks when the matching is not perfect.
    double total = 0.0;
    for (double s : sigma) total += s;
    if (std::abs(total - 1.0) > std::max(verify_tol, 1e-9))
        throw StationarityViolated("closed-form sigma sums to " + std::to_string(total) +
                                   " (matching is not perfect?)");
    std::vector<double> next;
    apply(sigma, next);
    double err = 0.0;
    for (std::size_t i = 0; i < count_; ++i) err = std::max(err, std::abs(next[i] - sigma[i]));
    if (err > verify_tol)
        throw StationarityViolated("||sigma P - sigma||_inf = " + std::to_string(err));
    return sigma;
}

void AuxChain::check_exact_guard() const {
    if (count_ > kMaxStates)
        throw StateSpaceTooLarge("state count " + std::to_string(count_) +
                                 " exceeds the exact-computation guard");
}

std::vector<double> AuxChain::exact_distribution(std::size_t start, int t) const {
    if (t < 0) throw PreconditionViolation("t must be >= 0");
    if (start >= count_) throw PreconditionViolation("start state out of range");
    check_exact_guard();
    std::vector<double> dist(count_, 0.0), next;
    dist[start] = 1.0;
    for (int step = 0; step < t; ++step) {
        apply(dist, next);
        dist.swap(next);
    }
    return dist;
}

MixingProfile AuxChain::mixing_profile(std::size_t start, int t_max) const {
    if (start >= count_) throw PreconditionViolation("start state out of range");
    check_exact_guard();
    std::vector<double> sigma = stationary_unverified();
    MixingProfile mp;
    mp.max_rel_err.reserve(static_cast<std::size_t>(t_max) + 1);
    std::vector<double> dist(count_, 0.0), next;
    dist[start] = 1.0;
    for (int t = 0; t <= t_max; ++t) {
        double err = 0.0;
        for (std::size_t i = 0; i < count_; ++i) {
            if (sigma[i] <= 0.0) continue;
            err = std::max(err, std::abs(dist[i] - sigma[i]) / sigma[i]);
        }
        mp.max_rel_err.push_back(err);
        if (t < t_max) {
            apply(dist, next);
            dist.swap(next);
        }
    }
    // Geometric-rate fit on the second half of the profile, ignoring values
    // already at the floating-point noise floor.
    std::vector<std::pair<double, double>> pts;
    for (int t = t_max / 2; t <= t_max; ++t) {
        double e = mp.max_rel_err[static_cast<std::size_t>(t)];
        if (e > 1e-13) pts.emplace_back(static_cast<double>(t), std::log(e));
    }
    if (pts.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto [px, py] : pts) {
            sx += px; sy += py; sxx += px * px; sxy += px * py;
        }
        double m = static_cast<double>(pts.size());
        double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        mp.alpha_hat = -slope;
        mp.rho_hat = std::exp(slope);
    } else {
        mp.alpha_hat = std::numeric_limits<double>::quiet_NaN();
        mp.rho_hat = std::numeric_limits<double>::quiet_NaN();
    }
    return mp;
}

} // namespace eh
