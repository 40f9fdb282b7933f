#include "eh/bounds.hpp"

#include <chrono>
#include <cmath>

#include "eh/combinatorics.hpp"
#include "eh/exact_count.hpp"
#include "eh/parallel.hpp"
#include "eh/solver.hpp"

namespace eh {

namespace {

double log2_cycle_constant(int n, int k, int ell) {
    if (ell == 0)
        return log2_factorial(n / k) +
               (static_cast<double>(n) / k) * log2_factorial(k);
    int s = k - ell;
    int pi1 = k % s;
    int pi2 = s - pi1;
    return (static_cast<double>(n) / s) * (log2_factorial(pi1) + log2_factorial(pi2));
}

} // namespace

BoundReport theorem_bounds(int n, int k, int ell, double delta, double h_bits,
                           double slack_c) {
    if (ell < 0 || ell > k - 1) throw PreconditionViolation("ell must be in [0, k-1]");
    if (n % (k - ell) != 0)
        throw DivisibilityViolated("(k - ell) must divide n for the ell-cycle bound");

    BoundReport r;
    r.n = n;
    r.k = k;
    r.ell = ell;
    r.delta = delta;
    r.h_bits = h_bits;
    r.slack_c = slack_c;

    const double dn = static_cast<double>(n);
    const double log2C = log2_binomial(n, k - 1);
    const double log2n = log2_of(dn);
    r.hbar = h_bits - (dn / k) * log2C + (dn / k) * log2n;
    // log2 of C(n,k-1) (n-k+1)! / ((n-ell)! n)
    const double log2_ratio =
        log2C + log2_factorial(n - k + 1) - log2_factorial(n - ell) - log2n;
    r.hbar_ell = h_bits - (dn / k) * log2_ratio;

    r.bound_t16 = k * h_bits - dn * log2C + dn * log2n - dn * kLog2E;
    r.bound_t17 = dn * log2_of(delta) + log2_factorial(n);
    r.bound_t18 = (static_cast<double>(k) / (k - ell)) * h_bits -
                  (dn / (k - ell)) * log2_ratio - dn * kLog2E -
                  log2_cycle_constant(n, k, ell);
    return r;
}

std::vector<SweepRow> sweep(
    const std::vector<std::pair<std::string, const Hypergraph*>>& instances,
    const SweepOptions& opts) {
    auto run_row = [&](std::size_t i) {
        SweepRow row;
        row.instance = instances[i].first;
        const Hypergraph* g = instances[i].second;
        auto t0 = std::chrono::steady_clock::now();
        try {
            int ell = opts.ell < 0 ? g->uniformity() - 1 : opts.ell;
            SolveOptions so;
            so.tol = opts.solver_tol;
            so.max_iters = opts.solver_max_iters;
            auto [x, dual] = max_entropy_pfm(*g, so);
            double h = entropy_bits(x);
            BoundReport rep = theorem_bounds(g->vertex_count(), g->uniformity(), ell,
                                             g->dirac_ratio(), h, opts.slack_c);
            rep.instance = row.instance;
            if (g->vertex_count() <= opts.exact_max_n) {
                mpz_class count;
                if (ell == g->uniformity() - 1) {
                    count = count_tight_hamilton_cycles(*g).value;
                } else {
                    count = count_hamilton_ell_cycles(*g, ell).unordered.value;
                }
                if (count > 0) {
                    long e2;
                    double mant = mpz_get_d_2exp(&e2, count.get_mpz_t());
                    double lg = log2_of(mant) + static_cast<double>(e2);
                    rep.exact_log2 = lg;
                    rep.gap = lg - (ell == g->uniformity() - 1 ? rep.bound_t16 : rep.bound_t18);
                } else {
                    rep.exact_log2 = -std::numeric_limits<double>::infinity();
                }
            }
            rep.runtime_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            row.report = rep;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        return row;
    };
    return parallel_map_reduce<std::vector<SweepRow>>(
        instances.size(), opts.threads, {},
        [&](std::size_t i) { return std::vector<SweepRow>{run_row(i)}; },
        [](std::vector<SweepRow> acc, std::vector<SweepRow> one) {
            for (auto& r : one) acc.push_back(std::move(r));
            return acc;
        });
}

} // namespace eh
