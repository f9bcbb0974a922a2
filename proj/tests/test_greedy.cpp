#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "matchlab/errors.hpp"
#include "matchlab/greedy_sim.hpp"
#include "matchlab/lp_relax.hpp"
#include "matchlab/offline_opt.hpp"
#include "matchlab/pruner.hpp"
#include "matchlab/rng.hpp"
#include "oracles.hpp"

using namespace matchlab;

namespace {

std::vector<std::size_t> seq_of(const ArrivalOrder& o) { return {o.sequence().begin(), o.sequence().end()}; }

Realization all_realized(std::size_t m) { return Realization{std::vector<bool>(m, true)}; }

} // namespace

TEST_SUITE("greedy") {

TEST_CASE("estimate from sums") {
    const auto e = estimate_from_sums(6.0L, 10.0L, 4, 3);
    CHECK(e.mean == doctest::Approx(1.5));
    // sample variance (10 - 4 * 2.25) / 3 = 1/3
    CHECK(e.std_error == doctest::Approx(std::sqrt(1.0 / 3.0 / 4.0)));
    CHECK(e.seed == 3);
}

TEST_CASE("run_greedy hand cases") {
    const std::vector<StochasticGraph::EdgeInput> par{{0, 0, 0.5}, {0, 0, 0.5}};
    const auto pg = unpruned(StochasticGraph(1, 1, par));
    CHECK(run_greedy(pg, order_as_listed(2), Realization{{false, false}}).size == 0);
    const auto two = run_greedy(pg, order_as_listed(2), all_realized(2));
    CHECK(two.matched_edges == std::vector<EdgeId>{0});

    // Path u0-v0 (e0), u1-v0 (e1), u1-v1 (e2), arriving e1, e0, e2.
    const std::vector<StochasticGraph::EdgeInput> path{{0, 0, 1.0}, {1, 0, 1.0}, {1, 1, 1.0}};
    const StochasticGraph pg3(2, 2, path);
    const auto res = run_greedy(unpruned(pg3), ArrivalOrder({1, 0, 2}), all_realized(3));
    CHECK(res.matched_edges == std::vector<EdgeId>{1});
    CHECK(res.size == 1);
    const std::vector<std::pair<Vertex, Vertex>> pairs{{0, 0}, {1, 0}, {1, 1}};
    CHECK(max_matching(pairs, 2, 2).size == 2);
    CHECK_THROWS_AS(run_greedy(unpruned(pg3), order_as_listed(2), all_realized(3)), ValidationError);
}

TEST_CASE("run_greedy is a maximal matching") {
    Rng rng(5);
    for (int t = 0; t < 50; ++t) {
        const auto g = gen_random(4, 5, 15, 0.2, 0.9, 100 + t);
        Realization r{std::vector<bool>(g.num_edges())};
        for (std::size_t i = 0; i < g.num_edges(); ++i) r.exists[i] = rng.uniform() < 0.6;
        const auto res = run_greedy(unpruned(g), order_random(g.num_edges(), t), r);
        CHECK(res.size == res.matched_edges.size());
        CHECK(std::count(res.matched_left.begin(), res.matched_left.end(), true) == static_cast<long>(res.size));
        CHECK(std::count(res.matched_right.begin(), res.matched_right.end(), true) == static_cast<long>(res.size));
        for (const auto& e : g.edges())
            if (r.exists[e.id]) CHECK((res.matched_left[e.u] || res.matched_right[e.v]));
    }
}

TEST_CASE("order builders") {
    CHECK(seq_of(order_as_listed(3)) == std::vector<std::size_t>{0, 1, 2});
    CHECK(order_random(20, 4) == order_random(20, 4));
    CHECK_FALSE(order_random(20, 4) == order_random(20, 5));
    const std::size_t n = 4;
    const auto g1 = gen_fig1_regular(n, 0.1);
    const auto red = order_red_first(g1);
    for (std::size_t i = 0; i <= n; ++i) {
        const auto& e = g1.edge(red[i]);
        CHECK(e.u == e.v);
        CHECK(e.u <= n);
    }
    const auto g2 = gen_fig2_hardness(3);
    const auto t1 = order_type1_first(g2);
    for (std::size_t i = 0; i < 9; ++i) CHECK(g2.edge(t1[i]).p == 1.0);
    CHECK_THROWS_AS(order_red_first(g2), ValidationError);
    CHECK_THROWS_AS(order_type1_first(g1), ValidationError);
}

TEST_CASE("mc_greedy trivial cases") {
    const std::vector<StochasticGraph::EdgeInput> in{{0, 0, 0.5}, {1, 1, 0.3}};
    const StochasticGraph g(2, 2, in);
    const PrunedGraph zero{g, {0.0, 0.0}, {0.0, 0.0}, 1.7};
    const auto z = mc_greedy(zero, order_as_listed(2), SimOptions{1000, 1, 1});
    CHECK(z.estimate.mean == 0.0);
    CHECK(z.estimate.std_error == 0.0);

    const std::vector<StochasticGraph::EdgeInput> one{{0, 0, 0.5}};
    const auto half = mc_greedy(unpruned(StochasticGraph(1, 1, one)), order_as_listed(1), SimOptions{1000000, 9, 0});
    CHECK(std::fabs(half.estimate.mean - 0.5) <= 0.002);
    CHECK_THROWS_AS(mc_greedy(zero, order_as_listed(2), SimOptions{0, 1, 1}), ValidationError);
}

TEST_CASE("mc_greedy agrees with exact enumeration under fixed orders") {
    for (std::uint64_t s = 1; s <= 8; ++s) {
        const auto g = gen_random(3, 3, 10, 0.1, 0.9, s);
        const auto sol = solve_lp(g);
        const auto pg = prune(g, sol.x, 1.7);
        const auto order = order_random(g.num_edges(), s);
        const double exact = oracle::expected_greedy(g, pg.y, seq_of(order));
        const auto est = mc_greedy(pg, order, SimOptions{200000, s, 0}).estimate;
        CHECK(std::fabs(est.mean - exact) <= 4.0 * est.std_error + 1e-12);
    }
}

TEST_CASE("mc_greedy agrees with exact enumeration under per-trial random orders") {
    const auto g = gen_complete_uniform(3);
    // Exact value over all realizations and all orders of the realized edges.
    const double exact = oracle::expected_greedy_random_order(g, g.probabilities());
    const auto est = mc_greedy(unpruned(g), RandomPerTrial{}, SimOptions{400000, 17, 0}).estimate;
    CHECK(std::fabs(est.mean - exact) <= 4.0 * est.std_error);
}

TEST_CASE("complete 1-regular graph at n = 3") {
    // Every vertex has log-degree 1, so p = 1 - e^{-1/3}.
    const auto g = gen_complete_regular(3, 1.0);
    const double exact = oracle::expected_greedy_random_order(g, g.probabilities()) / 3.0;
    CHECK(std::fabs(exact - 0.53132) <= 1e-5);
    const auto est = mc_greedy(unpruned(g), RandomPerTrial{}, SimOptions{400000, 23, 0}).estimate;
    CHECK(std::fabs(est.mean / 3.0 - exact) <= 4.0 * est.std_error / 3.0);
}

TEST_CASE("determinism across thread counts") {
    const auto g = gen_random(6, 6, 40, 0.1, 0.9, 3);
    const auto pg = unpruned(g);
    const auto a = mc_greedy(pg, RandomPerTrial{}, SimOptions{20000, 42, 1});
    const auto b = mc_greedy(pg, RandomPerTrial{}, SimOptions{20000, 42, 3});
    CHECK(a.estimate.mean == b.estimate.mean);
    CHECK(a.estimate.std_error == b.estimate.std_error);
    CHECK(a.left_match_frequency == b.left_match_frequency);
    const auto c = mc_greedy(pg, RandomPerTrial{}, SimOptions{20000, 43, 1});
    CHECK(a.estimate.mean != c.estimate.mean);
}

TEST_CASE("q values") {
    const std::vector<StochasticGraph::EdgeInput> in{{0, 0, 0.3}, {0, 1, 0.6}, {1, 1, 0.5}};
    const StochasticGraph g(2, 2, in);
    const auto q = q_values(unpruned(g), order_as_listed(3));
    CHECK(q.left[0] == 1.0);
    CHECK(q.left[1] == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(q.left[2] == 1.0);
    CHECK(q.right[2] == doctest::Approx(0.4).epsilon(1e-15));

    const auto rg = gen_random_regular(5, 2.0, 4, 8);
    const auto xy = regular_xy(rg, 2.0);
    const PrunedGraph pg{rg, xy.y, xy.x, 2.0};
    const auto order = order_random(rg.num_edges(), 2);
    const auto qr = q_values(pg, order);
    std::vector<double> prefix(5, 0.0);
    for (EdgeId e : order.sequence()) {
        CHECK(qr.left[e] == doctest::Approx(std::exp(-prefix[rg.edge(e).u])).epsilon(1e-9));
        prefix[rg.edge(e).u] += rg.edge(e).w;
    }
}

TEST_CASE("first-order bound values") {
    const std::vector<StochasticGraph::EdgeInput> one{{0, 0, 1.0 - std::exp(-2.0)}};
    const StochasticGraph g(1, 1, one);
    const PrunedGraph zero{g, {0.0}, {0.0}, 2.0};
    CHECK(lemma1_lower_bound(zero, order_as_listed(1)) == 0.0);
    const PrunedGraph pg{g, {1.0 - std::exp(-2.0)}, {1.0}, 2.0};
    CHECK(lemma1_lower_bound(pg, order_as_listed(1)) == doctest::Approx(1.0 - std::exp(-(1.0 - std::exp(-2.0)))).epsilon(1e-14));
    CHECK(lemma1_lower_bound(pg, order_as_listed(1)) == doctest::Approx(0.578807).epsilon(1e-6));
    CHECK(second_order_coefficient(2.0) == doctest::Approx(std::exp(-2.0 - 2.0 * std::exp(-2.0))).epsilon(1e-15));
}

TEST_CASE("event terms match exact enumeration") {
    const auto g = gen_random(3, 3, 11, 0.1, 0.9, 21);
    const auto sol = solve_lp(g);
    const auto pg = prune(g, sol.x, 2.0);
    const auto order = order_random(g.num_edges(), 5);
    const auto ev = estimate_event_terms(pg, order, SimOptions{300000, 3, 0}, 2.0);
    const auto exact = oracle::exact_events(g, pg.y, seq_of(order));
    const auto q = q_values(pg, order);
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
        CHECK(std::fabs(ev.unmatched_before[e] - exact.unmatched_before[e]) <= 4.0 * ev.unmatched_stderr[e] + 1e-12);
        CHECK(ev.unmatched_before[e] >= q.left[e] - 3.0 * ev.unmatched_stderr[e]);
        CHECK(ev.q[e] == q.left[e]);
    }
    for (Vertex u = 0; u < g.n_left(); ++u) {
        double none = 1.0;
        for (const auto& e : g.edges())
            if (e.u == u) none *= 1.0 - pg.y[e.id];
        const double delta = exact.left_unmatched_end[u] - none;
        CHECK(std::fabs(ev.delta[u] - delta) <= 4.0 * ev.delta_stderr[u] + 1e-12);
        CHECK(ev.delta[u] >= -3.0 * ev.delta_stderr[u]);
    }
    // The first edge at each left vertex has q = 1 and can only see u unmatched.
    std::vector<bool> seen(g.n_left(), false);
    for (EdgeId e : order.sequence()) {
        const Vertex u = g.edge(e).u;
        if (!seen[u]) CHECK(ev.term_II[e] == 0.0);
        seen[u] = true;
    }
    const auto greedy = mc_greedy(pg, order, SimOptions{300000, 3, 0});
    CHECK(ev.alg.mean == greedy.estimate.mean);
    CHECK(ev.combined_bound == doctest::Approx(ev.sum_I + ev.coefficient * ev.sum_II_total).epsilon(1e-12));
    CHECK(ev.alg_minus_bound.mean == doctest::Approx(ev.alg.mean - ev.combined_bound).epsilon(1e-9));
}

TEST_CASE("moving a parallel edge next to its twin keeps the better of two variants") {
    // For a pair of parallel edges e1 < e2 in sigma, sigma1 delays e1 to just
    // before e2 and sigma2 pulls e2 to just after e1.
    for (std::uint64_t s = 1; s <= 12; ++s) {
        auto base = gen_random(2, 3, 8, 0.2, 0.9, 300 + s);
        const auto order = order_random(base.num_edges(), s);
        const auto seq = seq_of(order);
        std::size_t i1 = seq.size(), i2 = seq.size();
        for (std::size_t a = 0; a < seq.size() && i1 == seq.size(); ++a)
            for (std::size_t b = a + 1; b < seq.size(); ++b)
                if (base.edge(seq[a]).u == base.edge(seq[b]).u && base.edge(seq[a]).v == base.edge(seq[b]).v) {
                    i1 = a;
                    i2 = b;
                    break;
                }
        if (i1 == seq.size()) continue;
        std::vector<std::size_t> s1 = seq, s2 = seq;
        std::rotate(s1.begin() + static_cast<long>(i1), s1.begin() + static_cast<long>(i1) + 1, s1.begin() + static_cast<long>(i2));
        std::rotate(s2.begin() + static_cast<long>(i1) + 1, s2.begin() + static_cast<long>(i2), s2.begin() + static_cast<long>(i2) + 1);
        const auto p = base.probabilities();
        const double a0 = oracle::expected_greedy(base, p, seq);
        const double a1 = oracle::expected_greedy(base, p, s1);
        const double a2 = oracle::expected_greedy(base, p, s2);
        CHECK(a0 >= std::min(a1, a2) - 1e-12);
    }
}

}
