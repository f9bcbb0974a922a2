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

using Pairs = std::vector<std::pair<Vertex, Vertex>>;

Pairs random_pairs(Rng& rng, std::size_t nl, std::size_t nr, std::size_t m) {
    Pairs out;
    for (std::size_t i = 0; i < m; ++i) out.emplace_back(rng.bounded(nl), rng.bounded(nr));
    return out;
}

} // namespace

TEST_SUITE("offline") {

TEST_CASE("max_matching hand cases") {
    CHECK(max_matching(Pairs{}, 3, 3).size == 0);
    CHECK(max_matching(Pairs{{0, 0}, {1, 0}, {1, 1}}, 2, 2).size == 2);
    Pairs k33;
    for (Vertex u = 0; u < 3; ++u)
        for (Vertex v = 0; v < 3; ++v) k33.emplace_back(u, v);
    const auto r = max_matching(k33, 3, 3);
    CHECK(r.size == 3);
    CHECK(r.matched_edges.size() == 3);
    CHECK(std::is_sorted(r.matched_edges.begin(), r.matched_edges.end()));
    CHECK_THROWS_AS(max_matching(Pairs{{3, 0}}, 3, 3), ValidationError);
}

TEST_CASE("max_matching agrees with subset enumeration") {
    Rng rng(99);
    for (int t = 0; t < 300; ++t) {
        const std::size_t nl = 1 + rng.bounded(5), nr = 1 + rng.bounded(5), m = rng.bounded(11);
        const auto pairs = random_pairs(rng, nl, nr, m);
        const auto r = max_matching(pairs, nl, nr);
        std::vector<std::pair<std::size_t, std::size_t>> plain(pairs.begin(), pairs.end());
        CHECK(r.size == oracle::max_matching(plain));
        std::uint32_t mask = 0;
        for (std::size_t i : r.matched_edges) mask |= 1u << i;
        CHECK(oracle::is_matching(plain, mask));
    }
}

TEST_CASE("exact expected opt") {
    const std::vector<StochasticGraph::EdgeInput> one{{0, 0, 0.7}};
    CHECK(exact_expected_opt(StochasticGraph(1, 1, one)) == doctest::Approx(0.7).epsilon(1e-15));
    const std::vector<StochasticGraph::EdgeInput> par{{0, 0, 0.5}, {0, 0, 0.5}};
    CHECK(exact_expected_opt(StochasticGraph(1, 1, par)) == doctest::Approx(0.75).epsilon(1e-15));
    for (std::uint64_t s = 1; s <= 10; ++s) {
        const auto g = gen_random(3, 4, 11, 0.05, 1.0, 40 + s);
        const double exact = exact_expected_opt(g);
        CHECK(exact == doctest::Approx(oracle::expected_opt(g)).epsilon(1e-12));
        const auto probs = exact_match_probabilities(g);
        CHECK(exact == doctest::Approx(std::accumulate(probs.begin(), probs.end(), 0.0)).epsilon(1e-12));
        CHECK(solve_lp(g).objective >= exact - 1e-6);
    }
    CHECK_THROWS_AS(exact_expected_opt(gen_random(5, 5, 23, 0.1, 0.9, 1)), CapabilityError);
}

TEST_CASE("mc_opt") {
    const std::vector<StochasticGraph::EdgeInput> none{{0, 0, 0.0}, {1, 1, 0.0}};
    const auto z = mc_opt(StochasticGraph(2, 2, none), SimOptions{1000, 1, 1});
    CHECK(z.mean == 0.0);
    CHECK(z.std_error == 0.0);

    const auto g = gen_random(3, 3, 9, 0.1, 0.9, 8);
    const double exact = exact_expected_opt(g);
    const auto est = mc_opt(g, SimOptions{1000000, 5, 0});
    CHECK(std::fabs(est.mean - exact) <= 4.0 * est.std_error);

    const auto sol = solve_lp(g);
    const auto pg = prune(g, sol.x, 1.0);
    const auto pruned_exact = oracle::expected_opt(StochasticGraph(3, 3, [&] {
        std::vector<StochasticGraph::EdgeInput> in;
        for (const auto& e : g.edges()) in.push_back({e.u, e.v, pg.y[e.id]});
        return in;
    }()));
    const auto on_y = mc_opt(pg, SimOptions{400000, 6, 0}, true);
    CHECK(std::fabs(on_y.mean - pruned_exact) <= 4.0 * on_y.std_error);
    const auto on_p = mc_opt(pg, SimOptions{400000, 6, 0}, false);
    CHECK(std::fabs(on_p.mean - exact) <= 4.0 * on_p.std_error);
}

TEST_CASE("competitive report") {
    const McEstimate alg{1.0, 0.0, 100, 1};
    const McEstimate opt{2.0, 0.0, 100, 1};
    const auto r = competitive_report(alg, opt, true);
    CHECK(r.ratio == 0.5);
    CHECK(r.ratio_ci_low == 0.5);
    CHECK(r.ratio_ci_high == 0.5);
    CHECK(r.opt_exact);

    const auto noisy = competitive_report(McEstimate{1.0, 0.1, 100, 1}, McEstimate{2.0, 0.1, 100, 1});
    CHECK(noisy.ratio_ci_low == doctest::Approx(0.7 / 2.3).epsilon(1e-14));
    CHECK(noisy.ratio_ci_high == doctest::Approx(1.3 / 1.7).epsilon(1e-14));
    const auto wide = competitive_report(McEstimate{0.1, 0.1, 100, 1}, McEstimate{0.2, 0.1, 100, 1});
    CHECK(wide.ratio_ci_low == 0.0);
    CHECK(std::isinf(wide.ratio_ci_high));
    CHECK_THROWS_AS(competitive_report(alg, McEstimate{0.0, 0.0, 100, 1}), UndefinedError);
}

TEST_CASE("coupled run") {
    for (std::uint64_t s = 1; s <= 5; ++s) {
        const auto g = gen_random(5, 5, 25, 0.1, 0.9, 200 + s);
        const auto sol = solve_lp(g);
        const auto pg = prune(g, sol.x, 1.7);
        const auto order = order_random(g.num_edges(), s);
        const CoupledOptions opts{SimOptions{20000, s, 0}, true};
        const auto run = coupled_run(pg, order, opts);
        CHECK(run.half_guarantee_violations == 0);
        CHECK(run.alg_above_opt == 0);
        const auto greedy = mc_greedy(pg, order, opts.sim);
        CHECK(run.alg.mean == greedy.estimate.mean);
        CHECK(run.alg.std_error == greedy.estimate.std_error);
        CHECK(run.opt.mean == mc_opt(g, opts.sim).mean);
        CHECK(run.opt.mean >= run.alg.mean);

        const auto per_trial = coupled_run(pg, RandomPerTrial{}, opts);
        CHECK(per_trial.alg.mean == mc_greedy(pg, RandomPerTrial{}, opts.sim).estimate.mean);
        CHECK(per_trial.half_guarantee_violations == 0);

        const auto indep = coupled_run(pg, order, CoupledOptions{SimOptions{20000, s, 0}, false});
        CHECK(indep.alg.mean == run.alg.mean);
        CHECK(indep.opt.mean != run.opt.mean);
        CHECK(std::fabs(indep.opt.mean - run.opt.mean) <= 4.0 * std::hypot(indep.opt.std_error, run.opt.std_error));
    }
}

TEST_CASE("prune and greedy pipeline") {
    const auto g = gen_random(4, 4, 14, 0.1, 0.9, 31);
    const auto rep = prune_and_greedy(g, 1.7, RandomPerTrial{}, CoupledOptions{SimOptions{50000, 2, 0}, true});
    CHECK(rep.lp.objective >= exact_expected_opt(g) - 1e-6);
    CHECK(rep.pruned.c == 1.7);
    CHECK(rep.ratio.alg.mean == rep.run.alg.mean);
    CHECK(rep.ratio.ratio == doctest::Approx(rep.run.alg.mean / rep.run.opt.mean).epsilon(1e-15));
    CHECK(rep.ratio.ratio_ci_high >= 0.503);
}

}
