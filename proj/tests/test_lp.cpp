#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "matchlab/errors.hpp"
#include "matchlab/lp_relax.hpp"
#include "matchlab/offline_opt.hpp"
#include "matchlab/rng.hpp"
#include "matchlab/simplex.hpp"
#include "oracles.hpp"

using namespace matchlab;

TEST_SUITE("lp") {

TEST_CASE("constraint rhs") {
    CHECK(constraint_rhs(std::vector<double>{}) == 0.0);
    CHECK(constraint_rhs(std::vector<double>{1.0, 0.3}) == 1.0);
    CHECK(constraint_rhs(std::vector<double>{0.5, 0.5}) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("dense simplex on small programs") {
    // max x + y  s.t.  x + 2y <= 4,  3x + y <= 6  -> optimum (8/5, 6/5), value 14/5.
    const std::vector<double> obj{1.0, 1.0};
    DenseSimplex lp(obj);
    lp.add_row(std::vector<double>{1.0, 2.0}, 4.0);
    lp.add_row(std::vector<double>{3.0, 1.0}, 6.0);
    REQUIRE(lp.solve() == DenseSimplex::Status::Optimal);
    CHECK(lp.objective_value() == doctest::Approx(2.8).epsilon(1e-12));
    CHECK(lp.primal()[0] == doctest::Approx(1.6).epsilon(1e-12));
    // A cut that makes the old optimum infeasible, re-optimized by the dual method.
    lp.add_row(std::vector<double>{1.0, 1.0}, 2.5);
    REQUIRE(lp.solve() == DenseSimplex::Status::Optimal);
    CHECK(lp.objective_value() == doctest::Approx(2.5).epsilon(1e-12));

    DenseSimplex unbounded(obj);
    unbounded.add_row(std::vector<double>{1.0, -1.0}, 1.0);
    CHECK(unbounded.solve() == DenseSimplex::Status::Unbounded);
}

TEST_CASE("separate on a single edge") {
    const std::vector<VertexEdge> one{{4, 0.5, 0.7}};
    const auto r = separate(one);
    CHECK(r.violated);
    CHECK(r.subset == std::vector<EdgeId>{4});
    CHECK(r.violation == doctest::Approx(0.2).epsilon(1e-12));
    const std::vector<VertexEdge> fine{{0, 0.5, 0.5}};
    CHECK_FALSE(separate(fine).violated);
}

TEST_CASE("separate matches exhaustive subset search, including p = 0 and p = 1") {
    Rng rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t d = 1 + rng.bounded(10);
        std::vector<VertexEdge> edges;
        std::vector<double> p, x;
        for (std::size_t i = 0; i < d; ++i) {
            double pi = rng.uniform();
            const auto kind = rng.bounded(8);
            if (kind == 0) pi = 1.0;
            if (kind == 1) pi = 0.0;
            const double xi = rng.uniform() * (kind == 1 ? 0.1 : pi * 1.3);
            edges.push_back({i, pi, xi});
            p.push_back(pi);
            x.push_back(xi);
        }
        const double brute = oracle::max_subset_violation(p, x);
        CHECK(separate(edges).violation == doctest::Approx(brute).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("solve_lp basic values") {
    const std::vector<StochasticGraph::EdgeInput> single{{0, 0, 0.6}};
    const auto s = solve_lp(StochasticGraph(1, 1, single));
    CHECK(s.x[0] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(s.objective == doctest::Approx(0.6).epsilon(1e-12));

    // Every x_e = 1/n on K_{n,n} with certain edges gives objective n.
    std::vector<StochasticGraph::EdgeInput> kn;
    for (std::size_t u = 0; u < 3; ++u)
        for (std::size_t v = 0; v < 3; ++v) kn.push_back({u, v, 1.0});
    CHECK(solve_lp(StochasticGraph(3, 3, kn)).objective == doctest::Approx(3.0).epsilon(1e-9));

    const auto empty = solve_lp(StochasticGraph(2, 2, std::vector<StochasticGraph::EdgeInput>{}));
    CHECK(empty.objective == 0.0);
    CHECK(empty.x.empty());

    const auto cu = gen_complete_uniform(2);
    CHECK(solve_lp(cu).objective >= oracle::expected_opt(cu) - 1e-9);
}

TEST_CASE("solve_lp matches vertex enumeration on tiny instances") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const auto g = gen_random(2, 2, 1 + seed % 4, 0.05, 1.0, seed);
        const double exact = oracle::lp_by_vertex_enumeration(g);
        const auto sol = solve_lp(g);
        CHECK(sol.objective == doctest::Approx(exact).epsilon(1e-8));
        CHECK(verify_feasible(g, sol.x, FeasibilityMode::BruteForce).feasible);
    }
}

TEST_CASE("solve_lp frozen values") {
    // Two parallel edges with p = 0.5 on one pair: the binding row is the pair
    // constraint x_0 + x_1 <= 0.75.
    const std::vector<StochasticGraph::EdgeInput> par{{0, 0, 0.5}, {0, 0, 0.5}};
    CHECK(solve_lp(StochasticGraph(1, 1, par)).objective == doctest::Approx(0.75).epsilon(1e-12));
    // Star with three edges p = 0.5, 0.4, 0.2 at one left vertex: 1 - 0.5*0.6*0.8.
    const std::vector<StochasticGraph::EdgeInput> star{{0, 0, 0.5}, {0, 1, 0.4}, {0, 2, 0.2}};
    CHECK(solve_lp(StochasticGraph(1, 3, star)).objective == doctest::Approx(0.76).epsilon(1e-12));
}

TEST_CASE("solution invariants, idempotence and scaling") {
    const auto g = gen_random(4, 4, 20, 0.05, 0.95, 77);
    const auto sol = solve_lp(g);
    CHECK(sol.objective == doctest::Approx(std::accumulate(sol.x.begin(), sol.x.end(), 0.0)).epsilon(1e-9));
    for (double v : sol.x) CHECK(v >= -sol.tolerance);
    for (const auto& c : sol.generated_constraints) CHECK(constraint_violation(g, sol.x, c) <= sol.tolerance);
    CHECK(verify_feasible(g, sol.x, FeasibilityMode::Oracle).feasible);
    CHECK(verify_feasible(g, sol.x, FeasibilityMode::BruteForce).feasible);

    LpOptions again;
    again.initial_constraints = sol.generated_constraints;
    const auto sol2 = solve_lp(g, again);
    CHECK(sol2.outer_iterations <= 2);
    CHECK(sol2.objective == doctest::Approx(sol.objective).epsilon(1e-9));

    for (double lambda : {0.0, 0.3, 0.9, 1.0}) {
        std::vector<double> scaled(sol.x);
        for (auto& v : scaled) v *= lambda;
        CHECK(verify_feasible(g, scaled, FeasibilityMode::BruteForce).feasible);
    }
}

TEST_CASE("verify_feasible reports singleton violations and the degree cap") {
    const auto g = gen_random(3, 3, 9, 0.1, 0.8, 5);
    std::vector<double> x(g.num_edges(), 0.0);
    CHECK(verify_feasible(g, x, FeasibilityMode::BruteForce).feasible);
    x[2] = g.edge(2).p + 0.1;
    const auto rep = verify_feasible(g, x, FeasibilityMode::BruteForce);
    CHECK_FALSE(rep.feasible);
    bool singleton = false;
    for (const auto& v : rep.violations)
        if (v.constraint.edges == std::vector<EdgeId>{2}) singleton = true;
    CHECK(singleton);
    CHECK_FALSE(verify_feasible(g, x, FeasibilityMode::Oracle).feasible);

    std::vector<StochasticGraph::EdgeInput> star;
    for (std::size_t i = 0; i < 20; ++i) star.push_back({0, i, 0.1});
    const StochasticGraph big(1, 20, star);
    CHECK_THROWS_AS(verify_feasible(big, std::vector<double>(20, 0.0), FeasibilityMode::BruteForce, 16), CapabilityError);
}

TEST_CASE("exact match probabilities") {
    const std::vector<StochasticGraph::EdgeInput> one{{0, 0, 0.7}};
    CHECK(exact_match_probabilities(StochasticGraph(1, 1, one))[0] == doctest::Approx(0.7).epsilon(1e-15));
    const std::vector<StochasticGraph::EdgeInput> par{{0, 0, 0.5}, {0, 0, 0.5}};
    const auto q = exact_match_probabilities(StochasticGraph(1, 1, par));
    CHECK(q[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(q[1] == doctest::Approx(0.25).epsilon(1e-15));

    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto g = gen_random(3, 3, 10, 0.1, 1.0, seed);
        const auto probs = exact_match_probabilities(g);
        CHECK(std::accumulate(probs.begin(), probs.end(), 0.0) == doctest::Approx(oracle::expected_opt(g)).epsilon(1e-12));
        CHECK(verify_feasible(g, probs, FeasibilityMode::BruteForce).feasible);
    }
    CHECK_THROWS_AS(exact_match_probabilities(gen_random(5, 5, 23, 0.1, 0.9, 1)), CapabilityError);
}

}
