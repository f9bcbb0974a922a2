#include <cmath>
#include <vector>

#include "doctest.h"
#include "matchlab/errors.hpp"
#include "matchlab/graph.hpp"

using namespace matchlab;

TEST_SUITE("graph") {

TEST_CASE("log weight endpoints and inverse") {
    CHECK(log_weight(0.0) == 0.0);
    CHECK(std::isinf(log_weight(1.0)));
    CHECK(log_weight(0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(prob_from_weight(kInfiniteWeight) == 1.0);
    for (double p : {1e-12, 0.001, 0.3, 0.9, 0.999999}) CHECK(prob_from_weight(log_weight(p)) == doctest::Approx(p).epsilon(1e-13));
    CHECK_THROWS_AS(log_weight(1.5), DomainError);
    CHECK_THROWS_AS(log_weight(-0.1), DomainError);
}

TEST_CASE("construction validates endpoints and probabilities") {
    const std::vector<StochasticGraph::EdgeInput> ok{{0, 0, 0.5}, {0, 1, 1.0}, {1, 1, 0.0}};
    const StochasticGraph g(2, 2, ok);
    CHECK(g.num_edges() == 3);
    CHECK(g.edge(1).id == 1);
    CHECK(std::isinf(g.edge(1).w));
    CHECK(g.has_certain_edge());
    const auto adj = g.adjacency();
    CHECK(adj.left[0] == std::vector<EdgeId>{0, 1});
    CHECK(adj.right[1] == std::vector<EdgeId>{1, 2});

    const std::vector<StochasticGraph::EdgeInput> bad_end{{2, 0, 0.5}};
    CHECK_THROWS_AS(StochasticGraph(2, 2, bad_end), ValidationError);
    const std::vector<StochasticGraph::EdgeInput> bad_p{{0, 0, 1.5}};
    CHECK_THROWS_AS(StochasticGraph(2, 2, bad_p), ValidationError);
}

TEST_CASE("splitting keeps the combined existence probability") {
    const std::vector<StochasticGraph::EdgeInput> in{{0, 0, 0.6}, {1, 0, 0.2}};
    const StochasticGraph g(2, 1, in);
    const double w = g.edge(0).w;
    const std::vector<double> parts{w * 0.25, w * 0.5, w * 0.25};
    const auto s = split_edge(g, 0, parts);
    REQUIRE(s.num_edges() == 4);
    double none = 1.0;
    for (EdgeId i = 0; i < 3; ++i) {
        CHECK(s.edge(i).u == 0);
        none *= 1.0 - s.edge(i).p;
    }
    CHECK(1.0 - none == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(s.edge(3).p == 0.2);

    const std::vector<double> whole{w};
    CHECK(split_edge(g, 0, whole) == g);
    const std::vector<double> wrong{w * 0.5};
    CHECK_THROWS_AS(split_edge(g, 0, wrong), ValidationError);

    const std::vector<StochasticGraph::EdgeInput> certain{{0, 0, 1.0}};
    const StochasticGraph gc(1, 1, certain);
    CHECK_THROWS_AS(split_edge(gc, 0, whole), UnsplittableError);
    CHECK_THROWS_AS(split_all(gc, 0.1), UnsplittableError);
}

TEST_CASE("split_all caps every piece and preserves degrees") {
    const auto g = gen_random_regular(5, 2.0, 3, 7);
    const auto s = split_all(g, 0.02);
    for (const auto& e : s.edges()) CHECK(e.w <= 0.02 + 1e-12);
    CHECK(regularity_check(s, 2.0, 1e-9).regular);
}

TEST_CASE("fig1 layout") {
    const std::size_t n = 4;
    const auto g = gen_fig1_regular(n, 0.01);
    CHECK(g.n_left() == 2 * n + 1);
    CHECK(g.num_edges() == (n + 1) + 2 * n * (n + 1));
    for (std::size_t i = 0; i <= n; ++i) {
        CHECK(g.edge(i).u == i);
        CHECK(g.edge(i).v == i);
    }
    const auto rep = regularity_check(g, fig1_degree(n, 0.01), 1e-9);
    // L1 and R1 vertices see n+1 edges; L2 and R2 vertices see n+1 as well.
    CHECK(rep.regular);
    std::size_t found = 0;
    CHECK(is_fig1_layout(g, &found));
    CHECK(found == n);
    CHECK_FALSE(is_fig2_layout(g));
    CHECK_THROWS_AS(gen_fig1_regular(3, 0.0), ValidationError);
    CHECK_NOTHROW(gen_fig1_regular(3, 0.0, true));
}

TEST_CASE("fig2 layout") {
    const std::size_t n = 5;
    const auto g = gen_fig2_hardness(n);
    CHECK(g.num_edges() == n * n + 2 * n);
    for (EdgeId i = 0; i < n * n; ++i) CHECK(g.edge(i).p == 1.0);
    CHECK(g.edge(n * n).u == 0);
    CHECK(g.edge(n * n).v == n);
    CHECK(g.edge(n * n + n).u == n);
    CHECK(g.edge(n * n + n).v == 0);
    std::size_t found = 0;
    CHECK(is_fig2_layout(g, &found));
    CHECK(found == n);
    CHECK_FALSE(is_fig1_layout(g));
}

TEST_CASE("complete and random generators") {
    const auto cu = gen_complete_uniform(4);
    CHECK(cu.num_edges() == 16);
    for (const auto& e : cu.edges()) CHECK(e.p == 0.25);
    const auto cr = gen_complete_regular(6, 2.0);
    CHECK(regularity_check(cr, 2.0, 1e-12).regular);
    CHECK_FALSE(regularity_check(cr, 1.9, 1e-6).regular);
    const auto rr = gen_random_regular(8, 1.5, 4, 3);
    CHECK(rr.num_edges() == 32);
    CHECK(regularity_check(rr, 1.5, 1e-12).regular);

    const auto a = gen_random(5, 6, 40, 0.1, 0.9, 11);
    const auto b = gen_random(5, 6, 40, 0.1, 0.9, 11);
    CHECK(a == b);
    for (const auto& e : a.edges()) {
        CHECK(e.p >= 0.1);
        CHECK(e.p <= 0.9);
    }
    CHECK_FALSE(a == gen_random(5, 6, 40, 0.1, 0.9, 12));
    CHECK_THROWS_AS(gen_random(0, 3, 2, 0.1, 0.2, 1), ValidationError);
}

TEST_CASE("regularity check rejects certain edges") {
    const std::vector<StochasticGraph::EdgeInput> in{{0, 0, 1.0}};
    const StochasticGraph g(1, 1, in);
    CHECK_THROWS_AS(regularity_check(g, 1.0, 1e-9), ValidationError);
}

}
