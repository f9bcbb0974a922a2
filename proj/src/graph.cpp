#include "matchlab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "matchlab/errors.hpp"
#include "matchlab/rng.hpp"

namespace matchlab {

double log_weight(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("log_weight: probability " + std::to_string(p) + " outside [0, 1]");
    }
    if (p == 1.0) return kInfiniteWeight;
    return -std::log1p(-p);
}

double prob_from_weight(double w) {
    if (w == kInfiniteWeight) return 1.0;
    return -std::expm1(-w);
}

StochasticGraph::StochasticGraph(std::size_t n_left, std::size_t n_right,
                                 std::span<const EdgeInput> edges)
    : n_left_(n_left), n_right_(n_right) {
    edges_.reserve(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto& e = edges[i];
        if (e.u >= n_left || e.v >= n_right) {
            throw ValidationError("edge " + std::to_string(i) + ": endpoint (" +
                                  std::to_string(e.u) + ", " + std::to_string(e.v) +
                                  ") out of range");
        }
        if (!(e.p >= 0.0 && e.p <= 1.0)) {
            throw ValidationError("edge " + std::to_string(i) + ": probability " +
                                  std::to_string(e.p) + " outside [0, 1]");
        }
        edges_.push_back(EdgeSpec{i, e.u, e.v, e.p, log_weight(e.p)});
    }
}

std::vector<double> StochasticGraph::probabilities() const {
    std::vector<double> p(edges_.size());
    std::transform(edges_.begin(), edges_.end(), p.begin(), [](const EdgeSpec& e) { return e.p; });
    return p;
}

bool StochasticGraph::has_certain_edge() const noexcept {
    return std::any_of(edges_.begin(), edges_.end(), [](const EdgeSpec& e) { return e.p == 1.0; });
}

Adjacency StochasticGraph::adjacency() const {
    Adjacency adj;
    adj.left.resize(n_left_);
    adj.right.resize(n_right_);
    for (const auto& e : edges_) {
        adj.left[e.u].push_back(e.id);
        adj.right[e.v].push_back(e.id);
    }
    return adj;
}

StochasticGraph split_edge(const StochasticGraph& g, EdgeId id, std::span<const double> fractions) {
    if (id >= g.num_edges()) throw ValidationError("split_edge: no edge " + std::to_string(id));
    const EdgeSpec& target = g.edge(id);
    if (target.p == 1.0) {
        throw UnsplittableError("split_edge: edge " + std::to_string(id) +
                                " has p = 1 and no finite log-weight");
    }
    if (fractions.empty()) throw ValidationError("split_edge: empty fraction list");
    double sum = 0.0;
    for (double f : fractions) {
        if (!(f > 0.0) || !std::isfinite(f)) {
            throw ValidationError("split_edge: fractions must be positive and finite");
        }
        sum += f;
    }
    if (std::abs(sum - target.w) > 1e-9) {
        throw ValidationError("split_edge: fractions sum to " + std::to_string(sum) +
                              " but edge weight is " + std::to_string(target.w));
    }

    std::vector<StochasticGraph::EdgeInput> out;
    out.reserve(g.num_edges() + fractions.size() - 1);
    for (const auto& e : g.edges()) {
        if (e.id != id) {
            out.push_back({e.u, e.v, e.p});
            continue;
        }
        if (fractions.size() == 1) {
            out.push_back({e.u, e.v, e.p});
            continue;
        }
        for (double f : fractions) out.push_back({e.u, e.v, prob_from_weight(f)});
    }
    return StochasticGraph(g.n_left(), g.n_right(), out);
}

StochasticGraph split_all(const StochasticGraph& g, double max_weight) {
    if (!(max_weight > 0.0)) throw ValidationError("split_all: max_weight must be positive");
    std::vector<StochasticGraph::EdgeInput> out;
    for (const auto& e : g.edges()) {
        if (e.p == 1.0) throw UnsplittableError("split_all: edge with p = 1");
        if (e.w <= max_weight) {
            out.push_back({e.u, e.v, e.p});
            continue;
        }
        const auto pieces = static_cast<std::size_t>(std::ceil(e.w / max_weight));
        const double piece_p = prob_from_weight(e.w / static_cast<double>(pieces));
        for (std::size_t k = 0; k < pieces; ++k) out.push_back({e.u, e.v, piece_p});
    }
    return StochasticGraph(g.n_left(), g.n_right(), out);
}

StochasticGraph gen_fig1_regular(std::size_t n, double eps, bool allow_certain) {
    if (n < 1) throw ValidationError("gen_fig1_regular: n must be at least 1");
    const bool eps_ok = allow_certain ? (eps >= 0.0 && eps < 1.0) : (eps > 0.0 && eps < 1.0);
    if (!eps_ok) throw ValidationError("gen_fig1_regular: eps must lie in (0, 1)");

    const double p = 1.0 - eps;
    const std::size_t side = 2 * n + 1;
    std::vector<StochasticGraph::EdgeInput> edges;
    edges.reserve((n + 1) + 2 * n * (n + 1));
    for (std::size_t i = 0; i <= n; ++i) edges.push_back({i, i, p});
    // L2 x R1
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t v = 0; v <= n; ++v) edges.push_back({n + 1 + a, v, p});
    // L1 x R2
    for (std::size_t u = 0; u <= n; ++u)
        for (std::size_t b = 0; b < n; ++b) edges.push_back({u, n + 1 + b, p});
    return StochasticGraph(side, side, edges);
}

double fig1_degree(std::size_t n, double eps) {
    return static_cast<double>(n + 1) * log_weight(1.0 - eps);
}

StochasticGraph gen_fig2_hardness(std::size_t n) {
    if (n < 1) throw ValidationError("gen_fig2_hardness: n must be at least 1");
    std::vector<StochasticGraph::EdgeInput> edges;
    edges.reserve(n * n + 2 * n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) edges.push_back({u, v, 1.0});
    for (std::size_t i = 0; i < n; ++i) edges.push_back({i, n + i, 0.5});
    for (std::size_t i = 0; i < n; ++i) edges.push_back({n + i, i, 0.5});
    return StochasticGraph(2 * n, 2 * n, edges);
}

StochasticGraph gen_complete_uniform(std::size_t n) {
    if (n < 1) throw ValidationError("gen_complete_uniform: n must be at least 1");
    const double p = 1.0 / static_cast<double>(n);
    std::vector<StochasticGraph::EdgeInput> edges;
    edges.reserve(n * n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) edges.push_back({u, v, p});
    return StochasticGraph(n, n, edges);
}

StochasticGraph gen_complete_regular(std::size_t n, double c) {
    if (n < 1) throw ValidationError("gen_complete_regular: n must be at least 1");
    if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("gen_complete_regular: c must be positive");
    const double p = prob_from_weight(c / static_cast<double>(n));
    std::vector<StochasticGraph::EdgeInput> edges;
    edges.reserve(n * n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) edges.push_back({u, v, p});
    return StochasticGraph(n, n, edges);
}

StochasticGraph gen_random_regular(std::size_t n, double c, std::size_t layers, std::uint64_t seed) {
    if (n < 1 || layers < 1) throw ValidationError("gen_random_regular: n and layers must be positive");
    if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("gen_random_regular: c must be positive");
    Rng rng(seed);
    std::vector<double> weight(layers);
    for (auto& w : weight) w = 0.2 + 0.8 * rng.uniform();
    const double total = std::accumulate(weight.begin(), weight.end(), 0.0);
    for (auto& w : weight) w *= c / total;

    std::vector<StochasticGraph::EdgeInput> edges;
    edges.reserve(n * layers);
    std::vector<Vertex> perm(n);
    for (std::size_t layer = 0; layer < layers; ++layer) {
        std::iota(perm.begin(), perm.end(), Vertex{0});
        for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.bounded(i)]);
        const double p = prob_from_weight(weight[layer]);
        for (std::size_t u = 0; u < n; ++u) edges.push_back({u, perm[u], p});
    }
    return StochasticGraph(n, n, edges);
}

StochasticGraph gen_random(std::size_t n_left, std::size_t n_right, std::size_t m, double p_min,
                           double p_max, std::uint64_t seed) {
    if (!(p_min >= 0.0 && p_min <= p_max && p_max <= 1.0)) {
        throw ValidationError("gen_random: need 0 <= p_min <= p_max <= 1");
    }
    if (m > 0 && (n_left == 0 || n_right == 0)) {
        throw ValidationError("gen_random: edges requested on an empty side");
    }
    Rng rng(seed);
    std::vector<StochasticGraph::EdgeInput> edges;
    edges.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Vertex u = rng.bounded(n_left);
        const Vertex v = rng.bounded(n_right);
        const double p = std::min(p_max, p_min + (p_max - p_min) * rng.uniform());
        edges.push_back({u, v, p});
    }
    return StochasticGraph(n_left, n_right, edges);
}

RegularityReport regularity_check(const StochasticGraph& g, double c, double tol) {
    RegularityReport report;
    report.left_degree.assign(g.n_left(), 0.0);
    report.right_degree.assign(g.n_right(), 0.0);
    for (const auto& e : g.edges()) {
        if (!std::isfinite(e.w)) {
            throw ValidationError("regularity_check: edge " + std::to_string(e.id) +
                                  " has infinite log-weight");
        }
        report.left_degree[e.u] += e.w;
        report.right_degree[e.v] += e.w;
    }
    auto within = [&](double d) { return std::abs(d - c) <= tol; };
    report.regular = std::all_of(report.left_degree.begin(), report.left_degree.end(), within) &&
                     std::all_of(report.right_degree.begin(), report.right_degree.end(), within);
    return report;
}

bool is_fig1_layout(const StochasticGraph& g, std::size_t* n_out) {
    if (g.n_left() != g.n_right() || g.n_left() < 3 || g.n_left() % 2 == 0) return false;
    const std::size_t n = (g.n_left() - 1) / 2;
    if (g.num_edges() != (n + 1) + 2 * n * (n + 1)) return false;
    const auto reference = gen_fig1_regular(n, 0.5);
    for (std::size_t i = 0; i < g.num_edges(); ++i) {
        const auto& a = g.edge(i);
        const auto& b = reference.edge(i);
        if (a.u != b.u || a.v != b.v) return false;
    }
    if (n_out) *n_out = n;
    return true;
}

bool is_fig2_layout(const StochasticGraph& g, std::size_t* n_out) {
    if (g.n_left() != g.n_right() || g.n_left() < 2 || g.n_left() % 2 != 0) return false;
    const std::size_t n = g.n_left() / 2;
    if (g.num_edges() != n * n + 2 * n) return false;
    const auto reference = gen_fig2_hardness(n);
    for (std::size_t i = 0; i < g.num_edges(); ++i) {
        const auto& a = g.edge(i);
        const auto& b = reference.edge(i);
        if (a.u != b.u || a.v != b.v) return false;
    }
    if (n_out) *n_out = n;
    return true;
}

} // namespace matchlab
