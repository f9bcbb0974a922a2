#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace matchlab {

using EdgeId = std::size_t;
using Vertex = std::size_t;

enum class Side { Left, Right };

inline constexpr double kInfiniteWeight = std::numeric_limits<double>::infinity();

/// Log-normalized weight -ln(1 - p); +inf at p = 1. Throws DomainError outside [0, 1].
double log_weight(double p);

/// Inverse of log_weight: 1 - e^{-w}.
double prob_from_weight(double w);

struct EdgeSpec {
    EdgeId id = 0;
    Vertex u = 0;  ///< left endpoint
    Vertex v = 0;  ///< right endpoint
    double p = 0;  ///< existence probability
    double w = 0;  ///< log-normalized weight, derived from p

    friend bool operator==(const EdgeSpec&, const EdgeSpec&) = default;
};

/// Per-vertex incident edge lists, in listed edge order.
struct Adjacency {
    std::vector<std::vector<EdgeId>> left;
    std::vector<std::vector<EdgeId>> right;
};

/// Bipartite multigraph whose edges exist independently with probability p.
/// Immutable once built; the listed edge order is the default arrival order.
class StochasticGraph {
public:
    struct EdgeInput {
        Vertex u;
        Vertex v;
        double p;
    };

    StochasticGraph() = default;

    /// Validates endpoints and probabilities; ids and weights are assigned here.
    StochasticGraph(std::size_t n_left, std::size_t n_right, std::span<const EdgeInput> edges);

    std::size_t n_left() const noexcept { return n_left_; }
    std::size_t n_right() const noexcept { return n_right_; }
    std::size_t num_edges() const noexcept { return edges_.size(); }
    std::span<const EdgeSpec> edges() const noexcept { return edges_; }
    const EdgeSpec& edge(EdgeId id) const { return edges_.at(id); }

    std::vector<double> probabilities() const;
    bool has_certain_edge() const noexcept;

    Adjacency adjacency() const;

    friend bool operator==(const StochasticGraph&, const StochasticGraph&) = default;

private:
    std::size_t n_left_ = 0;
    std::size_t n_right_ = 0;
    std::vector<EdgeSpec> edges_;
};

/// Outcome of every edge's coin flip, indexed by edge id.
struct Realization {
    std::vector<bool> exists;
};

/// Replaces edge `id` by consecutive parallel edges with the given log-weights.
StochasticGraph split_edge(const StochasticGraph& g, EdgeId id, std::span<const double> fractions);

/// Splits every edge into ceil(w / max_weight) equal parallel pieces.
StochasticGraph split_all(const StochasticGraph& g, double max_weight);

/// Greedy-on-regular hard instance. Left: u_0..u_n (L1), u'_0..u'_{n-1} (L2) at
/// indices n+1..2n; right side likewise. Red edges (u_i, v_i) come first, then
/// L2 x R1, then L1 x R2, all with probability 1 - eps.
StochasticGraph gen_fig1_regular(std::size_t n, double eps, bool allow_certain = false);

/// Common log-degree of gen_fig1_regular(n, eps).
double fig1_degree(std::size_t n, double eps);

/// Hardness instance for any online algorithm. L1 = 0..n-1, L2 = n..2n-1 (same
/// on the right). Type-1 edges L1 x R1 (p = 1) in row-major order, then type-2
/// (u_i, v'_i) and type-3 (u'_i, v_i) with p = 1/2.
StochasticGraph gen_fig2_hardness(std::size_t n);

/// K_{n,n} with every p = 1/n, row-major.
StochasticGraph gen_complete_uniform(std::size_t n);

/// K_{n,n} in which each vertex has log-degree c (edge weight c / n).
StochasticGraph gen_complete_regular(std::size_t n, double c);

/// Union of `layers` random perfect matchings on n + n vertices with random
/// positive layer weights summing to c, so every vertex has log-degree c.
StochasticGraph gen_random_regular(std::size_t n, double c, std::size_t layers, std::uint64_t seed);

StochasticGraph gen_random(std::size_t n_left, std::size_t n_right, std::size_t m, double p_min,
                           double p_max, std::uint64_t seed);

struct RegularityReport {
    bool regular = false;
    std::vector<double> left_degree;
    std::vector<double> right_degree;
};

/// Checks that every vertex's summed log-weight is within tol of c.
RegularityReport regularity_check(const StochasticGraph& g, double c, double tol);

/// True when g has the layout produced by gen_fig1_regular for some n.
bool is_fig1_layout(const StochasticGraph& g, std::size_t* n_out = nullptr);

/// True when g has the layout produced by gen_fig2_hardness for some n.
bool is_fig2_layout(const StochasticGraph& g, std::size_t* n_out = nullptr);

} // namespace matchlab
