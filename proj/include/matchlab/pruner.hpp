#pragma once

#include <span>
#include <vector>

#include "matchlab/graph.hpp"

namespace matchlab {

/// Edge sequence in which the online algorithm sees the edges.
class ArrivalOrder {
public:
    ArrivalOrder() = default;
    /// Throws ValidationError unless `sequence` is a permutation of [0, m).
    explicit ArrivalOrder(std::vector<EdgeId> sequence);

    std::span<const EdgeId> sequence() const noexcept { return sequence_; }
    std::size_t size() const noexcept { return sequence_.size(); }
    EdgeId operator[](std::size_t i) const { return sequence_[i]; }

    /// position()[e] = index of edge e in the sequence.
    std::vector<std::size_t> positions() const;

    friend bool operator==(const ArrivalOrder&, const ArrivalOrder&) = default;

private:
    std::vector<EdgeId> sequence_;
};

/// A graph with per-edge reduced probabilities y_e <= p_e.
struct PrunedGraph {
    StochasticGraph base;
    std::vector<double> y;
    std::vector<double> x;
    double c = 0.0;

    /// Probability that a realized edge is dropped online, 1 - y/p.
    double drop_probability(EdgeId e) const;
};

/// y_e = min(p_e, 1 - e^{-c x_e}).
PrunedGraph prune(const StochasticGraph& g, std::span<const double> x, double c);

/// Plain Greedy on g: y = p, x = p, c = +inf (the pruning rule is then the identity).
PrunedGraph unpruned(const StochasticGraph& g);

struct RegularXY {
    std::vector<double> x;
    std::vector<double> y;
};

/// x_e = w_e / c and y_e = p_e for a c-regular graph.
RegularXY regular_xy(const StochasticGraph& g, double c, double tol = 1e-9);

/// Makes every parallel class E_uv contiguous. Each class is placed where its
/// earliest member appears; the relative order inside a class is kept.
ArrivalOrder batch_order(const StochasticGraph& g, const ArrivalOrder& order);

} // namespace matchlab
