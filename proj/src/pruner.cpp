#include "matchlab/pruner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>

#include "matchlab/errors.hpp"

namespace matchlab {

ArrivalOrder::ArrivalOrder(std::vector<EdgeId> sequence) : sequence_(std::move(sequence)) {
    std::vector<bool> seen(sequence_.size(), false);
    for (EdgeId e : sequence_) {
        if (e >= sequence_.size() || seen[e]) {
            throw ValidationError("ArrivalOrder: sequence is not a permutation of [0, " +
                                  std::to_string(sequence_.size()) + ")");
        }
        seen[e] = true;
    }
}

std::vector<std::size_t> ArrivalOrder::positions() const {
    std::vector<std::size_t> pos(sequence_.size());
    for (std::size_t i = 0; i < sequence_.size(); ++i) pos[sequence_[i]] = i;
    return pos;
}

double PrunedGraph::drop_probability(EdgeId e) const {
    const double p = base.edge(e).p;
    if (p <= 0.0) return 0.0;
    return 1.0 - y.at(e) / p;
}

PrunedGraph prune(const StochasticGraph& g, std::span<const double> x, double c) {
    if (x.size() != g.num_edges()) throw ValidationError("prune: x has wrong length");
    if (!(c > 0.0)) throw ValidationError("prune: c must be positive");
    PrunedGraph pg{g, std::vector<double>(x.size()), std::vector<double>(x.begin(), x.end()), c};
    for (const auto& e : g.edges()) {
        const double xe = x[e.id];
        if (!(xe >= 0.0)) {
            throw ValidationError("prune: x[" + std::to_string(e.id) + "] = " + std::to_string(xe) +
                                  " is negative");
        }
        const double cap = xe == 0.0 ? 0.0 : -std::expm1(-c * xe);
        pg.y[e.id] = std::min(e.p, cap);
    }
    return pg;
}

PrunedGraph unpruned(const StochasticGraph& g) {
    auto p = g.probabilities();
    return PrunedGraph{g, p, p, std::numeric_limits<double>::infinity()};
}

RegularXY regular_xy(const StochasticGraph& g, double c, double tol) {
    const auto report = regularity_check(g, c, tol);
    if (!report.regular) {
        throw ValidationError("regular_xy: graph is not log-normalized " + std::to_string(c) +
                              "-regular");
    }
    RegularXY out;
    out.x.reserve(g.num_edges());
    out.y.reserve(g.num_edges());
    for (const auto& e : g.edges()) {
        out.x.push_back(e.w / c);
        out.y.push_back(e.p);
    }
    return out;
}

ArrivalOrder batch_order(const StochasticGraph& g, const ArrivalOrder& order) {
    if (order.size() != g.num_edges()) throw ValidationError("batch_order: order length mismatch");
    std::map<std::pair<Vertex, Vertex>, std::size_t> class_of;
    std::vector<std::vector<EdgeId>> classes;
    for (EdgeId e : order.sequence()) {
        const auto& spec = g.edge(e);
        auto [it, fresh] = class_of.try_emplace({spec.u, spec.v}, classes.size());
        if (fresh) classes.emplace_back();
        classes[it->second].push_back(e);
    }
    std::vector<EdgeId> out;
    out.reserve(order.size());
    for (const auto& cls : classes) out.insert(out.end(), cls.begin(), cls.end());
    return ArrivalOrder(std::move(out));
}

} // namespace matchlab
