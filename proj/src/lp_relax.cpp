#include "matchlab/lp_relax.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <tuple>

#include "enumeration.hpp"
#include "matchlab/errors.hpp"
#include "matchlab/simplex.hpp"

namespace matchlab {

double constraint_rhs(std::span<const double> p_values) {
    double survive = 1.0;
    for (double p : p_values) survive *= 1.0 - p;
    return 1.0 - survive;
}

SeparationResult separate(std::span<const VertexEdge> vertex_edges, double tol) {
    const std::size_t d = vertex_edges.size();
    std::vector<double> ratio(d);
    for (std::size_t i = 0; i < d; ++i) {
        const auto& e = vertex_edges[i];
        if (e.p > 0.0) {
            ratio[i] = e.x / e.p;
        } else {
            // A p = 0 edge adds its full x to the left-hand side.
            ratio[i] = e.x > 0.0 ? std::numeric_limits<double>::infinity() : e.x;
        }
    }
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (ratio[a] != ratio[b]) return ratio[a] > ratio[b];
        return vertex_edges[a].id < vertex_edges[b].id;
    });

    double sum_x = 0.0;
    double survive = 1.0;
    double best = 0.0;
    std::size_t best_len = 0;
    for (std::size_t k = 0; k < d; ++k) {
        const auto& e = vertex_edges[order[k]];
        sum_x += e.x;
        survive *= 1.0 - e.p;
        const double violation = sum_x - (1.0 - survive);
        if (violation > best) {
            best = violation;
            best_len = k + 1;
        }
    }

    SeparationResult result;
    result.violation = best;
    result.violated = best > tol;
    for (std::size_t k = 0; k < best_len; ++k) result.subset.push_back(vertex_edges[order[k]].id);
    std::sort(result.subset.begin(), result.subset.end());
    return result;
}

double constraint_violation(const StochasticGraph& g, std::span<const double> x,
                            const SubsetConstraint& c) {
    double sum_x = 0.0;
    double survive = 1.0;
    for (EdgeId id : c.edges) {
        sum_x += x[id];
        survive *= 1.0 - g.edge(id).p;
    }
    return sum_x - (1.0 - survive);
}

namespace {

std::vector<VertexEdge> vertex_view(const StochasticGraph& g, std::span<const EdgeId> ids,
                                    std::span<const double> x) {
    std::vector<VertexEdge> out;
    out.reserve(ids.size());
    for (EdgeId id : ids) out.push_back({id, g.edge(id).p, x[id]});
    return out;
}

using ConstraintKey = std::tuple<int, Vertex, std::vector<EdgeId>>;

ConstraintKey key_of(const SubsetConstraint& c) {
    return {c.side == Side::Left ? 0 : 1, c.vertex, c.edges};
}

void check_constraint(const StochasticGraph& g, const SubsetConstraint& c) {
    for (EdgeId id : c.edges) {
        if (id >= g.num_edges()) throw ValidationError("constraint references unknown edge");
        const auto& e = g.edge(id);
        const Vertex end = c.side == Side::Left ? e.u : e.v;
        if (end != c.vertex) throw ValidationError("constraint edge not incident to its vertex");
    }
}

} // namespace

LpSolution solve_lp(const StochasticGraph& g, const LpOptions& options) {
    LpSolution sol;
    sol.tolerance = options.tol;
    const std::size_t m = g.num_edges();
    if (m == 0) return sol;

    const std::size_t max_rounds =
        options.max_rounds > 0 ? options.max_rounds : 50 * (g.n_left() + g.n_right());

    DenseSimplex lp(std::vector<double>(m, 1.0));
    std::set<ConstraintKey> installed;
    std::vector<bool> covered(m, false);

    auto row_of = [&](const SubsetConstraint& c, DenseSimplex& target) {
        std::vector<double> ps;
        ps.reserve(c.edges.size());
        for (EdgeId id : c.edges) ps.push_back(g.edge(id).p);
        target.add_indicator_row(c.edges, constraint_rhs(ps));
    };
    auto install = [&](SubsetConstraint c) {
        std::sort(c.edges.begin(), c.edges.end());
        c.edges.erase(std::unique(c.edges.begin(), c.edges.end()), c.edges.end());
        if (c.edges.empty()) return false;
        if (!installed.insert(key_of(c)).second) return false;
        for (EdgeId id : c.edges) covered[id] = true;
        row_of(c, lp);
        sol.generated_constraints.push_back(std::move(c));
        return true;
    };

    for (const auto& c : options.initial_constraints) {
        check_constraint(g, c);
        install(c);
    }
    for (const auto& e : g.edges()) {
        if (!covered[e.id]) install(SubsetConstraint{Side::Left, e.u, {e.id}});
    }

    const Adjacency adj = g.adjacency();
    auto find_cuts = [&](const std::vector<double>& point) {
        std::vector<SubsetConstraint> cuts;
        auto scan = [&](Side side, const std::vector<std::vector<EdgeId>>& lists) {
            for (Vertex v = 0; v < lists.size(); ++v) {
                if (lists[v].empty()) continue;
                auto res = separate(vertex_view(g, lists[v], point), options.separation_tol);
                if (res.violated) cuts.push_back(SubsetConstraint{side, v, std::move(res.subset)});
            }
        };
        scan(Side::Left, adj.left);
        scan(Side::Right, adj.right);
        return cuts;
    };
    auto optimal_primal = [](DenseSimplex& target) {
        if (target.solve() != DenseSimplex::Status::Optimal) {
            throw NonConvergenceError("solve_lp: restricted LP did not reach optimality", target.primal());
        }
        return target.primal();
    };

    // The returned point is always a from-scratch solve of the returned rows,
    // so re-solving from them reproduces it.
    bool warm = false;
    std::vector<double> x(m, 0.0);
    for (std::size_t round = 1;; ++round) {
        x = optimal_primal(lp);
        sol.outer_iterations = round;
        auto cuts = find_cuts(x);
        if (cuts.empty() && warm) {
            DenseSimplex cold(std::vector<double>(m, 1.0));
            for (const auto& c : sol.generated_constraints) row_of(c, cold);
            x = optimal_primal(cold);
            cuts = find_cuts(x);
            lp = std::move(cold);
            warm = false;
        }
        if (cuts.empty()) break;

        if (round >= max_rounds) {
            throw NonConvergenceError("solve_lp: cutting-plane round cap reached", x);
        }
        bool added = false;
        for (auto& c : cuts) added = install(std::move(c)) || added;
        if (!added) {
            // Every violated row is already installed: the tableau has drifted.
            throw NonConvergenceError("solve_lp: separation repeats installed rows", x);
        }
        warm = true;
    }

    for (auto& v : x)
        if (v < 0.0) v = 0.0;
    sol.objective = std::accumulate(x.begin(), x.end(), 0.0);
    sol.x = std::move(x);
    return sol;
}

FeasibilityReport verify_feasible(const StochasticGraph& g, std::span<const double> x,
                                  FeasibilityMode mode, std::size_t max_degree, double tol) {
    if (x.size() != g.num_edges()) throw ValidationError("verify_feasible: x has wrong length");
    FeasibilityReport report;
    for (EdgeId id = 0; id < x.size(); ++id)
        if (x[id] < -tol) report.negative_entries.push_back(id);

    const Adjacency adj = g.adjacency();
    if (mode == FeasibilityMode::BruteForce) {
        for (const auto& lists : {&adj.left, &adj.right})
            for (const auto& ids : *lists)
                if (ids.size() > max_degree) {
                    throw CapabilityError("verify_feasible: vertex degree " +
                                          std::to_string(ids.size()) + " exceeds brute-force cap " +
                                          std::to_string(max_degree));
                }
    }

    auto check_vertex = [&](Side side, Vertex v, const std::vector<EdgeId>& ids) {
        if (ids.empty()) return;
        if (mode == FeasibilityMode::Oracle) {
            auto res = separate(vertex_view(g, ids, x), tol);
            if (res.violated) {
                report.violations.push_back({{side, v, std::move(res.subset)}, res.violation});
            }
            return;
        }
        const std::size_t d = ids.size();
        const std::uint32_t full = std::uint32_t{1} << d;
        std::vector<double> sum_x(full, 0.0);
        std::vector<double> survive(full, 1.0);
        for (std::uint32_t mask = 1; mask < full; ++mask) {
            const int low = std::countr_zero(mask);
            const std::uint32_t rest = mask & (mask - 1);
            sum_x[mask] = sum_x[rest] + x[ids[low]];
            survive[mask] = survive[rest] * (1.0 - g.edge(ids[low]).p);
            const double violation = sum_x[mask] - (1.0 - survive[mask]);
            if (violation > tol) {
                SubsetConstraint c{side, v, {}};
                for (std::size_t i = 0; i < d; ++i)
                    if (mask >> i & 1U) c.edges.push_back(ids[i]);
                std::sort(c.edges.begin(), c.edges.end());
                report.violations.push_back({std::move(c), violation});
            }
        }
    };
    for (Vertex v = 0; v < adj.left.size(); ++v) check_vertex(Side::Left, v, adj.left[v]);
    for (Vertex v = 0; v < adj.right.size(); ++v) check_vertex(Side::Right, v, adj.right[v]);

    report.feasible = report.violations.empty() && report.negative_entries.empty();
    return report;
}

std::vector<double> exact_match_probabilities(const StochasticGraph& g) {
    if (g.num_edges() > detail::kMaxEnumerationEdges) {
        throw CapabilityError("exact_match_probabilities: " + std::to_string(g.num_edges()) +
                              " edges exceed the enumeration cap of " +
                              std::to_string(detail::kMaxEnumerationEdges));
    }
    const detail::RealizationTable table(g);
    const std::size_t m = g.num_edges();
    std::vector<long double> acc(m, 0.0L);
    for (std::uint32_t mask = 0; mask < table.num_masks(); ++mask) {
        const double prob = table.probability(mask);
        if (prob == 0.0) continue;
        // Walking edges in id order and keeping an edge whenever some maximum
        // matching of the remainder still contains it yields the
        // lexicographically smallest maximum matching.
        std::uint32_t rest = mask;
        while (rest != 0) {
            const int e = std::countr_zero(rest);
            const std::uint32_t without = rest & ~table.conflicts(static_cast<std::size_t>(e));
            if (1 + table.max_matching(without) == table.max_matching(rest)) {
                acc[static_cast<std::size_t>(e)] += prob;
                rest = without;
            } else {
                rest &= rest - 1;
            }
        }
    }
    return {acc.begin(), acc.end()};
}

} // namespace matchlab
