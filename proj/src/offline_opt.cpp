#include "matchlab/offline_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "matchlab/errors.hpp"
#include "matchlab/parallel.hpp"
#include "matchlab/rng.hpp"
#include "enumeration.hpp"
#include "sampling.hpp"

namespace matchlab {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
constexpr std::uint64_t kOptStreamSalt = 0x6f7074u;  // "opt"

/// Reusable Hopcroft-Karp state; edges are ids into the caller's endpoint arrays.
class HopcroftKarp {
public:
    HopcroftKarp(std::size_t n_left, std::size_t n_right)
        : start_(n_left + 1), match_left_(n_left), match_right_(n_right), dist_(n_left),
          cursor_(n_left) {}

    std::size_t solve(std::span<const EdgeId> edges, const Vertex* eu, const Vertex* ev) {
        eu_ = eu;
        ev_ = ev;
        const std::size_t nl = match_left_.size();
        std::fill(start_.begin(), start_.end(), 0);
        for (EdgeId e : edges) ++start_[eu[e] + 1];
        for (std::size_t u = 0; u < nl; ++u) start_[u + 1] += start_[u];
        adj_.resize(edges.size());
        std::copy(start_.begin(), start_.end() - 1, cursor_.begin());
        for (EdgeId e : edges) adj_[cursor_[eu[e]]++] = e;

        std::fill(match_left_.begin(), match_left_.end(), kNone);
        std::fill(match_right_.begin(), match_right_.end(), kNone);
        std::size_t size = 0;
        for (EdgeId e : edges) {
            if (match_left_[eu[e]] == kNone && match_right_[ev[e]] == kNone) {
                match_left_[eu[e]] = e;
                match_right_[ev[e]] = eu[e];
                ++size;
            }
        }
        while (layer()) {
            std::copy(start_.begin(), start_.end() - 1, cursor_.begin());
            for (Vertex u = 0; u < nl; ++u)
                if (match_left_[u] == kNone && augment(u)) ++size;
        }
        return size;
    }

    /// Edge matched at left vertex u, or kNone.
    EdgeId matched_edge(Vertex u) const { return match_left_[u]; }

private:
    bool layer() {
        const std::size_t nl = match_left_.size();
        queue_.clear();
        for (Vertex u = 0; u < nl; ++u) {
            if (match_left_[u] == kNone) {
                dist_[u] = 0;
                queue_.push_back(u);
            } else {
                dist_[u] = kNone;
            }
        }
        bool found = false;
        for (std::size_t head = 0; head < queue_.size(); ++head) {
            const Vertex u = queue_[head];
            for (std::size_t i = start_[u]; i < start_[u + 1]; ++i) {
                const std::size_t w = match_right_[ev_[adj_[i]]];
                if (w == kNone) {
                    found = true;
                } else if (dist_[w] == kNone) {
                    dist_[w] = dist_[u] + 1;
                    queue_.push_back(w);
                }
            }
        }
        return found;
    }

    bool augment(Vertex root) {
        stack_.clear();
        stack_.push_back(root);
        while (!stack_.empty()) {
            const Vertex u = stack_.back();
            if (cursor_[u] == start_[u + 1]) {
                dist_[u] = kNone;
                stack_.pop_back();
                continue;
            }
            const EdgeId e = adj_[cursor_[u]];
            const std::size_t w = match_right_[ev_[e]];
            if (w == kNone) {
                for (Vertex x : stack_) {
                    const EdgeId ex = adj_[cursor_[x]];
                    match_left_[x] = ex;
                    match_right_[ev_[ex]] = x;
                }
                return true;
            }
            if (dist_[w] == dist_[u] + 1) {
                stack_.push_back(w);
            } else {
                ++cursor_[u];
            }
        }
        return false;
    }

    const Vertex* eu_ = nullptr;
    const Vertex* ev_ = nullptr;
    std::vector<std::size_t> start_;
    std::vector<EdgeId> adj_;
    std::vector<EdgeId> match_left_;
    std::vector<std::size_t> match_right_;
    std::vector<std::size_t> dist_;
    std::vector<std::size_t> cursor_;
    std::vector<Vertex> queue_;
    std::vector<Vertex> stack_;
};

struct Endpoints {
    std::vector<Vertex> u;
    std::vector<Vertex> v;
};

Endpoints endpoints_of(const StochasticGraph& g) {
    Endpoints ep;
    ep.u.resize(g.num_edges());
    ep.v.resize(g.num_edges());
    for (const auto& e : g.edges()) {
        ep.u[e.id] = e.u;
        ep.v[e.id] = e.v;
    }
    return ep;
}

struct SumAcc {
    std::uint64_t sum = 0;
    std::uint64_t sum_sq = 0;
};

McEstimate mc_opt_at(const StochasticGraph& g, std::span<const double> probs, const SimOptions& options) {
    if (options.trials < 1) throw ValidationError("mc_opt: trials must be at least 1");
    const auto th = detail::thresholds_of(probs);
    const auto ep = endpoints_of(g);
    const std::size_t m = g.num_edges();
    auto body = [&](SumAcc& acc, std::uint64_t begin, std::uint64_t end) {
        HopcroftKarp hk(g.n_left(), g.n_right());
        std::vector<std::uint8_t> exists(m);
        std::vector<EdgeId> realized;
        realized.reserve(m);
        for (std::uint64_t t = begin; t < end; ++t) {
            Rng rng(trial_seed(options.seed, t));
            detail::draw_realization(rng, th, exists.data());
            realized.clear();
            for (EdgeId id = 0; id < m; ++id)
                if (exists[id]) realized.push_back(id);
            const std::uint64_t size = hk.solve(realized, ep.u.data(), ep.v.data());
            acc.sum += size;
            acc.sum_sq += size * size;
        }
    };
    std::uint64_t sum = 0, sum_sq = 0;
    for (const auto& b : run_blocks(options.trials, options.threads, SumAcc{}, body)) {
        sum += b.sum;
        sum_sq += b.sum_sq;
    }
    return estimate_from_sums(sum, sum_sq, options.trials, options.seed);
}

} // namespace

MatchingResult max_matching(std::span<const std::pair<Vertex, Vertex>> edges, std::size_t n_left,
                            std::size_t n_right) {
    Endpoints ep;
    std::vector<EdgeId> ids(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (edges[i].first >= n_left || edges[i].second >= n_right) {
            throw ValidationError("max_matching: edge " + std::to_string(i) + " has an endpoint out of range");
        }
        ep.u.push_back(edges[i].first);
        ep.v.push_back(edges[i].second);
        ids[i] = i;
    }
    HopcroftKarp hk(n_left, n_right);
    MatchingResult res;
    res.size = hk.solve(ids, ep.u.data(), ep.v.data());
    res.matched_left.assign(n_left, false);
    res.matched_right.assign(n_right, false);
    for (Vertex u = 0; u < n_left; ++u) {
        const EdgeId e = hk.matched_edge(u);
        if (e == kNone) continue;
        res.matched_edges.push_back(e);
        res.matched_left[u] = true;
        res.matched_right[ep.v[e]] = true;
    }
    std::sort(res.matched_edges.begin(), res.matched_edges.end());
    return res;
}

McEstimate mc_opt(const StochasticGraph& g, const SimOptions& options) {
    const auto p = g.probabilities();
    return mc_opt_at(g, p, options);
}

McEstimate mc_opt(const PrunedGraph& pg, const SimOptions& options, bool use_pruned) {
    if (!use_pruned) return mc_opt(pg.base, options);
    if (pg.y.size() != pg.base.num_edges()) throw ValidationError("pruned graph: y has wrong length");
    return mc_opt_at(pg.base, pg.y, options);
}

double exact_expected_opt(const StochasticGraph& g) {
    const detail::RealizationTable table(g);
    long double total = 0.0L;
    for (std::uint32_t mask = 1; mask < table.num_masks(); ++mask)
        total += static_cast<long double>(table.probability(mask)) * table.max_matching(mask);
    return static_cast<double>(total);
}

RatioReport competitive_report(const McEstimate& alg, const McEstimate& opt, bool opt_exact) {
    if (!(opt.mean > 0.0)) {
        throw UndefinedError("competitive ratio undefined: OPT mean is " + std::to_string(opt.mean));
    }
    RatioReport r;
    r.alg = alg;
    r.opt = opt;
    r.opt_exact = opt_exact;
    if (opt_exact) r.opt.std_error = 0.0;
    r.ratio = alg.mean / opt.mean;
    const double a_lo = alg.mean - 3.0 * alg.std_error;
    const double a_hi = alg.mean + 3.0 * alg.std_error;
    const double o_lo = r.opt.mean - 3.0 * r.opt.std_error;
    const double o_hi = r.opt.mean + 3.0 * r.opt.std_error;
    r.ratio_ci_low = std::max(0.0, a_lo / o_hi);
    r.ratio_ci_high = o_lo > 0.0 ? std::max(0.0, a_hi / o_lo) : std::numeric_limits<double>::infinity();
    return r;
}

namespace {

struct CoupledAcc {
    std::uint64_t alg_sum = 0;
    std::uint64_t alg_sq = 0;
    std::uint64_t opt_sum = 0;
    std::uint64_t opt_sq = 0;
    std::uint64_t half_violations = 0;
    std::uint64_t alg_above_opt = 0;
};

} // namespace

CoupledRun coupled_run(const PrunedGraph& pg, const OrderPolicy& order, const CoupledOptions& options) {
    const auto& sim = options.sim;
    if (sim.trials < 1) throw ValidationError("coupled_run: trials must be at least 1");
    const auto& g = pg.base;
    const std::size_t m = g.num_edges();
    if (pg.y.size() != m) throw ValidationError("pruned graph: y has wrong length");
    const ArrivalOrder* fixed = std::get_if<ArrivalOrder>(&order);
    if (fixed && fixed->size() != m) throw ValidationError("coupled_run: order length mismatch");
    const auto th_pruned = detail::thresholds_of(pg.y);
    const auto p = g.probabilities();
    const auto th_original = detail::thresholds_of(p);
    const auto ep = endpoints_of(g);

    auto body = [&](CoupledAcc& acc, std::uint64_t begin, std::uint64_t end) {
        HopcroftKarp hk(g.n_left(), g.n_right());
        std::vector<std::uint8_t> pruned(m), original(m);
        std::vector<EdgeId> arrived, realized;
        arrived.reserve(m);
        realized.reserve(m);
        detail::StampSet left(g.n_left()), right(g.n_right());
        for (std::uint64_t t = begin; t < end; ++t) {
            Rng rng(trial_seed(sim.seed, t));
            if (options.common_random_numbers) {
                detail::draw_coupled(rng, th_pruned, th_original, pruned.data(), original.data());
            } else {
                detail::draw_realization(rng, th_pruned, pruned.data());
                Rng opt_rng(trial_seed(sim.seed ^ kOptStreamSalt, t));
                detail::draw_realization(opt_rng, th_original, original.data());
            }
            arrived.clear();
            if (fixed) {
                for (EdgeId id : fixed->sequence())
                    if (pruned[id]) arrived.push_back(id);
            } else {
                for (EdgeId id = 0; id < m; ++id)
                    if (pruned[id]) arrived.push_back(id);
                detail::shuffle(rng, arrived);
            }
            left.next_round();
            right.next_round();
            std::uint64_t alg = 0;
            for (EdgeId id : arrived) {
                if (left.contains(ep.u[id]) || right.contains(ep.v[id])) continue;
                left.insert(ep.u[id]);
                right.insert(ep.v[id]);
                ++alg;
            }

            realized.clear();
            for (EdgeId id = 0; id < m; ++id)
                if (pruned[id]) realized.push_back(id);
            const std::uint64_t pruned_max = hk.solve(realized, ep.u.data(), ep.v.data());
            if (2 * alg < pruned_max) ++acc.half_violations;

            realized.clear();
            for (EdgeId id = 0; id < m; ++id)
                if (original[id]) realized.push_back(id);
            const std::uint64_t opt = hk.solve(realized, ep.u.data(), ep.v.data());
            if (options.common_random_numbers && alg > opt) ++acc.alg_above_opt;

            acc.alg_sum += alg;
            acc.alg_sq += alg * alg;
            acc.opt_sum += opt;
            acc.opt_sq += opt * opt;
        }
    };

    CoupledAcc total;
    for (const auto& b : run_blocks(sim.trials, sim.threads, CoupledAcc{}, body)) {
        total.alg_sum += b.alg_sum;
        total.alg_sq += b.alg_sq;
        total.opt_sum += b.opt_sum;
        total.opt_sq += b.opt_sq;
        total.half_violations += b.half_violations;
        total.alg_above_opt += b.alg_above_opt;
    }
    CoupledRun run;
    run.alg = estimate_from_sums(total.alg_sum, total.alg_sq, sim.trials, sim.seed);
    run.opt = estimate_from_sums(total.opt_sum, total.opt_sq, sim.trials, sim.seed);
    run.half_guarantee_violations = total.half_violations;
    run.alg_above_opt = total.alg_above_opt;
    return run;
}

PipelineReport prune_and_greedy(const StochasticGraph& g, double c, const OrderPolicy& order,
                                const CoupledOptions& options, const LpOptions& lp_options) {
    PipelineReport report;
    report.lp = solve_lp(g, lp_options);
    report.pruned = prune(g, report.lp.x, c);
    report.run = coupled_run(report.pruned, order, options);
    report.ratio = competitive_report(report.run.alg, report.run.opt);
    return report;
}

} // namespace matchlab
