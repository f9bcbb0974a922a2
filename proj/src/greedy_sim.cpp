#include "matchlab/greedy_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "matchlab/errors.hpp"
#include "matchlab/parallel.hpp"
#include "matchlab/rng.hpp"
#include "sampling.hpp"

namespace matchlab {

McEstimate estimate_from_sums(long double sum, long double sum_sq, std::uint64_t trials,
                              std::uint64_t seed) {
    McEstimate est;
    est.trials = trials;
    est.seed = seed;
    if (trials == 0) return est;
    const long double n = static_cast<long double>(trials);
    const long double mean = sum / n;
    est.mean = static_cast<double>(mean);
    if (trials > 1) {
        long double var = (sum_sq - sum * mean) / (n - 1);
        if (var < 0) var = 0;
        est.std_error = static_cast<double>(std::sqrt(var / n));
    }
    return est;
}

ArrivalOrder order_as_listed(std::size_t m) {
    std::vector<EdgeId> seq(m);
    std::iota(seq.begin(), seq.end(), EdgeId{0});
    return ArrivalOrder(std::move(seq));
}

ArrivalOrder order_random(std::size_t m, std::uint64_t seed) {
    std::vector<EdgeId> seq(m);
    std::iota(seq.begin(), seq.end(), EdgeId{0});
    Rng rng(seed);
    detail::shuffle(rng, seq);
    return ArrivalOrder(std::move(seq));
}

namespace {

template <class Pred>
ArrivalOrder class_first(const StochasticGraph& g, Pred in_class) {
    std::vector<EdgeId> seq;
    seq.reserve(g.num_edges());
    for (const auto& e : g.edges())
        if (in_class(e)) seq.push_back(e.id);
    for (const auto& e : g.edges())
        if (!in_class(e)) seq.push_back(e.id);
    return ArrivalOrder(std::move(seq));
}

void check_order(const PrunedGraph& pg, const ArrivalOrder& order) {
    if (order.size() != pg.base.num_edges()) {
        throw ValidationError("arrival order has " + std::to_string(order.size()) +
                              " entries for " + std::to_string(pg.base.num_edges()) + " edges");
    }
    if (pg.y.size() != pg.base.num_edges()) throw ValidationError("pruned graph: y has wrong length");
}

} // namespace

ArrivalOrder order_red_first(const StochasticGraph& g) {
    std::size_t n = 0;
    if (!is_fig1_layout(g, &n)) {
        throw ValidationError("order_red_first: instance is not a gen_fig1_regular layout");
    }
    return class_first(g, [n](const EdgeSpec& e) { return e.u <= n && e.v <= n; });
}

ArrivalOrder order_type1_first(const StochasticGraph& g) {
    std::size_t n = 0;
    if (!is_fig2_layout(g, &n)) {
        throw ValidationError("order_type1_first: instance is not a gen_fig2_hardness layout");
    }
    return class_first(g, [n](const EdgeSpec& e) { return e.u < n && e.v < n; });
}

MatchingResult run_greedy(const PrunedGraph& pg, const ArrivalOrder& order,
                          const Realization& realization) {
    check_order(pg, order);
    const auto& g = pg.base;
    if (realization.exists.size() != g.num_edges()) {
        throw ValidationError("run_greedy: realization has wrong length");
    }
    MatchingResult res;
    res.matched_left.assign(g.n_left(), false);
    res.matched_right.assign(g.n_right(), false);
    for (EdgeId id : order.sequence()) {
        if (!realization.exists[id]) continue;
        const auto& e = g.edge(id);
        if (res.matched_left[e.u] || res.matched_right[e.v]) continue;
        res.matched_left[e.u] = true;
        res.matched_right[e.v] = true;
        res.matched_edges.push_back(id);
    }
    res.size = res.matched_edges.size();
    return res;
}

namespace {

struct GreedyAcc {
    std::uint64_t sum = 0;
    std::uint64_t sum_sq = 0;
    std::vector<std::uint64_t> left;
    std::vector<std::uint64_t> right;
};

} // namespace

GreedyReport mc_greedy(const PrunedGraph& pg, const OrderPolicy& order, const SimOptions& options) {
    if (options.trials < 1) throw ValidationError("mc_greedy: trials must be at least 1");
    const auto& g = pg.base;
    const ArrivalOrder* fixed = std::get_if<ArrivalOrder>(&order);
    if (fixed) check_order(pg, *fixed);
    const auto th = detail::thresholds_of(pg.y);
    const std::size_t m = g.num_edges();
    std::vector<Vertex> eu(m), ev(m);
    for (const auto& e : g.edges()) {
        eu[e.id] = e.u;
        ev[e.id] = e.v;
    }

    GreedyAcc init;
    init.left.assign(g.n_left(), 0);
    init.right.assign(g.n_right(), 0);

    auto body = [&](GreedyAcc& acc, std::uint64_t begin, std::uint64_t end) {
        std::vector<std::uint8_t> exists(m);
        std::vector<EdgeId> arrived;
        arrived.reserve(m);
        detail::StampSet left(g.n_left()), right(g.n_right());
        for (std::uint64_t t = begin; t < end; ++t) {
            Rng rng(trial_seed(options.seed, t));
            detail::draw_realization(rng, th, exists.data());
            arrived.clear();
            if (fixed) {
                for (EdgeId id : fixed->sequence())
                    if (exists[id]) arrived.push_back(id);
            } else {
                for (EdgeId id = 0; id < m; ++id)
                    if (exists[id]) arrived.push_back(id);
                detail::shuffle(rng, arrived);
            }
            left.next_round();
            right.next_round();
            std::uint64_t size = 0;
            for (EdgeId id : arrived) {
                const Vertex u = eu[id], v = ev[id];
                if (left.contains(u) || right.contains(v)) continue;
                left.insert(u);
                right.insert(v);
                ++acc.left[u];
                ++acc.right[v];
                ++size;
            }
            acc.sum += size;
            acc.sum_sq += size * size;
        }
    };
    const auto blocks = run_blocks(options.trials, options.threads, init, body);

    GreedyAcc total = init;
    for (const auto& b : blocks) {
        total.sum += b.sum;
        total.sum_sq += b.sum_sq;
        for (std::size_t i = 0; i < total.left.size(); ++i) total.left[i] += b.left[i];
        for (std::size_t i = 0; i < total.right.size(); ++i) total.right[i] += b.right[i];
    }

    GreedyReport report;
    report.estimate = estimate_from_sums(total.sum, total.sum_sq, options.trials, options.seed);
    const double n = static_cast<double>(options.trials);
    for (auto c : total.left) report.left_match_frequency.push_back(static_cast<double>(c) / n);
    for (auto c : total.right) report.right_match_frequency.push_back(static_cast<double>(c) / n);
    return report;
}

QValues q_values(const PrunedGraph& pg, const ArrivalOrder& order) {
    check_order(pg, order);
    const auto& g = pg.base;
    QValues q;
    q.left.assign(g.num_edges(), 1.0);
    q.right.assign(g.num_edges(), 1.0);
    std::vector<double> left_survive(g.n_left(), 1.0), right_survive(g.n_right(), 1.0);
    for (EdgeId id : order.sequence()) {
        const auto& e = g.edge(id);
        q.left[id] = left_survive[e.u];
        q.right[id] = right_survive[e.v];
        left_survive[e.u] *= 1.0 - pg.y[id];
        right_survive[e.v] *= 1.0 - pg.y[id];
    }
    return q;
}

namespace {

double first_order_term(double x, double q, double y) {
    if (!(x > 0.0)) return 0.0;
    return -x * std::expm1(-q * y / x);
}

} // namespace

double lemma1_lower_bound(const PrunedGraph& pg, const ArrivalOrder& order) {
    const auto q = q_values(pg, order);
    if (pg.x.size() != pg.base.num_edges()) throw ValidationError("pruned graph: x has wrong length");
    double total = 0.0;
    for (EdgeId id = 0; id < pg.base.num_edges(); ++id)
        total += first_order_term(pg.x[id], q.left[id], pg.y[id]);
    return total;
}

double second_order_coefficient(double c) { return std::exp(-c - c * std::exp(-c)); }

namespace {

struct EventAcc {
    std::vector<std::uint64_t> unmatched;  // per edge
    std::vector<double> a_sum, a_sq, ab_sum;  // per left vertex
    std::vector<std::uint64_t> b_sum;
    std::uint64_t alg_sum = 0;
    std::uint64_t alg_sq = 0;
    double d_sum = 0.0;
    double d_sq = 0.0;
};

} // namespace

EventEstimates estimate_event_terms(const PrunedGraph& pg, const ArrivalOrder& order,
                                    const SimOptions& options, double coeff_c,
                                    double squared_coeff) {
    if (options.trials < 1) throw ValidationError("estimate_event_terms: trials must be at least 1");
    check_order(pg, order);
    if (pg.x.size() != pg.base.num_edges()) throw ValidationError("pruned graph: x has wrong length");
    const auto& g = pg.base;
    const std::size_t m = g.num_edges();
    const std::size_t nl = g.n_left();
    const double kappa = second_order_coefficient(coeff_c);
    const auto th = detail::thresholds_of(pg.y);
    std::vector<Vertex> eu(m), ev(m);
    for (const auto& e : g.edges()) {
        eu[e.id] = e.u;
        ev[e.id] = e.v;
    }

    EventAcc init;
    init.unmatched.assign(m, 0);
    init.a_sum.assign(nl, 0.0);
    init.a_sq.assign(nl, 0.0);
    init.ab_sum.assign(nl, 0.0);
    init.b_sum.assign(nl, 0);

    auto body = [&](EventAcc& acc, std::uint64_t begin, std::uint64_t end) {
        std::vector<std::uint8_t> exists(m);
        std::vector<double> a(nl);
        detail::StampSet left(nl), right(g.n_right());
        for (std::uint64_t t = begin; t < end; ++t) {
            Rng rng(trial_seed(options.seed, t));
            detail::draw_realization(rng, th, exists.data());
            left.next_round();
            right.next_round();
            std::fill(a.begin(), a.end(), 0.0);
            std::uint64_t size = 0;
            for (EdgeId id : order.sequence()) {
                const Vertex u = eu[id];
                if (left.contains(u)) continue;
                ++acc.unmatched[id];
                a[u] += pg.y[id];
                const Vertex v = ev[id];
                if (exists[id] && !right.contains(v)) {
                    left.insert(u);
                    right.insert(v);
                    ++size;
                }
            }
            double weighted = 0.0;
            for (Vertex u = 0; u < nl; ++u) {
                const double b = left.contains(u) ? 0.0 : 1.0;
                acc.a_sum[u] += a[u];
                acc.a_sq[u] += a[u] * a[u];
                acc.ab_sum[u] += a[u] * b;
                acc.b_sum[u] += b > 0.0 ? 1 : 0;
                weighted += a[u];
            }
            const double d = static_cast<double>(size) - kappa * weighted;
            acc.alg_sum += size;
            acc.alg_sq += size * size;
            acc.d_sum += d;
            acc.d_sq += d * d;
        }
    };
    const auto blocks = run_blocks(options.trials, options.threads, init, body);

    EventAcc total = init;
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i < m; ++i) total.unmatched[i] += b.unmatched[i];
        for (std::size_t u = 0; u < nl; ++u) {
            total.a_sum[u] += b.a_sum[u];
            total.a_sq[u] += b.a_sq[u];
            total.ab_sum[u] += b.ab_sum[u];
            total.b_sum[u] += b.b_sum[u];
        }
        total.alg_sum += b.alg_sum;
        total.alg_sq += b.alg_sq;
        total.d_sum += b.d_sum;
        total.d_sq += b.d_sq;
    }

    const double n = static_cast<double>(options.trials);
    const auto q = q_values(pg, order);
    EventEstimates out;
    out.coefficient = kappa;
    out.squared_coeff = squared_coeff;
    out.q = q.left;
    out.unmatched_before.resize(m);
    out.unmatched_stderr.resize(m);
    out.term_I.resize(m);
    out.term_II.resize(m);
    std::vector<double> yq_sum(nl, 0.0), survive(nl, 1.0);
    for (EdgeId id = 0; id < m; ++id) {
        const double freq = static_cast<double>(total.unmatched[id]) / n;
        out.unmatched_before[id] = freq;
        out.unmatched_stderr[id] =
            options.trials > 1 ? std::sqrt(freq * (1.0 - freq) / (n - 1.0)) : 0.0;
        out.term_I[id] = first_order_term(pg.x[id], q.left[id], pg.y[id]);
        out.term_II[id] = pg.y[id] * (freq - q.left[id]);
        out.sum_I += out.term_I[id];
        out.sum_II_total += out.term_II[id];
        yq_sum[eu[id]] += pg.y[id] * q.left[id];
        survive[eu[id]] *= 1.0 - pg.y[id];
    }
    out.combined_bound = out.sum_I + kappa * out.sum_II_total;

    out.delta.resize(nl);
    out.delta_stderr.resize(nl);
    out.sum_II.resize(nl);
    out.second_order_margin.resize(nl);
    out.second_order_margin_stderr.resize(nl);
    const double dof = options.trials > 1 ? n - 1.0 : 1.0;
    for (Vertex u = 0; u < nl; ++u) {
        const double mean_a = total.a_sum[u] / n;
        const double mean_b = static_cast<double>(total.b_sum[u]) / n;
        const double var_a = std::max(0.0, (total.a_sq[u] - n * mean_a * mean_a) / dof);
        const double var_b = std::max(0.0, (static_cast<double>(total.b_sum[u]) - n * mean_b * mean_b) / dof);
        const double cov_ab = (total.ab_sum[u] - n * mean_a * mean_b) / dof;
        out.delta[u] = mean_b - survive[u];
        out.delta_stderr[u] = options.trials > 1 ? std::sqrt(var_b / n) : 0.0;
        out.sum_II[u] = mean_a - yq_sum[u];
        out.second_order_margin[u] = out.sum_II[u] - squared_coeff * out.delta[u] * out.delta[u];
        // Delta method: gradient (1, -2 * squared_coeff * delta) in (mean_a, mean_b).
        const double gb = -2.0 * squared_coeff * out.delta[u];
        const double var_g = var_a + gb * gb * var_b + 2.0 * gb * cov_ab;
        out.second_order_margin_stderr[u] =
            options.trials > 1 ? std::sqrt(std::max(0.0, var_g) / n) : 0.0;
    }

    out.alg = estimate_from_sums(total.alg_sum, total.alg_sq, options.trials, options.seed);
    McEstimate diff = estimate_from_sums(total.d_sum, total.d_sq, options.trials, options.seed);
    // mean(ALG - kappa * sum y 1{unmatched}) - sum I + kappa * sum y q = ALG - combined_bound.
    double kappa_yq = 0.0;
    for (Vertex u = 0; u < nl; ++u) kappa_yq += kappa * yq_sum[u];
    diff.mean = diff.mean - out.sum_I + kappa_yq;
    out.alg_minus_bound = diff;
    return out;
}

} // namespace matchlab
