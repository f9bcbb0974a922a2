#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "matchlab/graph.hpp"
#include "matchlab/pruner.hpp"

namespace matchlab {

struct MatchingResult {
    std::vector<EdgeId> matched_edges;
    std::size_t size = 0;
    std::vector<bool> matched_left;
    std::vector<bool> matched_right;
};

/// Monte Carlo estimate of a mean; std_error = sample sd / sqrt(trials).
struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

/// Builds an estimate from integer per-trial totals.
McEstimate estimate_from_sums(long double sum, long double sum_sq, std::uint64_t trials,
                              std::uint64_t seed);

/// A fresh uniformly random order in every trial.
struct RandomPerTrial {
    friend bool operator==(const RandomPerTrial&, const RandomPerTrial&) = default;
};

using OrderPolicy = std::variant<ArrivalOrder, RandomPerTrial>;

ArrivalOrder order_as_listed(std::size_t m);
ArrivalOrder order_random(std::size_t m, std::uint64_t seed);
/// Red edges of gen_fig1_regular first, the rest in listed order.
ArrivalOrder order_red_first(const StochasticGraph& g);
/// Type-1 edges of gen_fig2_hardness first, the rest in listed order.
ArrivalOrder order_type1_first(const StochasticGraph& g);

/// Greedy over the realized edges: take an edge whenever both ends are free.
MatchingResult run_greedy(const PrunedGraph& pg, const ArrivalOrder& order,
                          const Realization& realization);

struct SimOptions {
    std::uint64_t trials = 10000;
    std::uint64_t seed = 0;
    unsigned threads = 0;  ///< 0 = hardware concurrency
};

struct GreedyReport {
    McEstimate estimate;
    std::vector<double> left_match_frequency;
    std::vector<double> right_match_frequency;
};

/// Expected Greedy matching size on realizations drawn at rate y.
GreedyReport mc_greedy(const PrunedGraph& pg, const OrderPolicy& order, const SimOptions& options);

struct QValues {
    std::vector<double> left;   ///< q_u(e): no earlier edge of E_u realized
    std::vector<double> right;  ///< q_v(e)
};

QValues q_values(const PrunedGraph& pg, const ArrivalOrder& order);

/// sum_e x_e (1 - exp(-q_u(e) y_e / x_e)); edges with x_e = 0 contribute 0.
double lemma1_lower_bound(const PrunedGraph& pg, const ArrivalOrder& order);

/// e^{-c - c e^{-c}}, the weight of second-order contributions.
double second_order_coefficient(double c);

struct EventEstimates {
    std::vector<double> q;                 ///< exact q_u(e)
    std::vector<double> unmatched_before;  ///< MC Pr[u unmatched when e arrives]
    std::vector<double> unmatched_stderr;
    std::vector<double> term_I;
    std::vector<double> term_II;

    // Per left vertex.
    std::vector<double> delta;  ///< Pr[u unmatched at end] - Pr[no edge of u realized]
    std::vector<double> delta_stderr;
    std::vector<double> sum_II;
    std::vector<double> second_order_margin;  ///< sum_II - squared_coeff * delta^2
    std::vector<double> second_order_margin_stderr;

    double coefficient = 0.0;     ///< second_order_coefficient(c)
    double squared_coeff = 1.98;  ///< multiplier of delta^2
    double sum_I = 0.0;
    double sum_II_total = 0.0;
    double combined_bound = 0.0;  ///< sum_e I(e) + coefficient * II(e)
    McEstimate alg;
    /// ALG - combined_bound on common random numbers.
    McEstimate alg_minus_bound;
};

EventEstimates estimate_event_terms(const PrunedGraph& pg, const ArrivalOrder& order,
                                    const SimOptions& options, double coeff_c,
                                    double squared_coeff = 1.98);

} // namespace matchlab
