#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "matchlab/graph.hpp"
#include "matchlab/greedy_sim.hpp"
#include "matchlab/lp_relax.hpp"
#include "matchlab/pruner.hpp"

namespace matchlab {

/// Maximum-cardinality matching by Hopcroft-Karp phases. Edges are given as
/// (left, right) pairs; matched_edges holds indices into `edges`, ascending.
MatchingResult max_matching(std::span<const std::pair<Vertex, Vertex>> edges, std::size_t n_left,
                            std::size_t n_right);

/// Expected maximum matching size over realizations of the original p.
McEstimate mc_opt(const StochasticGraph& g, const SimOptions& options);

/// Same, on a pruned graph: use_pruned draws edges at rate y instead of p.
McEstimate mc_opt(const PrunedGraph& pg, const SimOptions& options, bool use_pruned);

/// Sum over all 2^m realizations; m <= 22.
double exact_expected_opt(const StochasticGraph& g);

struct RatioReport {
    McEstimate alg;
    McEstimate opt;
    bool opt_exact = false;  ///< opt.std_error is then 0
    double ratio = 0.0;
    double ratio_ci_low = 0.0;
    double ratio_ci_high = 0.0;
};

/// ratio = alg/opt with the interval [a - 3s_a, a + 3s_a] / [o + 3s_o, o - 3s_o],
/// clipped below at 0 (the upper end is +inf when o - 3s_o <= 0). Throws
/// UndefinedError when opt.mean <= 0.
RatioReport competitive_report(const McEstimate& alg, const McEstimate& opt, bool opt_exact = false);

struct CoupledRun {
    McEstimate alg;
    McEstimate opt;
    /// Trials where Greedy found less than half of the pruned realization's maximum.
    std::uint64_t half_guarantee_violations = 0;
    /// Trials where Greedy exceeded the original realization's maximum (never expected).
    std::uint64_t alg_above_opt = 0;
};

struct CoupledOptions {
    SimOptions sim;
    /// Share each trial's coin flips between ALG and OPT (pruned flags are then
    /// a subset of original flags). When off, OPT uses an independent stream.
    bool common_random_numbers = true;
};

/// Greedy on the pruned graph and maximum matching on the original graph, per trial.
CoupledRun coupled_run(const PrunedGraph& pg, const OrderPolicy& order, const CoupledOptions& options);

struct PipelineReport {
    LpSolution lp;
    PrunedGraph pruned;
    CoupledRun run;
    RatioReport ratio;
};

/// LP, pruning at c, then coupled Greedy and OPT estimates.
PipelineReport prune_and_greedy(const StochasticGraph& g, double c, const OrderPolicy& order,
                                const CoupledOptions& options, const LpOptions& lp_options = {});

} // namespace matchlab
