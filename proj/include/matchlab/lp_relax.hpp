#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "matchlab/graph.hpp"

namespace matchlab {

/// One subset constraint sum_{e in edges} x_e <= 1 - prod (1 - p_e) at a vertex.
struct SubsetConstraint {
    Side side = Side::Left;
    Vertex vertex = 0;
    std::vector<EdgeId> edges;  ///< sorted ascending

    friend bool operator==(const SubsetConstraint&, const SubsetConstraint&) = default;
};

struct LpSolution {
    std::vector<double> x;
    double objective = 0.0;
    std::vector<SubsetConstraint> generated_constraints;
    double tolerance = 1e-8;
    std::size_t outer_iterations = 0;
};

/// 1 - prod(1 - p).
double constraint_rhs(std::span<const double> p_values);

struct VertexEdge {
    EdgeId id;
    double p;
    double x;
};

struct SeparationResult {
    bool violated = false;
    std::vector<EdgeId> subset;  ///< argmax subset, sorted ascending
    double violation = 0.0;      ///< sum x - (1 - prod(1 - p)) of that subset
};

/// Most violated subset of one vertex's edges. Marginal gain of adding e to S
/// is x_e - p_e * prod_{S}(1 - p), so the optimum is a prefix of the edges
/// sorted by x_e / p_e descending (ties by id).
SeparationResult separate(std::span<const VertexEdge> vertex_edges, double tol = 1e-9);

struct LpOptions {
    double tol = 1e-8;             ///< feasibility/optimality tolerance
    double separation_tol = 1e-9;
    std::size_t max_rounds = 0;    ///< 0 = 50 * (n_left + n_right)
    /// Rows installed before the first solve, e.g. a previous solution's set.
    std::vector<SubsetConstraint> initial_constraints;
};

/// Solves the subset-constraint LP by lazy constraint generation. The initial
/// restricted LP holds the singleton rows x_e <= p_e (unless initial rows are
/// given and already bound every edge).
LpSolution solve_lp(const StochasticGraph& g, const LpOptions& options = {});

enum class FeasibilityMode { Oracle, BruteForce };

struct ConstraintViolation {
    SubsetConstraint constraint;
    double violation = 0.0;
};

struct FeasibilityReport {
    bool feasible = true;
    std::vector<ConstraintViolation> violations;
    std::vector<EdgeId> negative_entries;
};

/// Oracle mode reports the most violated subset per vertex; brute-force mode
/// enumerates every subset (vertex degree must not exceed max_degree).
FeasibilityReport verify_feasible(const StochasticGraph& g, std::span<const double> x,
                                  FeasibilityMode mode, std::size_t max_degree = 16,
                                  double tol = 1e-8);

/// Probability that each edge belongs to the lexicographically smallest (by
/// sorted edge-id sequence) maximum matching of the realization. m <= 22.
std::vector<double> exact_match_probabilities(const StochasticGraph& g);

/// sum_{e in c.edges} x_e - (1 - prod (1 - p_e)); positive means violated.
double constraint_violation(const StochasticGraph& g, std::span<const double> x,
                            const SubsetConstraint& c);

} // namespace matchlab
