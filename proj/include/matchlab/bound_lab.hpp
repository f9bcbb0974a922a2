#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "matchlab/quadrature.hpp"

namespace matchlab {

struct GridPoint {
    std::vector<double> coords;
    double value = 0.0;
};

struct BoundReport {
    std::string function_id;  ///< h1 | h2 | h3 | h4 | delta | opt_problem
    double c = 0.0;
    std::string grid;         ///< human-readable resolution spec
    double min_value = 0.0;
    std::vector<double> argmin;
    double quadrature_error = 0.0;
    std::map<std::string, double> extras;
    std::vector<std::string> coord_names;
    std::vector<GridPoint> points;  ///< filled only when keep_points is set
};

/// int_0^1 1 - exp(-c e^{-cz}) dz. Throws DomainError unless c > 0.
QuadResult h1(double c, const QuadOptions& quad = {});

/// h1's integral over [0, s] only.
QuadResult h1_partial(double s, double c, const QuadOptions& quad = {});

/// Largest admissible t for h2, 1 - 1/c.
double h2_t_max(double c);

/// Throws DomainError unless s in [0, 1], t in [0, 1 - 1/c], 0 < s + t <= 1.
QuadResult h2(double s, double t, double c, const QuadOptions& quad = {});

struct H2Options {
    std::size_t resolution = 400;
    std::size_t refine_levels = 3;
    std::size_t refine_points = 21;   ///< per axis, per refinement level
    unsigned threads = 0;
    bool keep_points = false;
    QuadOptions quad;
};

/// Grid plus local refinement around the running argmin. The boundary
/// s + t = 1 is sampled at every t grid value.
BoundReport h2_min(double c, const H2Options& options = {});

/// x in (0, 1], q in [e^{-c + cx}, 1], y = 1 - e^{-cx}.
double h3(double x, double q, double c);

struct H3Options {
    std::size_t x_points = 200;
    std::size_t q_points = 200;
    double x_min = 1e-3;
    bool keep_points = false;
};

/// Log-spaced x and linear q per x. extras: boundary_column_min (x = x_min).
BoundReport h3_grid_check(double c, const H3Options& options = {});

/// 0 <= delta <= 1 - e^{-c}.
double h4(double delta, double c);

struct H4Options {
    std::size_t points = 10000;
    bool keep_points = false;
};

BoundReport h4_range_check(double c, const H4Options& options = {});

struct DeltaBound {
    double delta = 0.0;
    double ratio = 0.0;   ///< 1 - e^{-c} - delta
    double slack = 0.0;   ///< 1 - e^{-c} - f(c)
    double kappa = 0.0;   ///< e^{-c - c e^{-c}}
    double f_value = 0.0;
    double quadrature_error = 0.0;
};

/// Largest delta >= 0 with slack >= delta + coeff * kappa * delta^2, by
/// bisection. f defaults to h1(c). Throws InfeasibleError for negative slack.
DeltaBound solve_delta_bound(double c, double coeff, std::optional<double> f_override = std::nullopt);

struct WorstCaseInstance {
    std::size_t k = 0;
    std::size_t ell = 0;
    double x = 0.0;
    double c = 0.0;
    std::vector<double> p;
    std::vector<double> y;
    std::vector<double> q;
    double objective = 0.0;
};

/// x = 1/k; p_i = 1, y_i = c x for i <= ell; p_i = y_i = x / (1 - (k - i) x)
/// otherwise. Throws ValidationError if c x >= 1 or y would increase.
WorstCaseInstance build_worst_case(std::size_t k, std::size_t ell, double c);

/// max over j > ell of |(k - j + 1) x - (1 - prod_{i >= j} (1 - p_i))|.
double worst_case_suffix_gap(const WorstCaseInstance& inst);

/// sum x_i (1 - e^{-q_i y_i / x_i}) / sum x_i with y_i = min(p_i, 1 - e^{-c x_i})
/// and q_i = prod_{j < i} (1 - y_j). Throws DomainError if every x_i is 0.
double opt_problem_objective(const std::vector<double>& p, const std::vector<double>& x, double c);

/// True when sum_S x <= 1 - prod_S (1 - p) + tol for every S.
bool opt_problem_feasible(const std::vector<double>& p, const std::vector<double>& x, double tol = 1e-12);

/// Grid search (p_i in {1/r, ..., 1}, x_i in {0, 1/r, ..., 1}) over every
/// feasible point. Cost is r^{2k}; k <= 4.
BoundReport brute_force_opt_problem(std::size_t k, double c, std::size_t resolution);

} // namespace matchlab
