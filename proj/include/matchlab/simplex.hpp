#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace matchlab {

/// Dense tableau simplex for  max c^T x  s.t.  A x <= b, x >= 0.
///
/// Rows may be appended after a solve; the next solve() then re-optimizes from
/// the current basis with dual simplex pivots, which is what a cutting-plane
/// loop needs. The first solve requires b >= 0 (the slack basis is feasible).
class DenseSimplex {
public:
    enum class Status { Optimal, Unbounded, Infeasible, IterationLimit };

    struct Options {
        double pivot_tol = 1e-9;
        double feasibility_tol = 1e-11;
        double optimality_tol = 1e-11;
        std::size_t max_pivots = 200000;
    };

    explicit DenseSimplex(std::vector<double> objective);
    DenseSimplex(std::vector<double> objective, Options options);

    /// Appends a_row^T x <= rhs; returns the row index.
    std::size_t add_row(std::span<const double> a_row, double rhs);

    /// Sparse variant: coefficient 1 on each listed column.
    std::size_t add_indicator_row(std::span<const std::size_t> columns, double rhs);

    Status solve();

    std::size_t num_vars() const noexcept { return n_; }
    std::size_t num_rows() const noexcept { return rows_.size(); }
    std::size_t pivots() const noexcept { return pivots_; }

    std::vector<double> primal() const;
    double objective_value() const;

private:
    std::size_t append_row(std::vector<double> row, double rhs);
    void pivot(std::size_t r, std::size_t col);
    bool primal_feasible() const;
    bool dual_feasible() const;
    Status primal_phase();
    Status dual_phase();

    Options opt_;
    std::size_t n_;
    std::vector<double> cost_;
    std::vector<std::vector<double>> rows_;  // coefficients over all columns
    std::vector<double> rhs_;
    std::vector<double> reduced_;  // objective row of z - c^T x
    double value_ = 0.0;           // current z
    std::vector<std::size_t> basis_;
    std::size_t cols_ = 0;
    std::size_t pivots_ = 0;
};

} // namespace matchlab
