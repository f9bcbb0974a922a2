#include "matchlab/simplex.hpp"

#include <cmath>
#include <limits>

#include "matchlab/errors.hpp"

namespace matchlab {

namespace {
// Switch from the largest-coefficient rule to Bland's rule after this many
// consecutive degenerate pivots.
constexpr std::size_t kDegenerateStreak = 50;
} // namespace

DenseSimplex::DenseSimplex(std::vector<double> objective) : DenseSimplex(std::move(objective), Options{}) {}

DenseSimplex::DenseSimplex(std::vector<double> objective, Options options)
    : opt_(options), n_(objective.size()), cost_(std::move(objective)), cols_(n_) {
    reduced_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) reduced_[j] = -cost_[j];
}

std::size_t DenseSimplex::add_row(std::span<const double> a_row, double rhs) {
    if (a_row.size() != n_) throw ValidationError("DenseSimplex::add_row: wrong row length");
    std::vector<double> row(cols_ + 1, 0.0);
    for (std::size_t j = 0; j < n_; ++j) row[j] = a_row[j];
    return append_row(std::move(row), rhs);
}

std::size_t DenseSimplex::add_indicator_row(std::span<const std::size_t> columns, double rhs) {
    std::vector<double> row(cols_ + 1, 0.0);
    for (std::size_t j : columns) {
        if (j >= n_) throw ValidationError("DenseSimplex::add_indicator_row: column out of range");
        row[j] += 1.0;
    }
    return append_row(std::move(row), rhs);
}

std::size_t DenseSimplex::append_row(std::vector<double> row, double rhs) {
    // New slack column, zero in every existing row and in the objective.
    const std::size_t slack = cols_;
    for (auto& r : rows_) r.push_back(0.0);
    reduced_.push_back(0.0);
    ++cols_;
    row[slack] = 1.0;

    // Express the row in terms of the current nonbasic columns.
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const double f = row[basis_[i]];
        if (f == 0.0) continue;
        const auto& src = rows_[i];
        for (std::size_t j = 0; j < cols_; ++j) row[j] -= f * src[j];
        rhs -= f * rhs_[i];
        row[basis_[i]] = 0.0;
    }
    rows_.push_back(std::move(row));
    rhs_.push_back(rhs);
    basis_.push_back(slack);
    return rows_.size() - 1;
}

void DenseSimplex::pivot(std::size_t r, std::size_t col) {
    auto& prow = rows_[r];
    const double inv = 1.0 / prow[col];
    for (auto& a : prow) a *= inv;
    rhs_[r] *= inv;
    prow[col] = 1.0;

    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (i == r) continue;
        auto& row = rows_[i];
        const double f = row[col];
        if (f == 0.0) continue;
        for (std::size_t j = 0; j < cols_; ++j) row[j] -= f * prow[j];
        row[col] = 0.0;
        rhs_[i] -= f * rhs_[r];
    }
    const double f = reduced_[col];
    if (f != 0.0) {
        for (std::size_t j = 0; j < cols_; ++j) reduced_[j] -= f * prow[j];
        reduced_[col] = 0.0;
        value_ -= f * rhs_[r];
    }
    basis_[r] = col;
    ++pivots_;
}

bool DenseSimplex::primal_feasible() const {
    for (double b : rhs_)
        if (b < -opt_.feasibility_tol) return false;
    return true;
}

bool DenseSimplex::dual_feasible() const {
    for (double d : reduced_)
        if (d < -opt_.optimality_tol) return false;
    return true;
}

DenseSimplex::Status DenseSimplex::primal_phase() {
    std::size_t degenerate = 0;
    for (;;) {
        if (pivots_ >= opt_.max_pivots) return Status::IterationLimit;
        const bool bland = degenerate >= kDegenerateStreak;

        std::size_t enter = cols_;
        double best = -opt_.optimality_tol;
        for (std::size_t j = 0; j < cols_; ++j) {
            if (reduced_[j] < best) {
                enter = j;
                if (bland) break;
                best = reduced_[j];
            }
        }
        if (enter == cols_) return Status::Optimal;

        std::size_t leave = rows_.size();
        double ratio = std::numeric_limits<double>::infinity();
        double leave_coef = 0.0;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const double a = rows_[i][enter];
            if (a <= opt_.pivot_tol) continue;
            const double t = std::max(rhs_[i], 0.0) / a;
            if (t < ratio - 1e-13) {
                ratio = t;
                leave = i;
                leave_coef = a;
            } else if (t <= ratio + 1e-13) {
                const bool better = bland ? basis_[i] < basis_[leave] : a > leave_coef;
                if (better) {
                    leave = i;
                    leave_coef = a;
                    ratio = std::min(ratio, t);
                }
            }
        }
        if (leave == rows_.size()) return Status::Unbounded;

        degenerate = ratio <= opt_.feasibility_tol ? degenerate + 1 : 0;
        pivot(leave, enter);
    }
}

DenseSimplex::Status DenseSimplex::dual_phase() {
    std::size_t degenerate = 0;
    for (;;) {
        if (pivots_ >= opt_.max_pivots) return Status::IterationLimit;
        const bool bland = degenerate >= kDegenerateStreak;

        std::size_t leave = rows_.size();
        double most = -opt_.feasibility_tol;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (rhs_[i] < most) {
                if (bland && leave != rows_.size() && basis_[i] > basis_[leave]) continue;
                leave = i;
                if (!bland) most = rhs_[i];
            }
        }
        if (leave == rows_.size()) return Status::Optimal;

        const auto& row = rows_[leave];
        std::size_t enter = cols_;
        double ratio = std::numeric_limits<double>::infinity();
        double enter_coef = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) {
            const double a = row[j];
            if (a >= -opt_.pivot_tol) continue;
            const double t = std::max(reduced_[j], 0.0) / -a;
            if (t < ratio - 1e-13) {
                ratio = t;
                enter = j;
                enter_coef = -a;
            } else if (t <= ratio + 1e-13 && !bland && -a > enter_coef) {
                enter = j;
                enter_coef = -a;
                ratio = std::min(ratio, t);
            }
        }
        if (enter == cols_) return Status::Infeasible;

        degenerate = ratio <= opt_.optimality_tol ? degenerate + 1 : 0;
        pivot(leave, enter);
    }
}

DenseSimplex::Status DenseSimplex::solve() {
    if (!primal_feasible()) {
        if (!dual_feasible()) {
            throw ValidationError("DenseSimplex: basis is neither primal nor dual feasible");
        }
        const Status s = dual_phase();
        if (s != Status::Optimal) return s;
    }
    return primal_phase();
}

std::vector<double> DenseSimplex::primal() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t i = 0; i < rows_.size(); ++i)
        if (basis_[i] < n_) x[basis_[i]] = rhs_[i];
    return x;
}

double DenseSimplex::objective_value() const { return value_; }

} // namespace matchlab
