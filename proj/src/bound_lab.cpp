#include "matchlab/bound_lab.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "matchlab/errors.hpp"
#include "matchlab/parallel.hpp"

namespace matchlab {

namespace {

constexpr double kDomainSlack = 1e-12;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void require_positive_c(double c, const char* who) {
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError(std::string(who) + ": c must be positive, got " + fmt(c));
}

} // namespace

QuadResult h1_partial(double s, double c, const QuadOptions& quad) {
    require_positive_c(c, "h1");
    if (!(s >= 0.0 && s <= 1.0 + kDomainSlack)) throw DomainError("h1_partial: s = " + fmt(s) + " outside [0, 1]");
    auto f = [c](double z) { return -std::expm1(-c * std::exp(-c * z)); };
    return integrate(f, 0.0, std::min(s, 1.0), quad);
}

QuadResult h1(double c, const QuadOptions& quad) { return h1_partial(1.0, c, quad); }

double h2_t_max(double c) { return 1.0 - 1.0 / c; }

QuadResult h2(double s, double t, double c, const QuadOptions& quad) {
    require_positive_c(c, "h2");
    const double t_max = h2_t_max(c);
    if (!(s >= 0.0 && s <= 1.0 + kDomainSlack)) throw DomainError("h2: s = " + fmt(s) + " outside [0, 1]");
    if (!(t >= 0.0 && t <= t_max + kDomainSlack)) {
        throw DomainError("h2: t = " + fmt(t) + " outside [0, " + fmt(std::max(t_max, 0.0)) + "]");
    }
    if (!(s + t > 0.0 && s + t <= 1.0 + kDomainSlack)) throw DomainError("h2: s + t = " + fmt(s + t) + " outside (0, 1]");

    const QuadResult first = h1_partial(s, c, quad);
    const double decay = std::exp(-c * s);
    const double rest = 1.0 - t;
    auto g = [decay, rest](double z) {
        const double d = rest + z;
        return -std::expm1(-decay * rest / (d * d));
    };
    const QuadResult second = integrate(g, 0.0, t, quad);
    QuadResult out;
    out.value = (first.value + second.value) / (s + t);
    out.error = (first.error + second.error) / (s + t);
    out.evaluations = first.evaluations + second.evaluations;
    out.panels = std::max(first.panels, second.panels);
    out.converged = first.converged && second.converged;
    return out;
}

namespace {

struct MinAcc {
    double value = std::numeric_limits<double>::infinity();
    std::size_t index = 0;
    double max_error = 0.0;
    std::size_t evaluations = 0;
};

struct H2Eval {
    std::vector<std::pair<double, double>> pts;
    std::vector<double> values;
    MinAcc best;
};

H2Eval eval_h2_points(std::vector<std::pair<double, double>> pts, double c, const H2Options& opt) {
    H2Eval out;
    out.pts = std::move(pts);
    out.values.assign(out.pts.size(), 0.0);
    auto body = [&](MinAcc& acc, std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i) {
            const auto r = h2(out.pts[i].first, out.pts[i].second, c, opt.quad);
            out.values[i] = r.value;
            acc.max_error = std::max(acc.max_error, r.error);
            acc.evaluations += r.evaluations;
            if (r.value < acc.value) {
                acc.value = r.value;
                acc.index = i;
            }
        }
    };
    for (const auto& b : run_blocks(out.pts.size(), opt.threads, MinAcc{}, body, 1024)) {
        out.best.max_error = std::max(out.best.max_error, b.max_error);
        out.best.evaluations += b.evaluations;
        if (b.value < out.best.value) {
            out.best.value = b.value;
            out.best.index = b.index;
        }
    }
    return out;
}

} // namespace

BoundReport h2_min(double c, const H2Options& opt) {
    require_positive_c(c, "h2_min");
    const double t_max = h2_t_max(c);
    if (!(t_max > 0.0)) throw DomainError("h2_min: need c > 1 for a nonempty t range");
    if (opt.resolution < 1) throw ValidationError("h2_min: resolution must be at least 1");
    if (opt.refine_levels > 0 && opt.refine_points < 3) {
        throw ValidationError("h2_min: refine_points must be at least 3");
    }
    const std::size_t n = opt.resolution;

    std::vector<std::pair<double, double>> pts;
    pts.reserve((n + 1) * (n + 1) + n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        const double t = t_max * static_cast<double>(j) / static_cast<double>(n);
        for (std::size_t i = 0; i <= n; ++i) {
            const double s = static_cast<double>(i) / static_cast<double>(n);
            if (s + t > 1.0 || s + t <= 0.0) continue;
            pts.emplace_back(s, t);
        }
        if (t <= 1.0) pts.emplace_back(1.0 - t, t);
    }

    BoundReport rep;
    rep.function_id = "h2";
    rep.c = c;
    rep.coord_names = {"s", "t"};
    const H2Eval coarse = eval_h2_points(std::move(pts), c, opt);
    double best = coarse.best.value;
    auto arg = coarse.pts[coarse.best.index];
    double max_error = coarse.best.max_error;
    std::size_t evaluations = coarse.best.evaluations;
    if (opt.keep_points)
        for (std::size_t i = 0; i < coarse.pts.size(); ++i)
            rep.points.push_back({{coarse.pts[i].first, coarse.pts[i].second}, coarse.values[i]});

    double step_s = 1.0 / static_cast<double>(n);
    double step_t = t_max / static_cast<double>(n);
    const std::size_t r = opt.refine_points;
    for (std::size_t level = 0; level < opt.refine_levels; ++level) {
        std::vector<std::pair<double, double>> local;
        const double ds = 2.0 * step_s / static_cast<double>(r - 1);
        const double dt = 2.0 * step_t / static_cast<double>(r - 1);
        for (std::size_t j = 0; j < r; ++j) {
            const double t = std::clamp(arg.second - step_t + dt * static_cast<double>(j), 0.0, t_max);
            for (std::size_t i = 0; i < r; ++i) {
                double s = std::clamp(arg.first - step_s + ds * static_cast<double>(i), 0.0, 1.0);
                if (s + t > 1.0) s = 1.0 - t;
                if (s < 0.0 || s + t <= 0.0) continue;
                local.emplace_back(s, t);
            }
        }
        const H2Eval fine = eval_h2_points(std::move(local), c, opt);
        max_error = std::max(max_error, fine.best.max_error);
        evaluations += fine.best.evaluations;
        if (fine.best.value < best) {
            best = fine.best.value;
            arg = fine.pts[fine.best.index];
        }
        if (opt.keep_points)
            for (std::size_t i = 0; i < fine.pts.size(); ++i)
                rep.points.push_back({{fine.pts[i].first, fine.pts[i].second}, fine.values[i]});
        step_s = ds;
        step_t = dt;
    }

    rep.min_value = best;
    rep.argmin = {arg.first, arg.second};
    rep.quadrature_error = h2(arg.first, arg.second, c, opt.quad).error;
    rep.grid = std::to_string(n + 1) + "x" + std::to_string(n + 1) + " + diagonal, " +
               std::to_string(opt.refine_levels) + " refinements of " + std::to_string(r) + "x" +
               std::to_string(r);
    rep.extras["max_quadrature_error"] = max_error;
    rep.extras["final_cell_s"] = step_s;
    rep.extras["final_cell_t"] = step_t;
    rep.extras["integrand_evaluations"] = static_cast<double>(evaluations);
    return rep;
}

double h3(double x, double q, double c) {
    require_positive_c(c, "h3");
    if (!(x > 0.0 && x <= 1.0)) throw DomainError("h3: x = " + fmt(x) + " outside (0, 1]");
    const double q_lo = std::exp(-c + c * x);
    if (!(q >= q_lo * (1.0 - kDomainSlack) && q <= 1.0 + kDomainSlack)) {
        throw DomainError("h3: q = " + fmt(q) + " outside [" + fmt(q_lo) + ", 1]");
    }
    const double y = -std::expm1(-c * x);
    const double qy = std::min(q * y, 1.0 - 1e-15);
    const double kappa = std::exp(-c - c * std::exp(-c));
    // -ln(1 - y) - y = cx - y
    const double second = c * x + std::expm1(-c * x);
    return x * (std::exp(-qy / x) - std::exp(std::log1p(-qy) / x)) - kappa * second * q;
}

BoundReport h3_grid_check(double c, const H3Options& opt) {
    require_positive_c(c, "h3_grid_check");
    if (opt.x_points < 2 || opt.q_points < 2) throw ValidationError("h3_grid_check: need at least 2 points per axis");
    if (!(opt.x_min > 0.0 && opt.x_min < 1.0)) throw DomainError("h3_grid_check: x_min must lie in (0, 1)");
    BoundReport rep;
    rep.function_id = "h3";
    rep.c = c;
    rep.coord_names = {"x", "q"};
    rep.min_value = std::numeric_limits<double>::infinity();
    double column_min = std::numeric_limits<double>::infinity();
    double column_q = 0.0;
    const double log_span = std::log(1.0 / opt.x_min);
    for (std::size_t i = 0; i < opt.x_points; ++i) {
        const double x = i + 1 == opt.x_points
                             ? 1.0
                             : opt.x_min * std::exp(log_span * static_cast<double>(i) / static_cast<double>(opt.x_points - 1));
        const double q_lo = std::exp(-c + c * x);
        for (std::size_t j = 0; j < opt.q_points; ++j) {
            const double q = j + 1 == opt.q_points
                                 ? 1.0
                                 : q_lo + (1.0 - q_lo) * static_cast<double>(j) / static_cast<double>(opt.q_points - 1);
            const double v = h3(x, q, c);
            if (opt.keep_points) rep.points.push_back({{x, q}, v});
            if (v < rep.min_value) {
                rep.min_value = v;
                rep.argmin = {x, q};
            }
            if (i == 0 && v < column_min) {
                column_min = v;
                column_q = q;
            }
        }
    }
    rep.grid = std::to_string(opt.x_points) + " log-spaced x in [" + fmt(opt.x_min) + ", 1] x " +
               std::to_string(opt.q_points) + " linear q";
    rep.extras["boundary_column_x"] = opt.x_min;
    rep.extras["boundary_column_min"] = column_min;
    rep.extras["boundary_column_argmin_q"] = column_q;
    return rep;
}

double h4(double delta, double c) {
    require_positive_c(c, "h4");
    const double ec = std::exp(-c);
    const double hi = 1.0 - ec;
    if (!(delta >= 0.0 && delta <= hi + kDomainSlack)) {
        throw DomainError("h4: delta = " + fmt(delta) + " outside [0, " + fmt(hi) + "]");
    }
    const double base = ec + delta;
    const double power = std::exp(std::log(base) / hi + c * ec / hi);
    return power * std::expm1(c) - std::exp(c) * base + ec - 1.98 * delta * delta;
}

BoundReport h4_range_check(double c, const H4Options& opt) {
    require_positive_c(c, "h4_range_check");
    if (opt.points < 2) throw ValidationError("h4_range_check: need at least 2 points");
    BoundReport rep;
    rep.function_id = "h4";
    rep.c = c;
    rep.coord_names = {"delta"};
    rep.min_value = std::numeric_limits<double>::infinity();
    const double hi = -std::expm1(-c);
    for (std::size_t i = 0; i < opt.points; ++i) {
        const double d = i + 1 == opt.points ? hi : hi * static_cast<double>(i) / static_cast<double>(opt.points - 1);
        const double v = h4(d, c);
        if (opt.keep_points) rep.points.push_back({{d}, v});
        if (v < rep.min_value) {
            rep.min_value = v;
            rep.argmin = {d};
        }
    }
    rep.grid = std::to_string(opt.points) + " points on [0, " + fmt(hi) + "]";
    rep.extras["value_at_zero"] = h4(0.0, c);
    return rep;
}

DeltaBound solve_delta_bound(double c, double coeff, std::optional<double> f_override) {
    require_positive_c(c, "solve_delta_bound");
    if (!(coeff >= 0.0) || !std::isfinite(coeff)) throw DomainError("solve_delta_bound: coeff must be nonnegative");
    DeltaBound out;
    if (f_override) {
        out.f_value = *f_override;
    } else {
        const auto q = h1(c);
        out.f_value = q.value;
        out.quadrature_error = q.error;
    }
    const double ceiling = -std::expm1(-c);
    out.slack = ceiling - out.f_value;
    out.kappa = std::exp(-c - c * std::exp(-c));
    if (out.slack < 0.0) {
        throw InfeasibleError("solve_delta_bound: slack " + fmt(out.slack) + " is negative, no delta >= 0 qualifies");
    }
    const double a = coeff * out.kappa;
    if (a == 0.0) {
        out.delta = out.slack;
    } else {
        double lo = 0.0, hi = out.slack;
        while (hi - lo > 1e-13) {
            const double mid = 0.5 * (lo + hi);
            if (mid + a * mid * mid <= out.slack) lo = mid;
            else hi = mid;
        }
        out.delta = lo;
    }
    out.ratio = ceiling - out.delta;
    return out;
}

WorstCaseInstance build_worst_case(std::size_t k, std::size_t ell, double c) {
    require_positive_c(c, "build_worst_case");
    if (k < 1) throw ValidationError("build_worst_case: k must be at least 1");
    if (ell > k) throw ValidationError("build_worst_case: ell exceeds k");
    WorstCaseInstance inst;
    inst.k = k;
    inst.ell = ell;
    inst.c = c;
    inst.x = 1.0 / static_cast<double>(k);
    const double x = inst.x;
    if (!(c * x < 1.0)) throw ValidationError("build_worst_case: c / k = " + fmt(c * x) + " must be below 1");
    inst.p.resize(k);
    inst.y.resize(k);
    inst.q.resize(k);
    double survive = 1.0;
    double total = 0.0;
    for (std::size_t i = 1; i <= k; ++i) {
        double p, y;
        if (i <= ell) {
            p = 1.0;
            y = c * x;
        } else {
            p = x / (1.0 - static_cast<double>(k - i) * x);
            y = p;
        }
        if (!(p > 0.0 && p <= 1.0 + 1e-15)) throw ValidationError("build_worst_case: p_" + std::to_string(i) + " outside (0, 1]");
        if (i > 1 && y > inst.y[i - 2] * (1.0 + 1e-15)) {
            throw ValidationError("build_worst_case: y increases at i = " + std::to_string(i) +
                                  "; need (ell + 1) / k >= 1 / c");
        }
        inst.p[i - 1] = std::min(p, 1.0);
        inst.y[i - 1] = y;
        inst.q[i - 1] = survive;
        total += -std::expm1(-survive * y / x);
        survive *= 1.0 - y;
    }
    inst.objective = total / static_cast<double>(k);
    return inst;
}

double worst_case_suffix_gap(const WorstCaseInstance& inst) {
    double gap = 0.0;
    double none = 1.0;
    for (std::size_t j = inst.k; j > inst.ell; --j) {
        none *= 1.0 - inst.p[j - 1];
        const double lhs = static_cast<double>(inst.k - j + 1) * inst.x;
        gap = std::max(gap, std::fabs(lhs - (1.0 - none)));
    }
    return gap;
}

double opt_problem_objective(const std::vector<double>& p, const std::vector<double>& x, double c) {
    if (p.size() != x.size() || p.empty()) throw ValidationError("opt_problem_objective: p and x must be nonempty and equal length");
    double num = 0.0, den = 0.0, survive = 1.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] >= 0.0 && p[i] <= 1.0)) throw DomainError("opt_problem_objective: p outside [0, 1]");
        if (!(x[i] >= 0.0)) throw DomainError("opt_problem_objective: negative x");
        const double y = std::min(p[i], -std::expm1(-c * x[i]));
        if (x[i] > 0.0) num += -x[i] * std::expm1(-survive * y / x[i]);
        den += x[i];
        survive *= 1.0 - y;
    }
    if (!(den > 0.0)) throw DomainError("opt_problem_objective: every x is zero");
    return num / den;
}

bool opt_problem_feasible(const std::vector<double>& p, const std::vector<double>& x, double tol) {
    const std::size_t k = p.size();
    const std::size_t masks = std::size_t{1} << k;
    std::vector<double> sum(masks, 0.0), none(masks, 1.0);
    for (std::size_t mask = 1; mask < masks; ++mask) {
        const std::size_t low = static_cast<std::size_t>(std::countr_zero(mask));
        const std::size_t rest = mask & (mask - 1);
        sum[mask] = sum[rest] + x[low];
        none[mask] = none[rest] * (1.0 - p[low]);
        if (sum[mask] > 1.0 - none[mask] + tol) return false;
    }
    return true;
}

BoundReport brute_force_opt_problem(std::size_t k, double c, std::size_t resolution) {
    require_positive_c(c, "brute_force_opt_problem");
    if (k < 1 || k > 4) throw CapabilityError("brute_force_opt_problem: k must lie in [1, 4]");
    if (resolution < 1) throw ValidationError("brute_force_opt_problem: resolution must be at least 1");
    const std::size_t r = resolution;
    const double step = 1.0 / static_cast<double>(r);

    BoundReport rep;
    rep.function_id = "opt_problem";
    rep.c = c;
    rep.min_value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) rep.coord_names.push_back("p" + std::to_string(i + 1));
    for (std::size_t i = 0; i < k; ++i) rep.coord_names.push_back("x" + std::to_string(i + 1));

    std::vector<std::size_t> pi(k, 1), xi(k, 0);
    std::vector<double> p(k), x(k);
    std::size_t feasible = 0;
    auto advance = [](std::vector<std::size_t>& idx, std::size_t lo, std::size_t hi) {
        for (auto& d : idx) {
            if (++d <= hi) return true;
            d = lo;
        }
        return false;
    };
    do {
        for (std::size_t i = 0; i < k; ++i) p[i] = static_cast<double>(pi[i]) * step;
        std::fill(xi.begin(), xi.end(), 0);
        while (advance(xi, 0, r)) {
            for (std::size_t i = 0; i < k; ++i) x[i] = static_cast<double>(xi[i]) * step;
            if (!opt_problem_feasible(p, x)) continue;
            ++feasible;
            const double v = opt_problem_objective(p, x, c);
            if (v < rep.min_value) {
                rep.min_value = v;
                rep.argmin = p;
                rep.argmin.insert(rep.argmin.end(), x.begin(), x.end());
            }
        }
    } while (advance(pi, 1, r));
    rep.grid = "k=" + std::to_string(k) + ", step 1/" + std::to_string(r) + " in every p_i and x_i";
    rep.extras["feasible_points"] = static_cast<double>(feasible);
    return rep;
}

} // namespace matchlab
