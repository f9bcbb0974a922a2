#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace matchlab {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached rule for 1 <= n <= 64 (roots by Newton iteration on P_n).
const GaussRule& gauss_legendre(std::size_t n);

struct QuadOptions {
    std::size_t points = 10;  ///< nodes per panel
    std::size_t initial_panels = 1;
    std::size_t max_panels = std::size_t{1} << 16;
    double abs_tol = 1e-13;
    double rel_tol = 1e-13;
};

struct QuadResult {
    double value = 0.0;
    /// |I(2N) - I(N)|, the change from the last panel doubling.
    double error = 0.0;
    std::size_t panels = 0;
    std::size_t evaluations = 0;
    bool converged = false;
};

template <class F>
double composite_gauss(const F& f, double a, double b, std::size_t panels, const GaussRule& rule) {
    const double h = (b - a) / static_cast<double>(panels);
    double total = 0.0;
    for (std::size_t k = 0; k < panels; ++k) {
        const double mid = a + (static_cast<double>(k) + 0.5) * h;
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
        total += 0.5 * h * s;
    }
    return total;
}

/// Composite Gauss-Legendre on [a, b], doubling the panel count until two
/// successive estimates agree to max(abs_tol, rel_tol * |I|).
template <class F>
QuadResult integrate(const F& f, double a, double b, const QuadOptions& opt = {}) {
    QuadResult res;
    if (a == b) {
        res.converged = true;
        return res;
    }
    const GaussRule& rule = gauss_legendre(opt.points);
    std::size_t n = opt.initial_panels == 0 ? 1 : opt.initial_panels;
    double coarse = composite_gauss(f, a, b, n, rule);
    res.evaluations = n * rule.nodes.size();
    for (;;) {
        const double fine = composite_gauss(f, a, b, 2 * n, rule);
        res.evaluations += 2 * n * rule.nodes.size();
        res.value = fine;
        res.error = std::fabs(fine - coarse);
        res.panels = 2 * n;
        if (res.error <= std::fmax(opt.abs_tol, opt.rel_tol * std::fabs(fine))) {
            res.converged = true;
            return res;
        }
        n *= 2;
        if (n >= opt.max_panels) return res;
        coarse = fine;
    }
}

} // namespace matchlab
