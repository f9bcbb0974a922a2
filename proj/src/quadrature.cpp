#include "matchlab/quadrature.hpp"

#include <numbers>
#include <string>

#include "matchlab/errors.hpp"

namespace matchlab {

namespace {

constexpr std::size_t kMaxRule = 64;

GaussRule build_rule(std::size_t n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-like initial guess for the i-th largest root.
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = z;
            for (std::size_t k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            if (n == 1) p0 = 1.0;
            dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0);
            const double step = p1 / dp;
            z -= step;
            if (std::fabs(step) < 1e-16) break;
        }
        // Recompute the derivative at the converged root.
        double p0 = 1.0, p1 = z;
        for (std::size_t k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / static_cast<double>(k);
            p0 = p1;
            p1 = pk;
        }
        dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

std::vector<GaussRule> build_table() {
    std::vector<GaussRule> table(kMaxRule + 1);
    table[1] = GaussRule{{0.0}, {2.0}};
    for (std::size_t n = 2; n <= kMaxRule; ++n) table[n] = build_rule(n);
    return table;
}

} // namespace

const GaussRule& gauss_legendre(std::size_t n) {
    static const std::vector<GaussRule> table = build_table();
    if (n < 1 || n > kMaxRule) {
        throw DomainError("gauss_legendre: rule size " + std::to_string(n) + " outside [1, 64]");
    }
    return table[n];
}

} // namespace matchlab
