#include "enumeration.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "matchlab/errors.hpp"

namespace matchlab::detail {

namespace {

std::vector<double> subset_products(std::span<const double> p) {
    const std::size_t n = p.size();
    std::vector<double> out(std::size_t{1} << n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t bit = std::size_t{1} << i;
        for (std::size_t mask = 0; mask < out.size(); ++mask) out[mask] *= (mask & bit) ? p[i] : 1.0 - p[i];
    }
    return out;
}

} // namespace

RealizationTable::RealizationTable(const StochasticGraph& g) : m_(g.num_edges()) {
    if (m_ > kMaxEnumerationEdges) {
        throw CapabilityError("realization enumeration: " + std::to_string(m_) +
                              " edges exceed the cap of " + std::to_string(kMaxEnumerationEdges));
    }
    const auto p = g.probabilities();
    low_bits_ = m_ / 2;
    low_mask_ = (std::uint32_t{1} << low_bits_) - 1;
    const std::span<const double> ps(p);
    low_prob_ = subset_products(ps.subspan(0, low_bits_));
    high_prob_ = subset_products(ps.subspan(low_bits_));

    conflict_.assign(m_, 0);
    for (std::size_t a = 0; a < m_; ++a)
        for (std::size_t b = 0; b < m_; ++b)
            if (g.edge(a).u == g.edge(b).u || g.edge(a).v == g.edge(b).v)
                conflict_[a] |= std::uint32_t{1} << b;

    size_.assign(std::size_t{1} << m_, 0);
    for (std::uint32_t mask = 1; mask < num_masks(); ++mask) {
        const int low = std::countr_zero(mask);
        const std::uint8_t skip = size_[mask & (mask - 1)];
        const std::uint8_t take = 1 + size_[mask & ~conflict_[static_cast<std::size_t>(low)]];
        size_[mask] = std::max(skip, take);
    }
}

} // namespace matchlab::detail
