#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "matchlab/graph.hpp"

namespace matchlab::detail {

inline constexpr std::size_t kMaxEnumerationEdges = 22;

/// Exhaustive view of every realization of a small graph: the probability of
/// each edge subset and its maximum matching size.
class RealizationTable {
public:
    explicit RealizationTable(const StochasticGraph& g);

    std::size_t num_edges() const noexcept { return m_; }
    std::uint32_t num_masks() const noexcept { return std::uint32_t{1} << m_; }
    double probability(std::uint32_t mask) const noexcept {
        return low_prob_[mask & low_mask_] * high_prob_[mask >> low_bits_];
    }
    int max_matching(std::uint32_t mask) const noexcept { return size_[mask]; }
    /// Edges sharing an endpoint with e (e included).
    std::uint32_t conflicts(std::size_t e) const noexcept { return conflict_[e]; }

private:
    std::size_t m_;
    std::size_t low_bits_;
    std::uint32_t low_mask_;
    std::vector<double> low_prob_;
    std::vector<double> high_prob_;
    std::vector<std::uint8_t> size_;
    std::vector<std::uint32_t> conflict_;
};

} // namespace matchlab::detail
