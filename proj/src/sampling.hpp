#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "matchlab/graph.hpp"
#include "matchlab/rng.hpp"

namespace matchlab::detail {

inline std::vector<std::uint64_t> thresholds_of(std::span<const double> probs) {
    std::vector<std::uint64_t> th(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) th[i] = bernoulli_threshold(probs[i]);
    return th;
}

/// One 64-bit draw per edge, in edge-id order. The pruned flag uses the same
/// draw as the original flag, so pruned realizations are subsets of original
/// ones and every stream built on this sampler is coupled edge by edge.
inline void draw_realization(Rng& rng, std::span<const std::uint64_t> th, std::uint8_t* out) {
    for (std::size_t e = 0; e < th.size(); ++e) out[e] = (rng.next() >> 11) < th[e];
}

inline void draw_coupled(Rng& rng, std::span<const std::uint64_t> th_pruned,
                         std::span<const std::uint64_t> th_original, std::uint8_t* pruned,
                         std::uint8_t* original) {
    for (std::size_t e = 0; e < th_pruned.size(); ++e) {
        const std::uint64_t r = rng.next() >> 11;
        pruned[e] = r < th_pruned[e];
        original[e] = r < th_original[e];
    }
}

/// Fisher-Yates from the back: for i = k-1 .. 1 swap items[i], items[bounded(i+1)].
inline void shuffle(Rng& rng, std::vector<EdgeId>& items) {
    for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[rng.bounded(i)]);
}

/// Vertex flags that reset in O(1) between trials.
class StampSet {
public:
    explicit StampSet(std::size_t n) : stamp_(n, 0) {}
    void next_round() noexcept { ++round_; }
    bool contains(std::size_t i) const noexcept { return stamp_[i] == round_; }
    void insert(std::size_t i) noexcept { stamp_[i] = round_; }

private:
    std::vector<std::uint64_t> stamp_;
    std::uint64_t round_ = 1;
};

} // namespace matchlab::detail
