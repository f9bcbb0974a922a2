#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace matchlab {

/// Trials are processed in fixed-size blocks; each block owns an accumulator
/// and blocks are merged in index order, so results do not depend on the
/// number of worker threads.
inline constexpr std::uint64_t kTrialBlock = 4096;

inline unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Runs body(acc, begin, end) over [0, count) in blocks of `block` items and
/// returns the per-block accumulators in block order.
template <class Acc, class Body>
std::vector<Acc> run_blocks(std::uint64_t count, unsigned threads, const Acc& init, Body&& body,
                            std::uint64_t block = kTrialBlock) {
    const std::uint64_t n_blocks = (count + block - 1) / block;
    std::vector<Acc> accs(n_blocks, init);
    if (n_blocks == 0) return accs;

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            const std::uint64_t b = next.fetch_add(1);
            if (b >= n_blocks) return;
            try {
                const std::uint64_t begin = b * block;
                body(accs[b], begin, std::min(count, begin + block));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n_blocks);
                return;
            }
        }
    };

    const unsigned n_threads =
        static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), n_blocks));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return accs;
}

} // namespace matchlab
