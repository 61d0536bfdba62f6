#pragma once

// Chunked range scans with a deterministic ordered reduction. Chunk
// boundaries depend only on the range and chunk size, never on the worker
// count, so results are bit-identical for any number of workers.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace phisig {

struct ScanOptions {
    unsigned workers = 1;
    std::uint64_t chunk_size = std::uint64_t{1} << 15;
};

/// Runs fn(lo, hi) over consecutive chunks [lo, hi) covering [first, last)
/// and returns the per-chunk results in range order. If any chunk throws,
/// the exception from the lowest-indexed failing chunk is rethrown.
template <class Fn>
auto map_chunks(std::uint64_t first, std::uint64_t last, const ScanOptions& opts, Fn&& fn)
    -> std::vector<decltype(fn(first, last))> {
    using R = decltype(fn(first, last));
    if (last <= first)
        return {};
    const std::uint64_t chunk = std::max<std::uint64_t>(1, opts.chunk_size);
    const std::uint64_t n_chunks = (last - first + chunk - 1) / chunk;

    std::vector<std::optional<R>> slots(n_chunks);
    std::vector<std::exception_ptr> errors(n_chunks);
    std::atomic<std::uint64_t> next{0};

    auto work = [&] {
        for (std::uint64_t c; (c = next.fetch_add(1)) < n_chunks;) {
            const std::uint64_t lo = first + c * chunk;
            const std::uint64_t hi = std::min(last, lo + chunk);
            try {
                slots[c].emplace(fn(lo, hi));
            } catch (...) {
                errors[c] = std::current_exception();
            }
        }
    };

    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, opts.workers), n_chunks));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i)
            pool.emplace_back(work);
    }

    std::vector<R> out;
    out.reserve(n_chunks);
    for (std::uint64_t c = 0; c < n_chunks; ++c) {
        if (errors[c])
            std::rethrow_exception(errors[c]);
        out.push_back(std::move(*slots[c]));
    }
    return out;
}

/// Folds chunk results left to right with `combine`.
template <class T, class Fn, class Combine>
T chunked_reduce(std::uint64_t first, std::uint64_t last, const ScanOptions& opts, T init, Fn&& fn,
                 Combine&& combine) {
    for (auto& part : map_chunks(first, last, opts, fn))
        init = combine(std::move(init), std::move(part));
    return init;
}

/// Per-index map over [first, last), results in index order.
template <class Fn>
auto parallel_map(std::uint64_t first, std::uint64_t last, const ScanOptions& opts, Fn&& fn)
    -> std::vector<decltype(fn(first))> {
    using R = decltype(fn(first));
    std::vector<R> out;
    out.reserve(last > first ? last - first : 0);
    for (auto& part : map_chunks(first, last, opts, [&](std::uint64_t lo, std::uint64_t hi) {
             std::vector<R> v;
             v.reserve(hi - lo);
             for (std::uint64_t i = lo; i < hi; ++i)
                 v.push_back(fn(i));
             return v;
         }))
        for (auto& r : part)
            out.push_back(std::move(r));
    return out;
}

} // namespace phisig
