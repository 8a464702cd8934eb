#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace fuzzyfp {

/// Runs fn(i) for every i in [0, n) on up to `jobs` threads.
///
/// Work is split into contiguous blocks. Callers write results into
/// per-index slots and reduce sequentially afterwards, so every reduction
/// is independent of the job count. If several indices throw, the
/// exception from the lowest block is rethrown, which is the same one a
/// sequential run would have hit first.
template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
    const std::size_t workers =
        std::min<std::size_t>(n, jobs > 1 ? static_cast<std::size_t>(jobs) : 1);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t block = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            const std::size_t begin = w * block;
            const std::size_t end = std::min(n, begin + block);
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace fuzzyfp
