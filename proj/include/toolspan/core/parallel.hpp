#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace toolspan {

// Runs fn(i) for i in [0, count) on at most `workers` threads. Results are
// written by index so callers keep input order. The first exception thrown by
// any task is rethrown after all workers join.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
    if (count == 0) return;
    workers = std::clamp<std::size_t>(workers, 1, count);
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                auto i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next.store(count);
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

template <typename T, typename Fn>
auto parallel_map(const std::vector<T>& items, std::size_t workers, Fn&& fn)
    -> std::vector<decltype(fn(items.front()))> {
    std::vector<decltype(fn(items.front()))> out(items.size());
    parallel_for(items.size(), workers, [&](std::size_t i) { out[i] = fn(items[i]); });
    return out;
}

}  // namespace toolspan
