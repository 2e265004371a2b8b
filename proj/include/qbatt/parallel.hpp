// parallel.hpp — bounded worker pool over an index range.
//
// Tasks write into pre-indexed slots, so results are identical for any worker
// count; the first exception thrown by a task is rethrown on the caller.

#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace qbatt {

inline void parallel_for(std::size_t count, int workers,
                         const std::function<void(std::size_t)>& task) {
    if (count == 0) return;
    const int pool = std::min<std::size_t>(std::max(workers, 1), count);
    if (pool <= 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count || failed.load()) return;
            try {
                task(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(pool);
    for (int w = 0; w < pool; ++w) threads.emplace_back(body);
    for (std::thread& t : threads) t.join();
    if (failed.load() && error) std::rethrow_exception(error);
}

// Default worker count: DICKE_BATTERY_WORKERS, else hardware concurrency.
int default_workers();

}  // namespace qbatt
