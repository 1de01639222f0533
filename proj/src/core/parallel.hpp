#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "core/errors.hpp"

namespace chaosdual {

struct PathRange {
    std::int64_t begin = 0;
    std::int64_t end = 0;
};

inline int resolve_threads(int requested) {
    if (requested > 0) {
        return requested;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Fixed chunk grid over [0, count). The grid depends only on (count,
/// chunk_size), never on the number of worker threads, so reductions that
/// combine per-chunk partials in index order are reproducible across thread
/// counts. chunk_size <= 0 picks a default of at most 32 chunks.
inline std::vector<PathRange> make_chunks(std::int64_t count, std::int64_t chunk_size = 0) {
    if (count <= 0) {
        throw std::invalid_argument("make_chunks: count must be >= 1");
    }
    if (chunk_size <= 0) {
        chunk_size = (count + 31) / 32;
    }
    std::vector<PathRange> chunks;
    chunks.reserve(static_cast<std::size_t>((count + chunk_size - 1) / chunk_size));
    for (std::int64_t b = 0; b < count; b += chunk_size) {
        chunks.push_back({b, std::min(b + chunk_size, count)});
    }
    return chunks;
}

/// Runs work(worker_id, task_index) for task_index in [0, task_count) on
/// `threads` workers, claiming tasks dynamically. The first worker exception
/// is rethrown on the calling thread once all workers have stopped.
inline void run_tasks(std::size_t task_count, int threads,
                      const std::function<void(int, std::size_t)>& work) {
    threads = std::min<std::size_t>(resolve_threads(threads), task_count);
    if (threads <= 1) {
        for (std::size_t t = 0; t < task_count; ++t) {
            work(0, t);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto body = [&](int worker) {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t t = next.fetch_add(1, std::memory_order_relaxed);
            if (t >= task_count) {
                break;
            }
            try {
                work(worker, t);
            } catch (...) {
                {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                }
                failed.store(true, std::memory_order_relaxed);
                break;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads) - 1);
    for (int w = 1; w < threads; ++w) {
        pool.emplace_back(body, w);
    }
    body(0);
    for (auto& th : pool) {
        th.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

} // namespace chaosdual
