#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace gxwt {

namespace detail {
inline std::atomic<std::size_t> thread_override{0};
} // namespace detail

/// Number of worker threads used by the row-parallel kernels.
/// GXWT_THREADS (positive integer) caps the hardware concurrency; an explicit
/// set_thread_count() takes precedence over both.
inline std::size_t thread_count() {
    if (auto n = detail::thread_override.load(); n > 0) return n;
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("GXWT_THREADS")) {
        try {
            long cap = std::stol(env);
            if (cap > 0) n = std::min(n, static_cast<std::size_t>(cap));
        } catch (const std::exception&) {
        }
    }
    return n;
}

/// 0 restores the environment-driven default.
inline void set_thread_count(std::size_t n) { detail::thread_override.store(n); }

namespace detail {

/// Runs body(begin, end) over contiguous chunks of [0, n). Every index is
/// handled by exactly one call, so results never depend on the thread count as
/// long as body writes only to per-index outputs.
template <class Body>
void parallel_chunks(std::size_t n, Body&& body) {
    const std::size_t workers = std::min(thread_count(), n);
    if (workers <= 1) {
        if (n > 0) body(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

} // namespace detail
} // namespace gxwt
