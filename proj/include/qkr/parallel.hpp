#ifndef QKR_PARALLEL_HPP
#define QKR_PARALLEL_HPP

#include <algorithm>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace qkr {

/// Runs fn(i) for i in [0, n) across n_threads workers. Work is handed out by
/// index, so results written to slot i are identical for any thread count;
/// callers do any reduction afterwards in fixed order.
inline void parallel_for(int n, int n_threads, const std::function<void(int)>& fn) {
    n_threads = std::max(1, n_threads);
    if (n_threads == 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    const int stride = n_threads;
    for (int t = 0; t < n_threads; ++t) {
        workers.emplace_back([&, t]() {
            try {
                for (int i = t; i < n; i += stride) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    if (error) std::rethrow_exception(error);
}

} // namespace qkr

#endif
