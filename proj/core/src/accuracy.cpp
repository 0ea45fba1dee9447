#include "sgfield/accuracy.hpp"

#include <algorithm>
#include <mutex>

namespace sgfield {

void parallel_for(std::int64_t n, int threads, const std::function<void(std::int64_t)>& body) {
    if (n <= 0) return;
    threads = int(std::max<std::int64_t>(1, std::min<std::int64_t>(threads, n)));
    if (threads == 1) {
        for (std::int64_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::int64_t chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        std::int64_t lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::int64_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

int default_thread_count() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : int(hc);
}

}  // namespace sgfield
