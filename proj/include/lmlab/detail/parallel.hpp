#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lmlab {

// Parallelism budget handed down by callers. Work is split into a fixed set of
// chunks independent of `workers`, so results never depend on it.
struct Parallelism {
    unsigned workers = 1;
};

namespace detail {

template <class F>
void parallel_for(std::size_t count, Parallelism par, F&& body) {
    unsigned nthreads = std::max(1u, par.workers);
    if (nthreads == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    nthreads = static_cast<unsigned>(std::min<std::size_t>(nthreads, count));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(count);
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(nthreads - 1);
    for (unsigned w = 1; w < nthreads; ++w) threads.emplace_back(worker);
    worker();
    for (auto& th : threads) th.join();
    if (failure) std::rethrow_exception(failure);
}

} // namespace detail
} // namespace lmlab
