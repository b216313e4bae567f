#ifndef WPCVI_PARALLEL_HPP
#define WPCVI_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace wpcvi {

/// Runs fn(job) for job in [0, jobs) on up to `threads` worker threads.
///
/// Jobs are statically interleaved across workers. Callers write results into
/// per-job slots, so output does not depend on the thread count. The first
/// exception (lowest job index) is rethrown after all workers join.
template <class Fn>
void parallel_for(std::size_t jobs, int threads, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(jobs, static_cast<std::size_t>(std::max(1, threads)));
    if (workers <= 1) {
        for (std::size_t j = 0; j < jobs; ++j) fn(j);
        return;
    }
    std::vector<std::exception_ptr> errors(jobs);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t j = w; j < jobs; j += workers) {
                try {
                    fn(j);
                } catch (...) {
                    errors[j] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace wpcvi

#endif  // WPCVI_PARALLEL_HPP
