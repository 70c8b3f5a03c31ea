#include "fforge/numerics/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace fforge {

int thread_count() {
    if (const char* env = std::getenv("FFORGE_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {
// Set on worker threads so nested calls run inline instead of multiplying threads.
thread_local bool t_inside_worker = false;
}  // namespace

void parallel_for(int n, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    const int workers = t_inside_worker ? 1 : std::min(n, thread_count());
    if (workers == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }

    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        const int lo = static_cast<int>(static_cast<long long>(n) * w / workers);
        const int hi = static_cast<int>(static_cast<long long>(n) * (w + 1) / workers);
        pool.emplace_back([&, w, lo, hi] {
            t_inside_worker = true;
            for (int i = lo; i < hi; ++i) {
                try {
                    fn(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    // Blocks are ordered, so the first failing block holds the lowest index.
    for (int w = 0; w < workers; ++w)
        if (errors[w]) std::rethrow_exception(errors[w]);
}

}  // namespace fforge
