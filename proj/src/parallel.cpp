#include "purify/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace purify {

int worker_count(std::size_t tasks) {
    int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("PURIFY_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap > 0) n = std::min(n, cap);
        } catch (const std::exception&) {
            // Ignore malformed values.
        }
    }
    return std::max(1, std::min(n, static_cast<int>(std::max<std::size_t>(tasks, 1))));
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const int workers = worker_count(count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace purify
