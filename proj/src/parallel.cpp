#include "cover/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace cover {

namespace {
std::atomic<int> g_max_threads{0}; // 0 = auto
}

int max_threads() {
    if (const char* env = std::getenv("COVER_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const int n = g_max_threads.load();
    if (n > 0) return n;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void set_max_threads(int n) { g_max_threads.store(n); }

void parallel_chunks(std::size_t n_chunks, const std::function<void(std::size_t)>& work) {
    if (n_chunks == 0) return;
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(max_threads()), n_chunks);
    if (workers <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) work(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t c = next.fetch_add(1);
                if (c >= n_chunks) return;
                work(c);
            }
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace cover
