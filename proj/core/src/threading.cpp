#include "symport/threading.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace symport {

namespace {
std::atomic<int> g_default_threads{0};

int resolve(int n)
{
    if (n > 0) return n;
    int d = g_default_threads.load();
    if (d > 0) return d;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}
}  // namespace

void set_default_threads(int n)
{
    g_default_threads.store(n > 0 ? n : 0);
}

int default_threads()
{
    return resolve(0);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int threads)
{
    if (n == 0) return;
    int nt = resolve(threads);
    if (nt <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) break;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    std::size_t spawn = std::min<std::size_t>(static_cast<std::size_t>(nt), n);
    pool.reserve(spawn);
    for (std::size_t t = 1; t < spawn; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

void parallel_chunks(std::size_t n, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn,
                     int threads)
{
    if (n == 0) return;
    if (chunk_size == 0) chunk_size = 1;
    std::size_t n_chunks = (n + chunk_size - 1) / chunk_size;
    parallel_for(
        n_chunks,
        [&](std::size_t c) {
            std::size_t begin = c * chunk_size;
            std::size_t end = std::min(n, begin + chunk_size);
            fn(c, begin, end);
        },
        threads);
}

}  // namespace symport
