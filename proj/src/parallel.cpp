#include "soliton/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace soliton {

int thread_count() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (const char* env = std::getenv("SOLITON_LAB_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap >= 1) n = std::min(n, cap);
        } catch (...) {
            // unparsable value: ignore, keep hardware default
        }
    }
    return n;
}

void parallel_chunks(std::size_t n, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    chunk_size = std::max<std::size_t>(1, chunk_size);
    const std::size_t chunks = chunk_count(n, chunk_size);
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(thread_count()), chunks);
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c)
            fn(c * chunk_size, std::min(n, (c + 1) * chunk_size), c);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= chunks) return;
            fn(c * chunk_size, std::min(n, (c + 1) * chunk_size), c);
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(run);
    for (auto& t : threads) t.join();
}

double parallel_sum(std::size_t n, std::size_t chunk_size,
                    const std::function<double(std::size_t, std::size_t)>& piece) {
    chunk_size = std::max<std::size_t>(1, chunk_size);
    std::vector<double> partial(chunk_count(n, chunk_size), 0.0);
    parallel_chunks(n, chunk_size, [&](std::size_t b, std::size_t e, std::size_t c) {
        partial[c] = piece(b, e);
    });
    double total = 0.0;
    for (double p : partial) total += p;  // fixed order
    return total;
}

} // namespace soliton
