#include <array>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "doctest.h"
#include "soliton/parallel.hpp"

using namespace soliton;

namespace {

double noisy_sum(std::size_t n) {
    // summands with wildly mixed magnitudes so a different reduction order
    // would actually change the bits
    return parallel_sum(n, 97, [](std::size_t b, std::size_t e) {
        double s = 0;
        for (std::size_t i = b; i < e; ++i)
            s += (i % 3 ? 1.0 : -1.0) * std::exp(0.001 * static_cast<double>(i % 997)) /
                 static_cast<double>(i + 1);
        return s;
    });
}

} // namespace

TEST_CASE("worker count does not change the bits of a reduction") {
    setenv("SOLITON_LAB_THREADS", "1", 1);
    CHECK(thread_count() == 1);
    const double one = noisy_sum(100000);
    setenv("SOLITON_LAB_THREADS", "7", 1);
    const double seven = noisy_sum(100000);
    unsetenv("SOLITON_LAB_THREADS");
    const double def = noisy_sum(100000);
    CHECK(one == seven);
    CHECK(one == def);
}

TEST_CASE("chunks cover the range exactly once") {
    const std::size_t n = 1003, cs = 64;
    const std::size_t nc = chunk_count(n, cs);
    // record ranges first, assert single-threaded afterwards
    std::vector<std::array<std::size_t, 2>> ranges(nc, {n + 1, n + 1});
    parallel_chunks(n, cs, [&](std::size_t b, std::size_t e, std::size_t idx) {
        ranges[idx] = {b, e};
    });
    std::vector<int> hits(n, 0);
    for (std::size_t c = 0; c < nc; ++c) {
        CHECK(ranges[c][0] == c * cs);
        CHECK(ranges[c][1] <= n);
        for (std::size_t i = ranges[c][0]; i < ranges[c][1]; ++i) ++hits[i];
    }
    for (std::size_t i = 0; i < n; ++i) REQUIRE(hits[i] == 1);
    CHECK(chunk_count(0, cs) == 0);
}
