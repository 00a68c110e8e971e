#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace perifrac {

inline int default_threads() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

// Splits [0, n) into `nthreads` contiguous blocks and runs
// body(block, begin, end) on each. Blocks are fixed by (n, nthreads) alone,
// so any per-block partial results combine in a reproducible order.
template <class Body>
void parallel_blocks(std::size_t n, int nthreads, Body&& body) {
    if (nthreads < 1) nthreads = 1;
    const std::size_t nb = std::min<std::size_t>(static_cast<std::size_t>(nthreads), n ? n : 1);
    if (nb <= 1) {
        body(0, std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nb - 1);
    const std::size_t chunk = (n + nb - 1) / nb;
    for (std::size_t b = 1; b < nb; ++b) {
        const std::size_t i0 = std::min(n, b * chunk);
        const std::size_t i1 = std::min(n, i0 + chunk);
        pool.emplace_back([&body, b, i0, i1] { body(b, i0, i1); });
    }
    body(0, std::size_t{0}, std::min(n, chunk));
    for (auto& t : pool) t.join();
}

template <class Fn>
void parallel_for(std::size_t n, int nthreads, Fn&& fn) {
    parallel_blocks(n, nthreads, [&fn](std::size_t, std::size_t i0, std::size_t i1) {
        for (std::size_t i = i0; i < i1; ++i) fn(i);
    });
}

// Deterministic sum: per-block partials accumulated in index order, then
// combined in block order. Bit-identical across runs for fixed (n, nthreads).
template <class Fn>
double parallel_sum(std::size_t n, int nthreads, Fn&& term) {
    if (nthreads < 1) nthreads = 1;
    std::vector<double> partial(static_cast<std::size_t>(nthreads), 0.0);
    parallel_blocks(n, nthreads, [&](std::size_t b, std::size_t i0, std::size_t i1) {
        double acc = 0.0;
        for (std::size_t i = i0; i < i1; ++i) acc += term(i);
        partial[b] = acc;
    });
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

}  // namespace perifrac
