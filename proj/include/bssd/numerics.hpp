#pragma once

// Deterministic reduction, composite Simpson weights and a small
// index-partitioned parallel loop.

#include "bssd/errors.hpp"

#include <algorithm>
#include <cstddef>
#include <exception>
#include <span>
#include <thread>
#include <vector>

namespace bssd {

/// Pairwise summation in index order; the result depends only on the
/// input sequence, never on how it was produced.
inline double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 8) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

/// Composite Simpson weights for `nodes` equally spaced points with
/// spacing h. `nodes` must be odd and at least 3.
inline std::vector<double> simpson_weights(std::size_t nodes, double h) {
    if (nodes < 3 || nodes % 2 == 0) {
        throw DomainError("simpson rule needs an odd node count >= 3");
    }
    std::vector<double> w(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        const double c = (i == 0 || i + 1 == nodes) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        w[i] = c * h / 3.0;
    }
    return w;
}

/// Runs body(i) for i in [0, count) on `workers` threads, each owning a
/// contiguous block of indices. The first exception thrown (lowest block)
/// is rethrown.
template <class Body>
void parallel_for(std::size_t count, std::size_t workers, Body&& body) {
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    const std::size_t block = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            try {
                const std::size_t end = std::min(count, (w + 1) * block);
                for (std::size_t i = w * block; i < end; ++i) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

} // namespace bssd
