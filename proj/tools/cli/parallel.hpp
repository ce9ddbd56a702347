#pragma once

// Block-wise parallel evaluation of grid points with output in index order.

#include "cli/output.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace rabitherm::cli {

/// compute(i) yields the records of grid point i (possibly none).  Blocks of
/// points are evaluated by `threads` workers, then written in index order, so
/// output bytes do not depend on scheduling.  The exception of the lowest
/// failing index is rethrown.
inline void run_ordered(std::size_t n, int threads,
                        const std::function<std::vector<Record>(std::size_t)>& compute,
                        RecordSink& sink, std::size_t block = 2048) {
    const int workers = std::max(1, threads);
    for (std::size_t base = 0; base < n; base += block) {
        const std::size_t len = std::min(block, n - base);
        std::vector<std::vector<Record>> results(len);
        std::vector<std::exception_ptr> errors(len);
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            for (std::size_t k = next++; k < len; k = next++) {
                try {
                    results[k] = compute(base + k);
                } catch (...) {
                    errors[k] = std::current_exception();
                }
            }
        };
        if (workers == 1) {
            work();
        } else {
            std::vector<std::jthread> pool;
            for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        }
        for (std::size_t k = 0; k < len; ++k) {
            if (errors[k]) std::rethrow_exception(errors[k]);
            for (const auto& r : results[k]) sink.write(r);
        }
    }
}

}  // namespace rabitherm::cli

namespace rabitherm::cli {

/// Evaluates fn(0..n-1) on `threads` workers; results come back in index order.
template <class T>
std::vector<T> parallel_map(std::size_t n, int threads, const std::function<T(std::size_t)>& fn) {
    std::vector<T> out(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < n; k = next++) {
            try {
                out[k] = fn(k);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < threads; ++w) pool.emplace_back(work);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

}  // namespace rabitherm::cli
