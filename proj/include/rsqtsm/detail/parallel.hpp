#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace rsqtsm::detail {

// Run `work(chunk)` for every chunk in [0, num_chunks). Chunks are claimed
// from an atomic counter; results must be stored per chunk by the caller so
// the final fold order is independent of the thread schedule.
inline void parallel_chunks(std::uint64_t num_chunks, int threads,
                            const std::function<void(std::uint64_t)>& work) {
    if (threads <= 1 || num_chunks <= 1) {
        for (std::uint64_t c = 0; c < num_chunks; ++c) work(c);
        return;
    }
    const auto workers = static_cast<std::uint64_t>(threads) < num_chunks
                             ? static_cast<std::uint64_t>(threads)
                             : num_chunks;
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::uint64_t c = next.fetch_add(1);
                if (c >= num_chunks) return;
                try {
                    work(c);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// Streaming mean / variance (Welford), mergeable in deterministic chunk order
// via the pairwise update of Chan et al.
struct RunningStats {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }

    void merge(const RunningStats& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double total = static_cast<double>(n + o.n);
        const double delta = o.mean - mean;
        m2 += o.m2 + delta * delta * (static_cast<double>(n) * static_cast<double>(o.n)) / total;
        mean += delta * static_cast<double>(o.n) / total;
        n += o.n;
    }

    double sample_variance() const {
        return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
    }

    double se_of_mean() const {
        return n > 1 ? std::sqrt(sample_variance() / static_cast<double>(n)) : 0.0;
    }
};

// Deterministic pairwise (tree) summation over a contiguous buffer.
inline double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

}  // namespace rsqtsm::detail
