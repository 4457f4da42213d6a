// Shared plumbing: error types, numeric helpers, thread configuration.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace apw {

// Exit-code-mapped error categories. invalid-argument reuses std::invalid_argument.
class certificate_error : public std::runtime_error {
public:
    explicit certificate_error(const std::string& what) : std::runtime_error(what) {}
};

class construction_error : public std::runtime_error {
public:
    explicit construction_error(const std::string& what) : std::runtime_error(what) {}
};

inline bool nearly_equal(double a, double b, double tol = 1e-9) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// Snap x to the nearest integer multiple of step; also report the snap error.
inline std::int64_t snap_to_step(double x, double step, double* err = nullptr) {
    const double q = x / step;
    const std::int64_t k = static_cast<std::int64_t>(std::llround(q));
    if (err) *err = x - static_cast<double>(k) * step;
    return k;
}

namespace detail {
inline unsigned& thread_count_ref() {
    static unsigned count = [] {
        if (const char* env = std::getenv("APWTK_THREADS")) {
            const long v = std::strtol(env, nullptr, 10);
            if (v >= 1) return static_cast<unsigned>(v);
        }
        return 1u;
    }();
    return count;
}
}  // namespace detail

inline unsigned thread_count() { return detail::thread_count_ref(); }
inline void set_thread_count(unsigned n) { detail::thread_count_ref() = std::max(1u, n); }

// Data-parallel index loop. fn(i) must write only to slots owned by index i so
// the result is independent of the thread count. A worker exception is
// captured and rethrown on the calling thread after the join.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    const unsigned threads = std::min<std::size_t>(thread_count(), count ? count : 1);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += threads) fn(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace apw
