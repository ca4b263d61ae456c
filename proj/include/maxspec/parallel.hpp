#ifndef MAXSPEC_PARALLEL_HPP
#define MAXSPEC_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace maxspec {
namespace detail {

/// Run fn(i) for i in [0, n) on `threads` workers (0 = hardware concurrency).
/// Work items are claimed from an atomic counter; callers keep determinism by
/// writing results into per-index slots, so scheduling never affects output.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    if (n == 0) return;
    unsigned want = threads != 0 ? threads : std::thread::hardware_concurrency();
    if (want < 1) want = 1;
    if (static_cast<std::size_t>(want) > n) want = static_cast<unsigned>(n);
    if (want == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::vector<std::thread> pool;
    pool.reserve(want);
    for (unsigned t = 0; t < want; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n || failed.load()) return;
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace detail
}  // namespace maxspec

#endif
