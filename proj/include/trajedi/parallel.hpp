#ifndef TRAJEDI_PARALLEL_HPP
#define TRAJEDI_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace trajedi {

/// Runs fn(k) for every k in [0, count) on up to `threads` workers.
/// Work is split into fixed contiguous blocks; callers write results to slot k,
/// so output never depends on scheduling. The first exception is rethrown.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
    if (threads == 1) {
        for (std::size_t k = 0; k < count; ++k) {
            fn(k);
        }
        return;
    }

    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    const std::size_t block = (count + threads - 1) / threads;
    for (std::size_t w = 0; w < threads; ++w) {
        const std::size_t begin = w * block;
        const std::size_t end = std::min(count, begin + block);
        if (begin >= end) {
            break;
        }
        workers.emplace_back([&, begin, end] {
            try {
                for (std::size_t k = begin; k < end; ++k) {
                    fn(k);
                }
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
            }
        });
    }
    workers.clear();
    if (error) {
        std::rethrow_exception(error);
    }
}

} // namespace trajedi

#endif // TRAJEDI_PARALLEL_HPP
