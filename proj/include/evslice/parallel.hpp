#ifndef EVSLICE_PARALLEL_HPP
#define EVSLICE_PARALLEL_HPP

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace evslice {

// Runs fn(begin, end) over contiguous chunks of [0, n). Each index must write
// only its own output slot, so the result is identical for any job count.
inline void parallel_chunks(std::int64_t n, int jobs,
                            const std::function<void(std::int64_t, std::int64_t)>& fn) {
    if (n <= 0)
        return;
    if (jobs < 1)
        jobs = 1;
    std::int64_t workers = std::min<std::int64_t>(jobs, n);
    if (workers == 1) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(std::size_t(workers));
    std::int64_t chunk = (n + workers - 1) / workers;
    for (std::int64_t w = 0; w < workers; ++w) {
        std::int64_t begin = w * chunk;
        std::int64_t end = std::min(n, begin + chunk);
        if (begin >= end)
            break;
        threads.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& t : threads)
        t.join();
}

} // namespace evslice

#endif
