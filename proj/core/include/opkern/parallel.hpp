#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace opk {

/* Splits [0, count) into contiguous chunks, one per worker, and returns the
 * per-chunk results in chunk order. With workers <= 1 runs inline. Results
 * must be merged by the caller in order, which keeps every parallel code
 * path deterministic. */
template <class R>
std::vector<R> parallel_chunks(std::size_t count, int workers,
                               const std::function<R(std::size_t, std::size_t)>& fn) {
    std::size_t w = workers < 1 ? 1 : static_cast<std::size_t>(workers);
    if (w > count) w = count == 0 ? 1 : count;
    std::vector<R> results(w);
    if (w <= 1) {
        results[0] = fn(0, count);
        return results;
    }
    std::vector<std::thread> threads;
    threads.reserve(w);
    std::size_t chunk = count / w, extra = count % w, begin = 0;
    for (std::size_t k = 0; k < w; ++k) {
        std::size_t end = begin + chunk + (k < extra ? 1 : 0);
        threads.emplace_back([&, k, begin, end] { results[k] = fn(begin, end); });
        begin = end;
    }
    for (auto& t : threads) t.join();
    return results;
}

}  // namespace opk
