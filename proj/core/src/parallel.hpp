#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace fisheye::detail {

// Runs fn(row_begin, row_end) over disjoint contiguous row ranges, one per
// worker. Callers must only write to their own rows; results are then
// independent of the thread count.
template <typename Fn>
void parallel_rows(int height, Fn&& fn) {
    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    const int workers = std::clamp(std::min(hw, height), 1, 64);
    if (workers <= 1) {
        fn(0, height);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const int chunk = (height + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int y0 = w * chunk;
        const int y1 = std::min(y0 + chunk, height);
        if (y0 >= y1) break;
        pool.emplace_back([&fn, y0, y1] { fn(y0, y1); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace fisheye::detail
