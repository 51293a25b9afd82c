#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace folab {

// Index-parallel map with deterministic output slots. Thread count is capped
// by FOLIATION_LAB_THREADS when set. Exceptions from workers are rethrown.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    std::size_t hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* cap = std::getenv("FOLIATION_LAB_THREADS")) {
        long v = std::strtol(cap, nullptr, 10);
        if (v >= 1) hw = std::min<std::size_t>(hw, static_cast<std::size_t>(v));
    }
    std::size_t workers = std::min(hw, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) fn(i);
            } catch (...) {
                errs[w] = std::current_exception();
            }
        });
    }
    for (std::thread& t : pool) t.join();
    for (std::exception_ptr& e : errs)
        if (e) std::rethrow_exception(e);
}

} // namespace folab
