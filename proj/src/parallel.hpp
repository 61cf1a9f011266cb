#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace subk::detail {

// Runs body(i) for i in [0, n) across up to `lanes` threads (0: hardware
// concurrency). Tasks are strided over lanes; each task must write only to
// its own output slot.
template <class Body>
void parallel_for(std::size_t n, unsigned lanes, Body&& body) {
    if (lanes == 0) lanes = std::max(1u, std::thread::hardware_concurrency());
    lanes = static_cast<unsigned>(std::min<std::size_t>(lanes, n));
    if (lanes <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(lanes);
    {
        std::vector<std::jthread> threads;
        threads.reserve(lanes);
        for (unsigned lane = 0; lane < lanes; ++lane) {
            threads.emplace_back([&, lane] {
                try {
                    for (std::size_t i = lane; i < n; i += lanes) body(i);
                } catch (...) {
                    errors[lane] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace subk::detail
