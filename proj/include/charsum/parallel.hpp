#pragma once

#include <atomic>
#include <cstddef>
#include <stdexcept>
#include <thread>
#include <type_traits>
#include <vector>

namespace charsum {

// Order-preserving parallel map over [0, count).  Each index writes its own
// slot, so the result is identical for any thread count; workers pull
// indices from a shared atomic cursor.
template <typename Fn>
auto parallel_map(std::size_t count, unsigned threads, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn, std::size_t>> {
    using R = std::invoke_result_t<Fn, std::size_t>;
    if (threads == 0) throw std::invalid_argument("parallel_map: threads == 0");
    std::vector<R> out(count);
    if (count == 0) return out;
    if (threads == 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = cursor.fetch_add(1);
            if (i >= count) return;
            out[i] = fn(i);
        }
    };
    std::vector<std::thread> pool;
    unsigned n = threads < count ? threads : static_cast<unsigned>(count);
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return out;
}

}  // namespace charsum
