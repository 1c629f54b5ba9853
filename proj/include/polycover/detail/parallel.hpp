#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>

namespace polycover {

template <typename T>
std::vector<T> parallel_map(int count, int workers, const std::function<T(int)>& f) {
    std::vector<T> out(static_cast<std::size_t>(std::max(count, 0)));
    workers = std::clamp(workers, 1, std::max(count, 1));
    if (workers == 1) {
        for (int i = 0; i < count; ++i) out[i] = f(i);
        return out;
    }
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            // strided split: worker w owns indices w, w+workers, ...
            for (int i = w; i < count; i += workers) {
                try {
                    out[i] = f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

}  // namespace polycover
