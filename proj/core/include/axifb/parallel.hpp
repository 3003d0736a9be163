#pragma once

#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace axifb {

void set_num_threads(int n);
int num_threads();

// Runs fn(k) for k in [0, n) on a static stride; results must be written by index
// so that the outcome does not depend on scheduling. The first exception is rethrown.
template <class Fn>
void parallel_for(int n, Fn&& fn) {
    int nt = std::min(num_threads(), n);
    if (nt <= 1) {
        for (int k = 0; k < n; ++k) fn(k);
        return;
    }
    std::exception_ptr err;
    std::mutex m;
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (int k = t; k < n; k += nt) fn(k);
            } catch (...) {
                std::lock_guard<std::mutex> lock(m);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace axifb
