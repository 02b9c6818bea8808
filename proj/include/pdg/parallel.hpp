#pragma once

#include <algorithm>
#include <exception>
#include <future>
#include <thread>
#include <vector>

namespace pdg {

// Runs body(i) for i in [0, n) over contiguous chunks on the available
// hardware threads. The first exception thrown by any chunk is rethrown.
template <class Body>
void parallel_for(int n, Body&& body)
{
    const int workers = std::max(1, std::min<int>(static_cast<int>(std::thread::hardware_concurrency()), n / 64));
    if (workers <= 1) {
        for (int i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::vector<std::future<void>> jobs;
    const int chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int begin = w * chunk;
        const int end = std::min(n, begin + chunk);
        if (begin >= end)
            break;
        jobs.push_back(std::async(std::launch::async, [&body, begin, end] {
            for (int i = begin; i < end; ++i)
                body(i);
        }));
    }
    std::exception_ptr error;
    for (auto& job : jobs) {
        try {
            job.get();
        } catch (...) {
            if (!error)
                error = std::current_exception();
        }
    }
    if (error)
        std::rethrow_exception(error);
}

} // namespace pdg
