#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace oedg {

/// Runs body(i) for i in [0, n), in parallel when OpenMP is available. The first exception is rethrown.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    std::exception_ptr error;
    std::mutex lock;
    const long count = static_cast<long>(n);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> guard(lock);
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace oedg
