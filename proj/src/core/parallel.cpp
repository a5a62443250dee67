#include "hqclab/core/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hqclab
{
namespace
{
std::size_t initial_threads()
{
    if (char const* env = std::getenv("HQCLAB_THREADS"))
    {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0)
            return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::atomic<std::size_t>& thread_setting()
{
    static std::atomic<std::size_t> n{initial_threads()};
    return n;
}
}  // namespace

std::size_t default_threads()
{
    return thread_setting().load();
}

void set_default_threads(std::size_t n)
{
    thread_setting().store(std::max<std::size_t>(1, n));
}

void parallel_for(std::size_t n,
                  std::function<void(std::size_t)> const& body,
                  std::size_t threads)
{
    if (threads == 0)
        threads = default_threads();
    threads = std::min(threads, n);
    if (threads <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }

    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w)
    {
        std::size_t const begin = n * w / threads;
        std::size_t const end = n * (w + 1) / threads;
        workers.emplace_back([&, begin, end] {
            try
            {
                for (std::size_t i = begin; i < end; ++i)
                    body(i);
            }
            catch (...)
            {
                std::lock_guard lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
            }
        });
    }
    workers.clear();
    if (first_error)
        std::rethrow_exception(first_error);
}

}  // namespace hqclab
