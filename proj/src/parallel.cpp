#include "annuli/parallel.hpp"

#include <cstdlib>
#include <string>
#include <thread>

#include <tbb/global_control.h>
#include <tbb/parallel_for.h>

#include "annuli/format.hpp"

namespace annuli {

int configured_threads()
{
    int n = 0;
    if (const char* env = std::getenv("ANNULI_THREADS"))
    {
        try
        {
            n = static_cast<int>(parse_integer(trim(env)));
        }
        catch (const ParseError&)
        {
            n = 0;
        }
    }
    if (n <= 0)
        n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body)
{
    if (n == 0)
        return;
    int threads = configured_threads();
    if (threads == 1 || n == 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    static thread_local int depth = 0;
    if (depth > 0)
    {
        tbb::parallel_for(std::size_t{0}, n, [&](std::size_t i) { body(i); });
        return;
    }
    tbb::global_control limit(tbb::global_control::max_allowed_parallelism,
                              static_cast<std::size_t>(threads));
    tbb::parallel_for(std::size_t{0}, n, [&](std::size_t i) {
        struct Nesting
        {
            Nesting() { ++depth; }
            ~Nesting() { --depth; }
        } nesting;
        body(i);
    });
}

}  // namespace annuli
