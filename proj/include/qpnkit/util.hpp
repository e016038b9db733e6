#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>

namespace qpnkit {

/* Exact binomial coefficient.  Arguments here stay tiny (monomial counts in a
 * handful of variables), so uint64 never overflows. */
inline std::uint64_t binomial(std::int64_t n, std::int64_t k)
{
    if (k < 0 || n < 0 || k > n)
        return 0;
    if (k > n - k)
        k = n - k;
    std::uint64_t r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        r = r * static_cast<std::uint64_t>(n - k + i);
        r /= static_cast<std::uint64_t>(i);
    }
    return r;
}

/* Worker count for degree sweeps.  QPNKIT_THREADS, when set to a positive
 * number, is the cap and is honored exactly; otherwise the hardware count. */
inline unsigned thread_budget()
{
    const char* env = std::getenv("QPNKIT_THREADS");
    if (env != nullptr) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1)
            return static_cast<unsigned>(v > 64 ? 64 : v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace qpnkit
