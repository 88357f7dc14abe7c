/**
 * @file threads.cpp
 * @brief NETCONTRACT_THREADS resolution.
 */
#include "netcontract/threads.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace netcontract {

int effective_threads() {
    int fallback = 1;
#ifdef _OPENMP
    fallback = omp_get_max_threads();
#endif
    const char* env = std::getenv("NETCONTRACT_THREADS");
    if (env == nullptr || *env == '\0') return fallback;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 0) return fallback;
    if (v == 0) return fallback;
    return static_cast<int>(v);
}

}  // namespace netcontract
