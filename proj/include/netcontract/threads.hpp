/**
 * @file threads.hpp
 * @brief Thread-count policy for the parallel kernels.
 */
#pragma once

namespace netcontract {

/// Threads the parallel kernels may use: NETCONTRACT_THREADS when set to a
/// positive integer, the OpenMP default when unset or 0, and 1 when OpenMP is
/// unavailable.
int effective_threads();

}  // namespace netcontract
