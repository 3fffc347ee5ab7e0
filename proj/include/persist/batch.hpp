#pragma once

// Replicate kernels. Every batch has a serial reference and an OpenMP
// version; both write results by index, so output never depends on thread
// count or completion order.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "persist/engine.hpp"

namespace persist {

/// Seed of replicate `rep` under `master`. Shared across parameter levels
/// (common random numbers).
inline std::uint64_t replicate_seed(std::uint64_t master, int rep)
{
    return stream_seed(master, {0x7265706cULL, static_cast<std::uint64_t>(rep)});
}

/// Copies of `base` with seeds replicate_seed(master, 0..reps-1).
std::vector<SimConfig> replicate_configs(const SimConfig& base, std::uint64_t master, int reps);

std::vector<RunResult> run_batch_serial(std::span<const SimConfig> configs);
std::vector<RunResult> run_batch_parallel(std::span<const SimConfig> configs, int jobs);

/// Serial reference for jobs <= 1, OpenMP otherwise.
std::vector<RunResult> run_batch(std::span<const SimConfig> configs, int jobs);

/// Calls body(i) for i in [0, n). Bodies must only write to slot i of their output.
template <class Body>
void for_each_index(std::size_t n, int jobs, Body&& body)
{
    if (jobs <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (long long i = 0; i < count; ++i) {
        body(static_cast<std::size_t>(i));
    }
}

}  // namespace persist
