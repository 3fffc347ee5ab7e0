#include "persist/batch.hpp"

namespace persist {

std::vector<SimConfig> replicate_configs(const SimConfig& base, std::uint64_t master, int reps)
{
    std::vector<SimConfig> out(static_cast<std::size_t>(reps), base);
    for (int r = 0; r < reps; ++r) {
        out[static_cast<std::size_t>(r)].seed = replicate_seed(master, r);
    }
    return out;
}

std::vector<RunResult> run_batch_serial(std::span<const SimConfig> configs)
{
    std::vector<RunResult> out;
    out.reserve(configs.size());
    for (const SimConfig& c : configs) {
        out.push_back(run(c));
    }
    return out;
}

std::vector<RunResult> run_batch_parallel(std::span<const SimConfig> configs, int jobs)
{
    // Validate up front so no exception escapes an OpenMP region.
    for (const SimConfig& c : configs) {
        c.validate();
    }
    std::vector<RunResult> out(configs.size());
    const auto n = static_cast<long long>(configs.size());
#pragma omp parallel for schedule(dynamic, 4) num_threads(jobs > 0 ? jobs : 1)
    for (long long i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = run(configs[static_cast<std::size_t>(i)]);
    }
    return out;
}

std::vector<RunResult> run_batch(std::span<const SimConfig> configs, int jobs)
{
    return jobs <= 1 ? run_batch_serial(configs) : run_batch_parallel(configs, jobs);
}

}  // namespace persist
