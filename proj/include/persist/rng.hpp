#pragma once

// Deterministic random streams.
//
// Every random quantity in the model is drawn from a std::mt19937_64 whose
// output sequence is fixed by the C++ standard. Conversions to doubles and
// bounded integers are done here rather than through <random> distributions,
// whose algorithms are implementation-defined and differ between standard
// libraries.

#include <cstdint>
#include <initializer_list>
#include <random>

namespace persist {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derive a child seed from a parent seed and a path of stream indices.
/// stream_seed(m, {a, b}) is independent of stream_seed(m, {b, a}).
constexpr std::uint64_t stream_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept
{
    std::uint64_t h = mix64(master);
    for (std::uint64_t p : path) {
        h = mix64(h ^ mix64(p + 0x632be59bd9b4e019ULL));
    }
    return h;
}

/// Named sub-streams of a single simulation run.
enum class StreamId : std::uint64_t {
    Dynamics = 0,  // factors, attendance, links, departures
    Cosmetic = 1,  // grid placement and link endpoints; never affects outcomes
};

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t run_seed, StreamId stream)
        : engine_(stream_seed(run_seed, {static_cast<std::uint64_t>(stream)}))
    {
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Uniform integer in [0, bound). Rejection sampling; bound must be > 0.
    std::uint64_t below(std::uint64_t bound)
    {
        const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % bound + 1) % bound;
        std::uint64_t x = engine_();
        while (x > limit) {
            x = engine_();
        }
        return x % bound;
    }

    /// Uniform integer in [lo, hi].
    int uniform_int(int lo, int hi)
    {
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace persist
