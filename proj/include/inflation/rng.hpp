#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace inflation {

/// Counter-based 64-bit generator: the n-th output is a pure function of
/// (key, n), so streams can be split without sharing state. The mixing
/// function is the SplitMix64 finalizer.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL)))
    {
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return mix(key_ + kGolden * ++counter_); }

    /// Uniform double on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform double on (0, 1]; safe as a log argument.
    double uniform_open_low() noexcept { return 1.0 - uniform(); }

    /// Independent generator for replica `index`.
    CounterRng split(std::uint64_t index) const noexcept
    {
        CounterRng child(0);
        child.key_ = mix(key_ ^ mix(index + 0x9e3779b97f4a7c15ULL));
        return child;
    }

    std::uint64_t counter() const noexcept { return counter_; }

private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept
    {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

} // namespace inflation
