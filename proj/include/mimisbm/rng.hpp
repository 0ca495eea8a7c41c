#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace mimisbm {

/// Reproducible random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Conversions to doubles and bounded integers are done here rather
/// than with <random> distributions, whose algorithms are implementation
/// defined, so a seed yields the same stream on every platform.
///
/// Independent streams are derived with SplitMix64 over a path of integers,
/// e.g. derive(seed, {k, q, restart}).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). n must be positive.
    std::size_t below(std::size_t n);

    /// Bernoulli draw with success probability p.
    bool bernoulli(double p) { return uniform() < p; }

    static std::uint64_t splitmix64(std::uint64_t x);

    /// Seed of the sub-stream identified by `path` under `seed`.
    static std::uint64_t derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

private:
    std::mt19937_64 engine_;
};

}  // namespace mimisbm
