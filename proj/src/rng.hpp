#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace isteg {

// All stochastic generation funnels through this wrapper. mt19937_64 output
// is pinned by the standard and the value mappings are hand-rolled, so a
// (inputs, seed) pair yields byte-identical results on any conforming
// toolchain. std::*_distribution would not give that guarantee.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [lo, hi], inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1u;
        return lo + static_cast<std::int64_t>(engine_() % span);
    }

    double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    /// Box-Muller, cosine branch.
    double gaussian(double mean, double stddev) {
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        constexpr double kTwoPi = 6.283185307179586476925287;
        return mean + stddev * r * std::cos(kTwoPi * u2);
    }

    /// Lognormal with E[X] = mean and the given sigma of the underlying normal.
    double lognormal_with_mean(double mean, double sigma) {
        const double mu = std::log(mean) - 0.5 * sigma * sigma;
        return std::exp(mu + sigma * gaussian(0.0, 1.0));
    }

    /// Exponential inter-arrival time for a Poisson process of the given rate.
    double exponential(double rate) { return -std::log(1.0 - uniform()) / rate; }

private:
    std::mt19937_64 engine_;
};

} // namespace isteg
