#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace frisch {

/** Counter-keyed SplitMix64 stream.
 *
 * The stream for draw k is a pure function of (seed, k): substreams can be
 * generated in any order, on any number of workers, and reproduce the same
 * values bit for bit. Each substream advances through the usual SplitMix64
 * sequence from its derived origin.
 */
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t substream) noexcept
        : state_(mix(seed ^ mix(substream + 0x9E3779B97F4A7C15ull))) {}

    std::uint64_t next_u64() noexcept {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix(state_);
    }

    /// Uniform on [0, 1), 53-bit resolution.
    double next_unit() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1]; safe as a logarithm argument.
    double next_unit_positive() noexcept {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Uniform on [lo, hi); degenerate bounds return lo exactly.
    double next_uniform(double lo, double hi) noexcept {
        return lo + next_unit() * (hi - lo);
    }

    /// Basic-form Box-Muller normal draw (two uniforms per variate).
    double next_normal(double mean, double sd) noexcept {
        const double u1 = next_unit_positive();
        const double u2 = next_unit();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        return mean + sd * radius * std::cos(2.0 * std::numbers::pi * u2);
    }

  private:
    static std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace frisch
