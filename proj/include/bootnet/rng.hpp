#pragma once

#include <cstdint>
#include <vector>

namespace bootnet {

/// Counter-based pseudo-random stream (splitmix64 mixing).
///
/// The value sequence is a pure function of (seed, stream, call index), so
/// identical seeds replay identical streams on any platform, and derived
/// streams are independent of the parent's position. No global state.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();
    /// Uniform in [0, 1), 53-bit resolution.
    double uniform();
    /// Uniform in [lo, hi); returns lo exactly when lo == hi.
    double uniform(double lo, double hi);
    /// Uniform integer in [0, n); n must be >= 1.
    std::uint64_t uniform_int(std::uint64_t n);
    /// Standard Gaussian via Box-Muller (two draws per call, no caching).
    double normal();

    /// Child stream independent of this stream's counter position.
    Rng derive(std::uint64_t stream) const;

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Fisher-Yates shuffle of 0..n-1 driven by `rng`.
std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng);

/// Stable 64-bit combine for deriving per-round / per-item seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace bootnet
