#include "bootnet/rng.hpp"

#include <cmath>

#include "bootnet/errors.hpp"

namespace bootnet {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), key_(mix64(mix64(seed + kGolden) ^ (stream * 0xD2B74407B1CE6E93ULL))) {}

std::uint64_t Rng::next_u64() {
    ++counter_;
    return mix64(key_ + kGolden * counter_);
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + uniform() * (hi - lo);
}

std::uint64_t Rng::uniform_int(std::uint64_t n) {
    if (n == 0) throw ValidationError("uniform_int: n must be >= 1");
    // Reject the low [0, 2^64 mod n) band so the modulo is unbiased.
    const std::uint64_t threshold = (0ULL - n) % n;
    for (;;) {
        const std::uint64_t x = next_u64();
        if (x >= threshold) return x % n;
    }
}

double Rng::normal() {
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Rng Rng::derive(std::uint64_t stream) const {
    Rng child(0);
    child.seed_ = seed_;
    child.key_ = mix64(key_ ^ mix64(stream + 0x632BE59BD9B4E019ULL));
    child.counter_ = 0;
    return child;
}

std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.uniform_int(i));
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    return mix64(a + kGolden * (b + 1));
}

}  // namespace bootnet
