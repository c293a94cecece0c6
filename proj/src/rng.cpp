#include "beamtrack/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace beamtrack {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    // Fold the path into a single key, then expand it with splitmix64.
    std::uint64_t key = seed;
    std::uint64_t mixer = 0x243f6a8885a308d3ULL;  // distinguish seed 0 from empty
    key = splitmix64(mixer) ^ key;
    for (std::uint64_t word : path) {
        std::uint64_t w = word;
        key ^= splitmix64(w) + 0x9e3779b97f4a7c15ULL + (key << 6) + (key >> 2);
    }
    std::uint64_t state = key;
    for (auto& s : s_) s = splitmix64(state);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RngStream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_double_open0() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

std::uint64_t RngStream::next_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("RngStream::next_below: bound is 0");
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x < threshold);
    return x % bound;
}

double RngStream::next_normal() {
    const double u1 = next_double_open0();
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::int64_t RngStream::next_poisson(double mean) {
    if (!(mean >= 0.0)) throw std::invalid_argument("next_poisson: mean must be >= 0");
    if (mean == 0.0) return 0;
    return mean < 10.0 ? poisson_inversion(mean) : poisson_ptrs(mean);
}

std::int64_t RngStream::poisson_inversion(double mean) {
    const double u = next_double();
    double p = std::exp(-mean);
    double cdf = p;
    std::int64_t k = 0;
    while (u > cdf && k < 4096) {
        ++k;
        p *= mean / static_cast<double>(k);
        cdf += p;
    }
    return k;
}

// Hormann's PTRS transformed-rejection sampler, valid for mean >= 10.
std::int64_t RngStream::poisson_ptrs(double mean) {
    const double log_mean = std::log(mean);
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);

    for (;;) {
        const double u = next_double() - 0.5;
        const double v = next_double();
        const double us = 0.5 - std::abs(u);
        const auto k = static_cast<std::int64_t>(
            std::floor((2.0 * a / us + b) * u + mean + 0.43));
        if (us >= 0.07 && v <= v_r) return k;
        if (k < 0 || (us < 0.013 && v > us)) continue;
        const double kd = static_cast<double>(k);
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            kd * log_mean - mean - std::lgamma(kd + 1.0))
            return k;
    }
}

}  // namespace beamtrack
