#pragma once

#include <cstdint>
#include <initializer_list>

namespace beamtrack {

// Purpose tags for substream derivation. Streams for distinct purposes or
// indices never collide, which keeps parallel trials order-independent.
namespace stream_tag {
inline constexpr std::uint64_t kSignalFrame = 1;
inline constexpr std::uint64_t kNoiseFrame = 2;
inline constexpr std::uint64_t kTieBreak = 3;
inline constexpr std::uint64_t kCenterDraw = 4;
inline constexpr std::uint64_t kGa = 5;
inline constexpr std::uint64_t kPpm = 6;
inline constexpr std::uint64_t kDecision = 7;
inline constexpr std::uint64_t kCalibration = 8;
inline constexpr std::uint64_t kEstimation = 9;
}  // namespace stream_tag

/// Counter-keyed xoshiro256++ stream. A stream is a value type: copy it to
/// fork deterministic replays, derive fresh substreams from (seed, path).
class RngStream {
public:
    RngStream() : RngStream(0, {}) {}
    explicit RngStream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

    static RngStream from_path(std::uint64_t seed,
                               std::initializer_list<std::uint64_t> path) {
        return RngStream(seed, path);
    }

    std::uint64_t next_u64();

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double();

    /// Uniform double in (0, 1].
    double next_double_open0();

    /// Unbiased uniform integer in [0, bound).
    std::uint64_t next_below(std::uint64_t bound);

    /// Standard normal draw (Box-Muller, one value per call).
    double next_normal();

    /// Poisson draw: sequential inversion for mean < 10, Hormann's PTRS
    /// transformed rejection for mean >= 10.
    std::int64_t next_poisson(double mean);

private:
    std::int64_t poisson_inversion(double mean);
    std::int64_t poisson_ptrs(double mean);

    std::uint64_t s_[4];
};

}  // namespace beamtrack
