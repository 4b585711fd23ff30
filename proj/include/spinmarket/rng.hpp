#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace spinmarket {

/// Seeded 64-bit Mersenne Twister with portable derived draws.
///
/// The standard distributions are implementation-defined, so uniform doubles
/// and bounded integers are derived from the raw 64-bit output here. That keeps
/// every recorded value identical across standard libraries for a given seed.
class Rng {
public:
    static constexpr const char* kName = "mt19937_64";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound) by multiply-shift.
    std::size_t index(std::size_t bound) {
        const unsigned __int128 wide =
            static_cast<unsigned __int128>(engine_()) * static_cast<unsigned __int128>(bound);
        return static_cast<std::size_t>(wide >> 64);
    }

    bool coin() { return (engine_() >> 63) != 0; }

private:
    std::mt19937_64 engine_;
};

}  // namespace spinmarket
