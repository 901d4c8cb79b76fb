#ifndef EVSLICE_RNG_HPP
#define EVSLICE_RNG_HPP

#include <cstdint>

namespace evslice {

// SplitMix64. The exact state advance and output mix are part of the file
// and augmentation contracts: any reimplementation in another language must
// reproduce these outputs bit for bit.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform integer in [lo, hi], mapped via modulo on the 64-bit output.
    // The modulo bias is below 2^-40 for every range this library draws.
    std::int64_t next_in(std::int64_t lo, std::int64_t hi) {
        std::uint64_t span = std::uint64_t(hi - lo) + 1;
        return lo + std::int64_t(next() % span);
    }

private:
    std::uint64_t state_;
};

// Derives an independent substream seed for (seed, index), e.g. one draw
// sequence per slice.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    return seed ^ (0xD1B54A32D192ED03ULL * (index + 1));
}

} // namespace evslice

#endif
