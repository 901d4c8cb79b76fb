#ifndef EVSLICE_IMAGE_HPP
#define EVSLICE_IMAGE_HPP

#include <cstdint>
#include <vector>

namespace evslice {

// Dense 8-bit image, interleaved rows. channels is 1 (gray) or 3 (RGB).
struct ImageU8 {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> pixels;

    static ImageU8 make(int width, int height, int channels, std::uint8_t fill = 0);

    std::uint8_t* row(int y) {
        return pixels.data() + std::size_t(y) * width * channels;
    }
    const std::uint8_t* row(int y) const {
        return pixels.data() + std::size_t(y) * width * channels;
    }
    std::uint8_t& at(int x, int y, int c) {
        return pixels[(std::size_t(y) * width + x) * channels + c];
    }
    std::uint8_t at(int x, int y, int c) const {
        return pixels[(std::size_t(y) * width + x) * channels + c];
    }

    bool operator==(const ImageU8&) const = default;
};

// Rec. 601 luminance on the 0..255 scale. Gray images pass through.
std::vector<double> luminance255(const ImageU8& img);

// Rec. 601 luminance scaled to [0, 1], for the simulator.
std::vector<float> luminance01(const ImageU8& img);

} // namespace evslice

#endif
