#include "evslice/image.hpp"

#include "evslice/error.hpp"

namespace evslice {

ImageU8 ImageU8::make(int width, int height, int channels, std::uint8_t fill) {
    if (width < 1 || height < 1 || (channels != 1 && channels != 3))
        fail("bad image shape: " + std::to_string(width) + "x" + std::to_string(height) +
             "x" + std::to_string(channels));
    ImageU8 img;
    img.width = width;
    img.height = height;
    img.channels = channels;
    img.pixels.assign(std::size_t(width) * height * channels, fill);
    return img;
}

std::vector<double> luminance255(const ImageU8& img) {
    std::vector<double> out(std::size_t(img.width) * img.height);
    if (img.channels == 1) {
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = img.pixels[i];
    } else {
        for (std::size_t i = 0; i < out.size(); ++i) {
            const std::uint8_t* px = img.pixels.data() + i * 3;
            out[i] = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
        }
    }
    return out;
}

std::vector<float> luminance01(const ImageU8& img) {
    std::vector<float> out(std::size_t(img.width) * img.height);
    if (img.channels == 1) {
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = float(img.pixels[i] / 255.0);
    } else {
        for (std::size_t i = 0; i < out.size(); ++i) {
            const std::uint8_t* px = img.pixels.data() + i * 3;
            out[i] = float((0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2]) / 255.0);
        }
    }
    return out;
}

} // namespace evslice
