#ifndef EVSLICE_METRICS_HPP
#define EVSLICE_METRICS_HPP

#include <vector>

#include "evslice/image.hpp"

namespace evslice {

// Peak signal-to-noise ratio in dB on the 0..255 scale. RGB inputs are
// converted to Rec. 601 luminance first. Identical images return +infinity.
double psnr(const ImageU8& reference, const ImageU8& candidate);

// Mean local SSIM with the standard 11x11 Gaussian window (sigma 1.5,
// K1 = 0.01, K2 = 0.03, dynamic range 255) over valid window positions.
// Symmetric in its arguments; needs H, W >= 11.
double ssim(const ImageU8& a, const ImageU8& b);

struct FrameScore {
    double psnr_db = 0; // +infinity for identical frames
    double ssim = 0;
};

struct SequenceReport {
    std::vector<FrameScore> frames;
    double mean_psnr_db = 0; // over finite frames; +infinity if none are finite
    double mean_ssim = 0;
    int psnr_excluded = 0; // frames with infinite PSNR, left out of the mean
};

SequenceReport sequence_report(const std::vector<ImageU8>& reference,
                               const std::vector<ImageU8>& candidate, int jobs = 1);

} // namespace evslice

#endif
