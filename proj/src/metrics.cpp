#include "evslice/metrics.hpp"

#include <cmath>
#include <limits>

#include "evslice/error.hpp"
#include "evslice/parallel.hpp"

namespace evslice {

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = (0.01 * 255) * (0.01 * 255);
constexpr double kC2 = (0.03 * 255) * (0.03 * 255);

void check_pair(const ImageU8& a, const ImageU8& b) {
    if (a.width != b.width || a.height != b.height)
        fail("frame pair dimensions differ: " + std::to_string(a.width) + "x" +
             std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
             std::to_string(b.height));
}

std::vector<double> gaussian_kernel() {
    std::vector<double> k(kWindow);
    const int half = kWindow / 2;
    double sum = 0;
    for (int i = 0; i < kWindow; ++i) {
        double d = i - half;
        k[i] = std::exp(-d * d / (2.0 * kSigma * kSigma));
        sum += k[i];
    }
    for (double& v : k)
        v /= sum;
    return k;
}

// separable valid-mode convolution with the 1-D Gaussian
std::vector<double> blur_valid(const std::vector<double>& img, int w, int h,
                               const std::vector<double>& k) {
    const int ow = w - kWindow + 1;
    const int oh = h - kWindow + 1;
    std::vector<double> rows(std::size_t(ow) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < ow; ++x) {
            double s = 0;
            for (int i = 0; i < kWindow; ++i)
                s += k[i] * img[std::size_t(y) * w + x + i];
            rows[std::size_t(y) * ow + x] = s;
        }
    std::vector<double> out(std::size_t(ow) * oh);
    for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x) {
            double s = 0;
            for (int i = 0; i < kWindow; ++i)
                s += k[i] * rows[std::size_t(y + i) * ow + x];
            out[std::size_t(y) * ow + x] = s;
        }
    return out;
}

} // namespace

double psnr(const ImageU8& reference, const ImageU8& candidate) {
    check_pair(reference, candidate);
    const std::vector<double> a = luminance255(reference);
    const std::vector<double> b = luminance255(candidate);
    double se = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        se += d * d;
    }
    const double mse = se / double(a.size());
    if (mse == 0.0)
        return std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(255.0) - 10.0 * std::log10(mse);
}

double ssim(const ImageU8& a, const ImageU8& b) {
    check_pair(a, b);
    const int w = a.width, h = a.height;
    if (w < kWindow || h < kWindow)
        fail("ssim needs images of at least " + std::to_string(kWindow) + "x" +
             std::to_string(kWindow));

    const std::vector<double> x = luminance255(a);
    const std::vector<double> y = luminance255(b);
    const std::size_t n = x.size();
    std::vector<double> xx(n), yy(n), xy(n);
    for (std::size_t i = 0; i < n; ++i) {
        xx[i] = x[i] * x[i];
        yy[i] = y[i] * y[i];
        xy[i] = x[i] * y[i];
    }

    const std::vector<double> k = gaussian_kernel();
    const std::vector<double> mu_x = blur_valid(x, w, h, k);
    const std::vector<double> mu_y = blur_valid(y, w, h, k);
    const std::vector<double> m_xx = blur_valid(xx, w, h, k);
    const std::vector<double> m_yy = blur_valid(yy, w, h, k);
    const std::vector<double> m_xy = blur_valid(xy, w, h, k);

    double total = 0;
    for (std::size_t i = 0; i < mu_x.size(); ++i) {
        const double mx = mu_x[i], my = mu_y[i];
        const double var_x = m_xx[i] - mx * mx;
        const double var_y = m_yy[i] - my * my;
        const double cov = m_xy[i] - mx * my;
        total += ((2 * mx * my + kC1) * (2 * cov + kC2)) /
                 ((mx * mx + my * my + kC1) * (var_x + var_y + kC2));
    }
    return total / double(mu_x.size());
}

SequenceReport sequence_report(const std::vector<ImageU8>& reference,
                               const std::vector<ImageU8>& candidate, int jobs) {
    if (reference.size() != candidate.size())
        fail("sequence lengths differ: " + std::to_string(reference.size()) +
             " reference vs " + std::to_string(candidate.size()) + " candidate");
    // validate up front: the parallel workers must not throw
    for (std::size_t i = 0; i < reference.size(); ++i) {
        check_pair(reference[i], candidate[i]);
        if (reference[i].width < kWindow || reference[i].height < kWindow)
            fail("frame " + std::to_string(i) + " is smaller than the ssim window");
    }
    SequenceReport report;
    report.frames.resize(reference.size());
    parallel_chunks(std::int64_t(reference.size()), jobs,
                    [&](std::int64_t lo, std::int64_t hi) {
                        for (std::int64_t i = lo; i < hi; ++i) {
                            report.frames[std::size_t(i)].psnr_db =
                                psnr(reference[std::size_t(i)], candidate[std::size_t(i)]);
                            report.frames[std::size_t(i)].ssim =
                                ssim(reference[std::size_t(i)], candidate[std::size_t(i)]);
                        }
                    });
    double psnr_sum = 0, ssim_sum = 0;
    int finite = 0;
    for (const FrameScore& f : report.frames) {
        ssim_sum += f.ssim;
        if (std::isinf(f.psnr_db))
            report.psnr_excluded++;
        else {
            psnr_sum += f.psnr_db;
            finite++;
        }
    }
    report.mean_ssim = report.frames.empty() ? 0 : ssim_sum / double(report.frames.size());
    report.mean_psnr_db = finite > 0 ? psnr_sum / finite
                                     : std::numeric_limits<double>::infinity();
    return report;
}

} // namespace evslice
