#include "evslice/mga.hpp"

#include <algorithm>
#include <cmath>

#include "evslice/error.hpp"

namespace evslice {

LatentTensor5 LatentTensor5::zeros(int b, int t, int c, int h, int w) {
    LatentTensor5 l;
    l.b = b;
    l.t = t;
    l.c = c;
    l.h = h;
    l.w = w;
    if (b < 1 || t < 1 || c < 1 || h < 1 || w < 1)
        fail("latent tensor dims must be positive");
    l.values.assign(std::size_t(b) * t * c * h * w, 0.0f);
    return l;
}

void LatentTensor5::validate() const {
    if (b < 1 || c < 1 || h < 1 || w < 1)
        fail("latent tensor dims must be positive");
    if (t < 3)
        fail("latent tensor needs T >= 3, got " + std::to_string(t));
    if (values.size() != std::size_t(b) * t * c * h * w)
        fail("latent tensor payload has " + std::to_string(values.size()) +
             " values, dims imply " +
             std::to_string(std::size_t(b) * t * c * h * w));
    for (float v : values)
        if (!std::isfinite(v))
            fail("latent tensor contains a non-finite value");
}

GradientTensor temporal_gradient(const LatentTensor5& latent,
                                 const std::array<double, 3>& kernel) {
    if (latent.t < 3)
        fail("temporal gradient needs T >= 3, got " + std::to_string(latent.t));
    GradientTensor g;
    g.b = latent.b;
    g.t = latent.t - 2;
    g.c = latent.c;
    g.h = latent.h;
    g.w = latent.w;
    g.values.resize(std::size_t(g.b) * g.t * g.c * g.h * g.w);
    const std::size_t plane = std::size_t(latent.c) * latent.h * latent.w;
    std::size_t out = 0;
    for (int ib = 0; ib < g.b; ++ib) {
        for (int it = 0; it < g.t; ++it) {
            const float* t0 = latent.values.data() + latent.index(ib, it, 0, 0, 0);
            for (std::size_t k = 0; k < plane; ++k) {
                g.values[out++] = kernel[0] * double(t0[k]) +
                                  kernel[1] * double(t0[k + plane]) +
                                  kernel[2] * double(t0[k + 2 * plane]);
            }
        }
    }
    return g;
}

GradientTensor normalize_channels(GradientTensor gradient, double norm_eps) {
    if (!(norm_eps > 0))
        fail("norm_eps must be > 0");
    const std::size_t spatial = std::size_t(gradient.h) * gradient.w;
    const std::size_t fibers = std::size_t(gradient.b) * gradient.t;
    for (std::size_t f = 0; f < fibers; ++f) {
        double* block = gradient.values.data() + f * gradient.c * spatial;
        for (std::size_t s = 0; s < spatial; ++s) {
            double sq = 0;
            for (int ic = 0; ic < gradient.c; ++ic) {
                double v = block[ic * spatial + s];
                sq += v * v;
            }
            double inv = 1.0 / (std::sqrt(sq) + norm_eps);
            for (int ic = 0; ic < gradient.c; ++ic)
                block[ic * spatial + s] *= inv;
        }
    }
    return gradient;
}

SimilarityTensor similarity(const GradientTensor& gen, const GradientTensor& ev) {
    if (gen.b != ev.b || gen.t != ev.t || gen.c != ev.c || gen.h != ev.h ||
        gen.w != ev.w)
        fail("gradient tensors have mismatched dimensions");
    SimilarityTensor s;
    s.b = gen.b;
    s.n = gen.t;
    s.h = gen.h;
    s.w = gen.w;
    s.values.resize(std::size_t(s.b) * s.n * s.n * s.h * s.w);
    const std::size_t spatial = std::size_t(gen.h) * gen.w;
    std::size_t out = 0;
    for (int ib = 0; ib < s.b; ++ib) {
        for (int i = 0; i < s.n; ++i) {
            const double* a = gen.values.data() + gen.index(ib, i, 0, 0, 0);
            for (int j = 0; j < s.n; ++j) {
                const double* b = ev.values.data() + ev.index(ib, j, 0, 0, 0);
                for (std::size_t sp = 0; sp < spatial; ++sp) {
                    double dot = 0;
                    for (int ic = 0; ic < gen.c; ++ic)
                        dot += a[ic * spatial + sp] * b[ic * spatial + sp];
                    s.values[out++] = dot;
                }
            }
        }
    }
    return s;
}

MeanSimilarity mean_similarity(const SimilarityTensor& s) {
    MeanSimilarity sbar;
    sbar.b = s.b;
    sbar.n = s.n;
    sbar.values.resize(std::size_t(s.b) * s.n * s.n);
    const std::size_t spatial = std::size_t(s.h) * s.w;
    for (std::size_t cell = 0; cell < sbar.values.size(); ++cell) {
        const double* block = s.values.data() + cell * spatial;
        double sum = 0;
        for (std::size_t sp = 0; sp < spatial; ++sp)
            sum += block[sp];
        sbar.values[cell] = sum / double(spatial);
    }
    return sbar;
}

double contrastive_loss(const MeanSimilarity& sbar, double tau) {
    if (!(tau > 0))
        fail("tau must be > 0");
    const int n = sbar.n;
    std::vector<double> row_losses;
    row_losses.reserve(std::size_t(sbar.b) * n);
    for (int ib = 0; ib < sbar.b; ++ib) {
        for (int i = 0; i < n; ++i) {
            double mx = sbar.at(ib, i, 0) / tau;
            for (int j = 1; j < n; ++j)
                mx = std::max(mx, sbar.at(ib, i, j) / tau);
            double sum = 0;
            for (int j = 0; j < n; ++j)
                sum += std::exp(sbar.at(ib, i, j) / tau - mx);
            const double lse = mx + std::log(sum);
            row_losses.push_back(lse - sbar.at(ib, i, i) / tau);
        }
    }
    // ascending-order reduction: invariant under batch permutation
    std::sort(row_losses.begin(), row_losses.end());
    double total = 0;
    for (double v : row_losses)
        total += v;
    return total / double(row_losses.size());
}

double mga_loss(const SimilarityTensor& s, double tau) {
    return contrastive_loss(mean_similarity(s), tau);
}

double mga_pipeline(const LatentTensor5& gen, const LatentTensor5& ev,
                    const MgaConfig& cfg) {
    if (gen.b != ev.b || gen.t != ev.t || gen.c != ev.c || gen.h != ev.h ||
        gen.w != ev.w)
        fail("latent tensors have mismatched dimensions");
    GradientTensor ggen =
        normalize_channels(temporal_gradient(gen, cfg.kernel), cfg.norm_eps);
    GradientTensor gev =
        normalize_channels(temporal_gradient(ev, cfg.kernel), cfg.norm_eps);
    return mga_loss(similarity(ggen, gev), cfg.tau);
}

} // namespace evslice
