#ifndef EVSLICE_MGA_HPP
#define EVSLICE_MGA_HPP

#include <array>
#include <cstdint>
#include <vector>

namespace evslice {

// Dense [B, T, C, H, W] volume, row-major, 32-bit floats. Stands in for the
// latent tensors the alignment loss consumes. T >= 3: the temporal gradient
// consumes one step on each end.
struct LatentTensor5 {
    int b = 0, t = 0, c = 0, h = 0, w = 0;
    std::vector<float> values;

    static LatentTensor5 zeros(int b, int t, int c, int h, int w);

    std::size_t index(int ib, int it, int ic, int ih, int iw) const {
        return (((std::size_t(ib) * t + it) * c + ic) * h + ih) * w + iw;
    }
    float& at(int ib, int it, int ic, int ih, int iw) {
        return values[index(ib, it, ic, ih, iw)];
    }
    float at(int ib, int it, int ic, int ih, int iw) const {
        return values[index(ib, it, ic, ih, iw)];
    }
    std::size_t size() const { return values.size(); }

    // dims positive, T >= 3, payload size consistent, all values finite
    void validate() const;
};

struct MgaConfig {
    std::array<double, 3> kernel = {0.3, 0.4, 0.3};
    double tau = 0.07;      // softmax temperature, > 0
    double norm_eps = 1e-8; // added inside the channel-norm denominator, > 0
};

// Temporal gradients, [B, T-2, C, H, W] in doubles.
struct GradientTensor {
    int b = 0, t = 0, c = 0, h = 0, w = 0;
    std::vector<double> values;

    std::size_t index(int ib, int it, int ic, int ih, int iw) const {
        return (((std::size_t(ib) * t + it) * c + ic) * h + ih) * w + iw;
    }
    double at(int ib, int it, int ic, int ih, int iw) const {
        return values[index(ib, it, ic, ih, iw)];
    }
};

// Per-pixel gradient similarity, [B, n, n, H, W] with n = T-2.
struct SimilarityTensor {
    int b = 0, n = 0, h = 0, w = 0;
    std::vector<double> values;

    std::size_t index(int ib, int i, int j, int ih, int iw) const {
        return (((std::size_t(ib) * n + i) * n + j) * h + ih) * w + iw;
    }
    double at(int ib, int i, int j, int ih, int iw) const {
        return values[index(ib, i, j, ih, iw)];
    }
};

// Spatially averaged similarity, [B, n, n].
struct MeanSimilarity {
    int b = 0, n = 0;
    std::vector<double> values;

    double& at(int ib, int i, int j) {
        return values[(std::size_t(ib) * n + i) * n + j];
    }
    double at(int ib, int i, int j) const {
        return values[(std::size_t(ib) * n + i) * n + j];
    }
};

// G[b,t,c,h,w] = sum_i kernel[i] * L[b,t+i,c,h,w], t running over the T-2
// interior steps. The default kernel [0.3, 0.4, 0.3] is applied verbatim.
GradientTensor temporal_gradient(const LatentTensor5& latent,
                                 const std::array<double, 3>& kernel);

// Scales every channel fiber to unit L2 norm: G / (||G||_2 + eps).
// Zero fibers stay zero.
GradientTensor normalize_channels(GradientTensor gradient, double norm_eps);

// S[b,i,j,h,w] = <gen[b,i,:,h,w], ev[b,j,:,h,w]>, inner product over channels.
SimilarityTensor similarity(const GradientTensor& gen, const GradientTensor& ev);

// Arithmetic mean of S over (h, w).
MeanSimilarity mean_similarity(const SimilarityTensor& s);

// InfoNCE over the temporal pairing: the diagonal of S-bar is the positive
// pair of each row. Log-sum-exp is max-stabilized, and row losses are summed
// in ascending order, so the result does not depend on batch order or any
// internal parallelism.
double contrastive_loss(const MeanSimilarity& sbar, double tau);

// contrastive_loss after spatial averaging of S.
double mga_loss(const SimilarityTensor& s, double tau);

// temporal_gradient -> normalize_channels -> similarity -> mga_loss.
double mga_pipeline(const LatentTensor5& gen, const LatentTensor5& ev,
                    const MgaConfig& cfg);

} // namespace evslice

#endif
