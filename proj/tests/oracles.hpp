// Independent reference implementations used to check the library. These
// stay deliberately naive: explicit set materialization, direct summation,
// full per-window loops, brute-force time stepping. They must not share code
// with the implementation paths they verify.

#ifndef EVSLICE_TESTS_ORACLES_HPP
#define EVSLICE_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "evslice/event_core.hpp"
#include "evslice/image.hpp"
#include "evslice/mga.hpp"
#include "evslice/tcb_slicer.hpp"

namespace oracles {

struct OracleSlice {
    std::uint64_t t_start = 0;
    std::uint64_t t_end = 0;
    evslice::Regime regime = evslice::Regime::Intersect;
    double theta = 0;
    std::vector<std::size_t> members; // ascending stream indices
    std::vector<std::int32_t> phi;
};

// Literal reading of the slice definition: collect the window set and the
// first-M set as explicit index sets, then apply intersection or union.
inline std::vector<OracleSlice> naive_slice(const evslice::EventStream& stream,
                                            const evslice::TcbConfig& cfg,
                                            std::optional<std::uint64_t> t_origin = {}) {
    using namespace evslice;
    std::vector<OracleSlice> out;
    if (stream.empty())
        return out;
    const auto& events = stream.events();
    const std::uint64_t origin = t_origin.value_or(events.front().t);
    const std::uint64_t last_t = events.back().t;
    const std::int64_t m = target_events_per_slice(stream.geometry(), cfg.alpha);
    const double f = cfg.slices_per_second;

    std::vector<double> densities;
    for (int i = 0;; ++i) {
        const std::uint64_t t_start =
            origin + std::uint64_t(std::llround(double(i) * 1e6 / f));
        if (t_start > last_t)
            break;
        const std::uint64_t t_end =
            origin + std::uint64_t(std::llround(double(i + 1) * 1e6 / f));

        std::set<std::size_t> window_set;
        for (std::size_t k = 0; k < events.size(); ++k)
            if (events[k].t >= t_start && events[k].t < t_end)
                window_set.insert(k);
        std::set<std::size_t> first_m;
        for (std::size_t k = 0; k < events.size() && first_m.size() < std::size_t(m); ++k)
            if (events[k].t >= t_start)
                first_m.insert(k);

        OracleSlice slice;
        slice.t_start = t_start;
        slice.t_end = t_end;
        slice.theta = effective_theta(densities, m, cfg.theta);
        slice.regime = f < slice.theta ? Regime::Intersect : Regime::Union;
        std::set<std::size_t> omega;
        if (slice.regime == Regime::Intersect)
            std::set_intersection(window_set.begin(), window_set.end(), first_m.begin(),
                                  first_m.end(), std::inserter(omega, omega.begin()));
        else
            std::set_union(window_set.begin(), window_set.end(), first_m.begin(),
                           first_m.end(), std::inserter(omega, omega.begin()));
        slice.members.assign(omega.begin(), omega.end());
        slice.phi.assign(std::size_t(stream.geometry().pixel_count()), 0);
        for (std::size_t k : slice.members)
            slice.phi[std::size_t(events[k].y) * stream.geometry().width + events[k].x] +=
                events[k].p;
        densities.push_back(double(window_set.size()) /
                            (double(t_end - t_start) / 1e6));
        if (cfg.theta.window_k > 0 && densities.size() > std::size_t(cfg.theta.window_k))
            densities.erase(densities.begin());
        out.push_back(std::move(slice));
    }
    return out;
}

// Direct-summation pipeline loss: explicit loops, no log-sum-exp
// stabilization, no reuse of library tensor ops.
inline double naive_mga(const evslice::LatentTensor5& gen,
                        const evslice::LatentTensor5& ev,
                        const evslice::MgaConfig& cfg) {
    const int nb = gen.b, nt = gen.t - 2, nc = gen.c, nh = gen.h, nw = gen.w;

    auto grad_at = [&](const evslice::LatentTensor5& l, int b, int t, int c, int h,
                       int w) {
        return cfg.kernel[0] * double(l.at(b, t, c, h, w)) +
               cfg.kernel[1] * double(l.at(b, t + 1, c, h, w)) +
               cfg.kernel[2] * double(l.at(b, t + 2, c, h, w));
    };
    auto normed = [&](const evslice::LatentTensor5& l, int b, int t, int c, int h,
                      int w) {
        double norm_sq = 0;
        for (int cc = 0; cc < nc; ++cc) {
            double g = grad_at(l, b, t, cc, h, w);
            norm_sq += g * g;
        }
        return grad_at(l, b, t, c, h, w) / (std::sqrt(norm_sq) + cfg.norm_eps);
    };

    double total = 0;
    for (int b = 0; b < nb; ++b) {
        for (int i = 0; i < nt; ++i) {
            // spatially averaged similarity of row i against every j
            std::vector<double> sbar_row(std::size_t(nt), 0.0);
            for (int j = 0; j < nt; ++j) {
                double acc = 0;
                for (int h = 0; h < nh; ++h)
                    for (int w = 0; w < nw; ++w)
                        for (int c = 0; c < nc; ++c)
                            acc += normed(gen, b, i, c, h, w) * normed(ev, b, j, c, h, w);
                sbar_row[std::size_t(j)] = acc / double(nh * nw);
            }
            double denom = 0;
            for (int j = 0; j < nt; ++j)
                denom += std::exp(sbar_row[std::size_t(j)] / cfg.tau);
            total += -std::log(std::exp(sbar_row[std::size_t(i)] / cfg.tau) / denom);
        }
    }
    return total / double(nb * nt);
}

// Mean local SSIM by looping over every 11x11 window position directly.
inline double naive_ssim(const evslice::ImageU8& a, const evslice::ImageU8& b) {
    constexpr int win = 11;
    const double c1 = (0.01 * 255) * (0.01 * 255);
    const double c2 = (0.03 * 255) * (0.03 * 255);

    double weights[win][win];
    {
        double g[win];
        double sum1 = 0;
        for (int i = 0; i < win; ++i) {
            double d = i - win / 2;
            g[i] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
            sum1 += g[i];
        }
        for (int i = 0; i < win; ++i)
            g[i] /= sum1;
        for (int i = 0; i < win; ++i)
            for (int j = 0; j < win; ++j)
                weights[i][j] = g[i] * g[j];
    }

    const std::vector<double> x = evslice::luminance255(a);
    const std::vector<double> y = evslice::luminance255(b);
    const int w = a.width, h = a.height;

    double total = 0;
    int positions = 0;
    for (int oy = 0; oy + win <= h; ++oy) {
        for (int ox = 0; ox + win <= w; ++ox) {
            double mx = 0, my = 0, mxx = 0, myy = 0, mxy = 0;
            for (int i = 0; i < win; ++i) {
                for (int j = 0; j < win; ++j) {
                    const double wv = weights[i][j];
                    const double xv = x[std::size_t(oy + i) * w + ox + j];
                    const double yv = y[std::size_t(oy + i) * w + ox + j];
                    mx += wv * xv;
                    my += wv * yv;
                    mxx += wv * xv * xv;
                    myy += wv * yv * yv;
                    mxy += wv * xv * yv;
                }
            }
            const double vx = mxx - mx * mx;
            const double vy = myy - my * my;
            const double cov = mxy - mx * my;
            total += ((2 * mx * my + c1) * (2 * cov + c2)) /
                     ((mx * mx + my * my + c1) * (vx + vy + c2));
            positions++;
        }
    }
    return total / positions;
}

// Threshold machine driven at 1 us steps for one pixel. Timing is accurate
// to the step size; counts and polarities are exact.
inline std::vector<std::pair<std::uint64_t, int>> brute_force_pixel(
    const std::vector<double>& levels, const std::vector<std::uint64_t>& ts, double c) {
    std::vector<std::pair<std::uint64_t, int>> events;
    double ref = levels[0];
    for (std::size_t f = 0; f + 1 < levels.size(); ++f) {
        for (std::uint64_t t = ts[f] + 1; t <= ts[f + 1]; ++t) {
            const double frac = double(t - ts[f]) / double(ts[f + 1] - ts[f]);
            const double level = levels[f] + frac * (levels[f + 1] - levels[f]);
            while (level - ref >= c) {
                events.emplace_back(t, +1);
                ref += c;
            }
            while (ref - level >= c) {
                events.emplace_back(t, -1);
                ref -= c;
            }
        }
    }
    return events;
}

} // namespace oracles

#endif
