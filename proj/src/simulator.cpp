#include "evslice/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "evslice/error.hpp"
#include "evslice/parallel.hpp"

namespace evslice {

namespace {

void check_inputs(const FrameSequence& seq, const SimulatorConfig& cfg) {
    if (!(cfg.contrast_threshold > 0))
        fail("contrast threshold must be > 0");
    if (!(cfg.intensity_floor > 0))
        fail("intensity floor must be > 0");
    if (seq.geometry != cfg.geometry)
        fail("frame sequence geometry does not match simulator geometry");
    if (cfg.geometry.width > 65535 || cfg.geometry.height > 65535)
        fail("geometry exceeds the 65535-pixel coordinate range");
    if (seq.frames.size() < 2)
        fail("frame sequence needs at least 2 frames, got " +
             std::to_string(seq.frames.size()));
    if (seq.timestamps_us.size() != seq.frames.size())
        fail("timestamp count " + std::to_string(seq.timestamps_us.size()) +
             " does not match frame count " + std::to_string(seq.frames.size()));
    for (std::size_t f = 1; f < seq.timestamps_us.size(); ++f)
        if (seq.timestamps_us[f] <= seq.timestamps_us[f - 1])
            fail("frame timestamps must be strictly increasing (frame " +
                 std::to_string(f) + ")");
    const std::size_t npx = std::size_t(cfg.geometry.pixel_count());
    for (std::size_t f = 0; f < seq.frames.size(); ++f) {
        if (seq.frames[f].size() != npx)
            fail("frame " + std::to_string(f) + " has " +
                 std::to_string(seq.frames[f].size()) + " pixels, expected " +
                 std::to_string(npx));
        for (float v : seq.frames[f]) {
            if (!std::isfinite(v))
                fail("frame " + std::to_string(f) + " contains a non-finite intensity");
            if (v < 0.0f || v > 1.0f)
                fail("frame " + std::to_string(f) + " contains an intensity outside [0,1]");
        }
    }
}

// Events of one pixel across the whole sequence. levels[f] = ln(I_f + eps).
void simulate_pixel(const std::vector<double>& levels,
                    const std::vector<std::uint64_t>& ts, double c,
                    std::uint16_t x, std::uint16_t y, std::vector<Event>& out) {
    double ref = levels[0];
    for (std::size_t f = 0; f + 1 < levels.size(); ++f) {
        const double l0 = levels[f];
        const double l1 = levels[f + 1];
        if (l1 == l0)
            continue;
        // crossings of ref +/- k*c reached within this segment
        std::int64_t n;
        double dir;
        if (l1 > l0) {
            n = std::int64_t(std::floor((l1 - ref) / c));
            dir = 1.0;
        } else {
            n = std::int64_t(std::floor((ref - l1) / c));
            dir = -1.0;
        }
        if (n <= 0)
            continue;
        const double t0 = double(ts[f]);
        const double dt = double(ts[f + 1] - ts[f]);
        const double dl = l1 - l0;
        for (std::int64_t m = 1; m <= n; ++m) {
            double level = ref + dir * double(m) * c;
            double t = t0 + (level - l0) / dl * dt;
            Event e;
            e.t = std::uint64_t(round_us_ties_even(t));
            e.x = x;
            e.y = y;
            e.p = std::int8_t(dir > 0 ? 1 : -1);
            out.push_back(e);
        }
        ref += dir * double(n) * c;
    }
}

} // namespace

EventStream simulate(const FrameSequence& seq, const SimulatorConfig& cfg, int jobs) {
    check_inputs(seq, cfg);

    const int w = cfg.geometry.width;
    const int h = cfg.geometry.height;
    const double eps = cfg.intensity_floor;
    const double c = cfg.contrast_threshold;
    const std::size_t nframes = seq.frames.size();

    // per-row event buffers; rows are independent, merge order is fixed
    std::vector<std::vector<Event>> rows(static_cast<std::size_t>(h));
    parallel_chunks(h, jobs, [&](std::int64_t y0, std::int64_t y1) {
        std::vector<double> levels(nframes);
        for (std::int64_t y = y0; y < y1; ++y) {
            auto& row_events = rows[std::size_t(y)];
            for (int x = 0; x < w; ++x) {
                const std::size_t px = std::size_t(y) * w + x;
                for (std::size_t f = 0; f < nframes; ++f)
                    levels[f] = std::log(double(seq.frames[f][px]) + eps);
                simulate_pixel(levels, seq.timestamps_us, c,
                               std::uint16_t(x), std::uint16_t(y), row_events);
            }
        }
    });

    std::vector<Event> all;
    std::size_t total = 0;
    for (const auto& r : rows)
        total += r.size();
    all.reserve(total);
    for (auto& r : rows)
        all.insert(all.end(), r.begin(), r.end());
    std::stable_sort(all.begin(), all.end(),
                     [](const Event& a, const Event& b) { return a.t < b.t; });
    return EventStream::create(cfg.geometry, std::move(all), UnsortedPolicy::Reject);
}

} // namespace evslice
