#include "evslice/augment.hpp"

#include <algorithm>
#include <cstring>

#include "evslice/error.hpp"
#include "evslice/rng.hpp"

namespace evslice {

namespace {

struct Shift {
    int dx = 0;
    int dy = 0;
};

Shift draw_shift(std::uint64_t seed, const TranslationSpec& spec) {
    SplitMix64 rng(seed);
    Shift s;
    s.dx = int(rng.next_in(-spec.max_dx, spec.max_dx));
    s.dy = int(rng.next_in(-spec.max_dy, spec.max_dy));
    return s;
}

// slice index for timestamp t, or -1 if no window covers it
int find_slice(const SliceManifest& manifest, std::uint64_t t) {
    const auto& recs = manifest.records;
    auto it = std::upper_bound(recs.begin(), recs.end(), t,
                               [](std::uint64_t v, const SliceRecord& r) {
                                   return v < r.t_start_us;
                               });
    if (it == recs.begin())
        return -1;
    --it;
    return t < it->t_end_us ? it->index : -1;
}

} // namespace

EventStream translate_events(const EventStream& stream, const TranslationSpec& spec,
                             const SliceManifest* manifest) {
    const auto& g = stream.geometry();
    if (spec.max_dx < 0 || spec.max_dy < 0)
        fail("translation bounds must be non-negative");
    if (spec.max_dx >= g.width || spec.max_dy >= g.height)
        fail("translation bounds must be smaller than the sensor");
    if (spec.per_slice && manifest == nullptr)
        fail("per-slice translation needs a slice manifest");

    const Shift global = draw_shift(spec.seed, spec);

    std::vector<Event> out;
    out.reserve(stream.size());
    int cached_slice = -2;
    Shift shift = global;
    for (const Event& e : stream.events()) {
        if (spec.per_slice) {
            int idx = find_slice(*manifest, e.t);
            if (idx < 0)
                fail("event at t=" + std::to_string(e.t) +
                     " is outside every manifest window");
            if (idx != cached_slice) {
                shift = draw_shift(substream_seed(spec.seed, std::uint64_t(idx)), spec);
                cached_slice = idx;
            }
        }
        const int nx = int(e.x) + shift.dx;
        const int ny = int(e.y) + shift.dy;
        if (!g.contains(nx, ny))
            continue; // off-sensor events are dropped, not clamped
        Event moved = e;
        moved.x = std::uint16_t(nx);
        moved.y = std::uint16_t(ny);
        out.push_back(moved);
    }
    return EventStream::create(g, std::move(out), UnsortedPolicy::Reject);
}

CropResult crop_reference(const ImageU8& image, const CropSpec& spec) {
    const Rect& pr = spec.protected_region;
    if (spec.out_w < 1 || spec.out_h < 1)
        fail("crop output size must be positive");
    if (pr.w < 0 || pr.h < 0 || pr.x0 < 0 || pr.y0 < 0 ||
        pr.x0 + pr.w > image.width || pr.y0 + pr.h > image.height)
        fail("protected region is not inside the source image");
    if (spec.out_w < pr.w || spec.out_h < pr.h)
        fail("crop output is smaller than the protected region");

    // placements containing the protected rect and staying inside the image
    const int x_lo = std::max(0, pr.x0 + pr.w - spec.out_w);
    const int x_hi = std::min(pr.x0, image.width - spec.out_w);
    const int y_lo = std::max(0, pr.y0 + pr.h - spec.out_h);
    const int y_hi = std::min(pr.y0, image.height - spec.out_h);
    if (x_lo > x_hi || y_lo > y_hi)
        fail("no valid placement: out size " + std::to_string(spec.out_w) + "x" +
             std::to_string(spec.out_h) + " cannot contain the protected region");

    SplitMix64 rng(spec.seed);
    Rect applied;
    applied.x0 = int(rng.next_in(x_lo, x_hi));
    applied.y0 = int(rng.next_in(y_lo, y_hi));
    applied.w = spec.out_w;
    applied.h = spec.out_h;

    ImageU8 out = ImageU8::make(spec.out_w, spec.out_h, image.channels);
    const std::size_t row_bytes = std::size_t(spec.out_w) * image.channels;
    for (int y = 0; y < spec.out_h; ++y)
        std::memcpy(out.row(y),
                    image.row(applied.y0 + y) + std::size_t(applied.x0) * image.channels,
                    row_bytes);
    return {std::move(out), applied};
}

} // namespace evslice
