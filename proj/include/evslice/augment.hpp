#ifndef EVSLICE_AUGMENT_HPP
#define EVSLICE_AUGMENT_HPP

#include <cstdint>

#include "evslice/event_core.hpp"
#include "evslice/image.hpp"
#include "evslice/tcb_slicer.hpp"

namespace evslice {

struct TranslationSpec {
    int max_dx = 0; // maximum absolute shift in pixels, < W
    int max_dy = 0; // < H
    bool per_slice = false;
    std::uint64_t seed = 0;
};

// Shifts event coordinates by an integer (dx, dy) drawn uniformly from
// [-max_dx, max_dx] x [-max_dy, max_dy] with a SplitMix64 stream seeded on
// `seed` (global mode) or on (seed, slice index) (per-slice mode, which
// needs the manifest to map timestamps to slices). Events shifted off the
// sensor are dropped. Timestamp order is preserved.
EventStream translate_events(const EventStream& stream, const TranslationSpec& spec,
                             const SliceManifest* manifest = nullptr);

struct Rect {
    int x0 = 0, y0 = 0, w = 0, h = 0;
    bool operator==(const Rect&) const = default;
};

struct CropSpec {
    int out_w = 0;
    int out_h = 0;
    Rect protected_region; // must remain fully inside the crop
    std::uint64_t seed = 0;
};

struct CropResult {
    ImageU8 image;
    Rect applied; // the crop rectangle that was used
};

// Draws a crop placement uniformly over all positions that keep
// protected_region fully inside both the crop and the image. Errors out when
// no placement exists; never clamps.
CropResult crop_reference(const ImageU8& image, const CropSpec& spec);

} // namespace evslice

#endif
