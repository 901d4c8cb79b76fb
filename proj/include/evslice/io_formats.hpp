#ifndef EVSLICE_IO_FORMATS_HPP
#define EVSLICE_IO_FORMATS_HPP

#include <filesystem>
#include <string>

#include "evslice/event_core.hpp"
#include "evslice/image.hpp"
#include "evslice/mga.hpp"
#include "evslice/tcb_slicer.hpp"

namespace evslice {

// EVST event file, little-endian throughout:
//   header (22 bytes): magic "EVST", version u16 = 1, W u16, H u16,
//                      reserved 4 zero bytes, event_count u64
//   records (13 bytes each): t u64 microseconds, x u16, y u16, p i8
// Records are sorted by t; p is exactly -1 or +1.
void write_events(const std::filesystem::path& path, const EventStream& stream);
EventStream read_events(const std::filesystem::path& path);

// CSV interchange: header line "t_us,x,y,p", then integer rows. p is
// {-1, 1}, or {0, 1} with map_zero_to_negative. Unsorted rows are stably
// sorted and flagged.
struct CsvReadResult {
    EventStream stream;
    bool resorted = false;
};
CsvReadResult read_events_csv(const std::filesystem::path& path, SensorGeometry geometry,
                              bool map_zero_to_negative = false);

// LAT5 tensor file, little-endian:
//   header (26 bytes): magic "LAT5", version u16 = 1, dims B,T,C,H,W as u32
//   payload: IEEE-754 binary32 values in [B,T,C,H,W] row-major order
void write_tensor(const std::filesystem::path& path, const LatentTensor5& tensor);
LatentTensor5 read_tensor(const std::filesystem::path& path);

// Lossless 8-bit PNG (gray or RGB). Reading one of our own files yields
// identical pixels; foreign PNGs are normalized to 8-bit gray or RGB.
void write_png(const std::filesystem::path& path, const ImageU8& image);
ImageU8 read_png(const std::filesystem::path& path);

// Slice manifest as CSV with columns
// index,t_start_us,t_end_us,regime,theta,M,event_count,path
void write_manifest_csv(const std::filesystem::path& path, const SliceManifest& manifest);
SliceManifest read_manifest_csv(const std::filesystem::path& path);

} // namespace evslice

#endif
