#ifndef EVSLICE_SIMULATOR_HPP
#define EVSLICE_SIMULATOR_HPP

#include <cstdint>
#include <vector>

#include "evslice/event_core.hpp"

namespace evslice {

struct SimulatorConfig {
    double contrast_threshold = 0.2; // C, log-intensity units, > 0
    double intensity_floor = 1e-3;   // eps added before the logarithm, > 0
    SensorGeometry geometry;
};

// Timestamped grayscale frames, intensities in [0, 1], row-major H*W.
struct FrameSequence {
    SensorGeometry geometry;
    std::vector<std::vector<float>> frames;
    std::vector<std::uint64_t> timestamps_us; // strictly increasing, one per frame
};

// Per-pixel threshold-crossing event synthesis. Log intensity
// L = ln(I + eps) is treated as linear in time between consecutive frames;
// an event fires at every crossing of reference_level +/- C, and the
// reference level moves to the crossing. The reference persists across
// frames (initialized to frame 0), so residual change carries over.
// Crossing times are linear-interpolated and rounded to microseconds,
// ties to even. Pure function: same inputs give bit-identical output for
// any job count.
EventStream simulate(const FrameSequence& frames, const SimulatorConfig& cfg, int jobs = 1);

} // namespace evslice

#endif
