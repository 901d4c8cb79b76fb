#ifndef EVSLICE_TCB_SLICER_HPP
#define EVSLICE_TCB_SLICER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evslice/event_core.hpp"
#include "evslice/image.hpp"

namespace evslice {

// Selects the slice-rate threshold that switches the assembling operator:
// intersect the window with the first-M set when F < theta, unite them when
// F >= theta.
struct ThetaPolicy {
    enum class Kind { Fixed, AdaptiveMedian };

    Kind kind = Kind::AdaptiveMedian;
    double fixed_theta = 30.0;
    int window_k = 16;      // how many recent slice densities feed the median
    double theta_min = 20.0;
    double theta_max = 50.0;

    static ThetaPolicy fixed(double theta) {
        ThetaPolicy p;
        p.kind = Kind::Fixed;
        p.fixed_theta = theta;
        return p;
    }
    static ThetaPolicy adaptive_median(int window_k = 16, double theta_min = 20.0,
                                       double theta_max = 50.0) {
        ThetaPolicy p;
        p.kind = Kind::AdaptiveMedian;
        p.window_k = window_k;
        p.theta_min = theta_min;
        p.theta_max = theta_max;
        return p;
    }
};

struct TcbConfig {
    double slices_per_second = 30.0; // F, > 0
    double alpha = 0.1;              // per-slice event density ratio, > 0
    ThetaPolicy theta;
};

enum class Regime : std::uint8_t { Intersect, Union };

const char* regime_name(Regime r);

// One time-count balanced slice: the member event set (a contiguous index
// range of the source stream), its per-pixel signed polarity sums, and the
// parameters it was built under.
struct PolaritySlice {
    int index = 0;
    std::uint64_t t_start_us = 0;
    std::uint64_t t_end_us = 0;
    Regime regime = Regime::Intersect;
    double theta_used = 0;
    std::int64_t target_count = 0; // M
    std::uint64_t event_count = 0; // |Omega_i|
    std::size_t members_begin = 0; // index range into the source stream
    std::size_t members_end = 0;
    SensorGeometry geometry;
    std::vector<std::int32_t> phi; // H*W signed polarity accumulation
};

struct SliceRecord {
    int index = 0;
    std::uint64_t t_start_us = 0;
    std::uint64_t t_end_us = 0;
    Regime regime = Regime::Intersect;
    double theta = 0;
    std::int64_t target_count = 0;
    std::uint64_t event_count = 0;
    std::string path;
};

struct SliceManifest {
    std::vector<SliceRecord> records;
};

struct SliceResult {
    std::vector<PolaritySlice> slices;
    SliceManifest manifest;
};

// M = max(1, round(alpha * H * W)), the per-slice event budget.
std::int64_t target_events_per_slice(const SensorGeometry& geometry, double alpha);

// Theta for the next slice. Fixed returns its constant. AdaptiveMedian maps
// the median of the recent density window (events/s) to a break-even slice
// rate median/M and clamps it to [theta_min, theta_max]; with no recorded
// density yet it returns theta_min (cold start).
double effective_theta(const std::vector<double>& recent_densities_ev_per_s,
                       std::int64_t target_count, const ThetaPolicy& policy);

// Cuts the stream into slices of Delta_t = 1/F starting at t_origin (default:
// first event time). Window i is [round(i*1e6/F), round((i+1)*1e6/F)) past the
// origin, computed per index so rounding never drifts. Slice membership is
// window_events (intersect|unite) first_M_events_at_or_after_window_start,
// with the strict-count rule: the M-th event's equal-timestamp peers are not
// taken. Union slices may repeat events of later windows; that is intended.
// Adaptive theta sees only densities of already-emitted slices.
SliceResult slice_stream(const EventStream& stream, const TcbConfig& cfg,
                         std::optional<std::uint64_t> t_origin = std::nullopt);

struct RenderMode {
    bool magnitude = false;
    std::int32_t phi_max = 0;

    static RenderMode binary() { return {}; }
    static RenderMode magnitude_scaled(std::int32_t phi_max) {
        return {true, phi_max};
    }
};

// Three-channel rendering of phi: red for negative, green for positive,
// black for zero. Magnitude mode scales the active channel linearly with
// |phi| clamped at phi_max; binary mode uses full 255.
ImageU8 render_slice(const PolaritySlice& slice, RenderMode mode);

} // namespace evslice

#endif
