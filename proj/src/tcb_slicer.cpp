#include "evslice/tcb_slicer.hpp"

#include <algorithm>
#include <cmath>

#include "evslice/error.hpp"

namespace evslice {

const char* regime_name(Regime r) {
    return r == Regime::Intersect ? "intersect" : "union";
}

std::int64_t target_events_per_slice(const SensorGeometry& geometry, double alpha) {
    if (!(alpha > 0))
        fail("alpha must be > 0");
    double m = alpha * double(geometry.pixel_count());
    return std::max<std::int64_t>(1, std::llround(m));
}

double effective_theta(const std::vector<double>& recent_densities_ev_per_s,
                       std::int64_t target_count, const ThetaPolicy& policy) {
    if (policy.kind == ThetaPolicy::Kind::Fixed)
        return policy.fixed_theta;
    if (recent_densities_ev_per_s.empty())
        return policy.theta_min; // cold start
    std::vector<double> window = recent_densities_ev_per_s;
    if (policy.window_k > 0 && window.size() > std::size_t(policy.window_k))
        window.erase(window.begin(), window.end() - policy.window_k);
    std::sort(window.begin(), window.end());
    std::size_t n = window.size();
    double median = (n % 2 == 1) ? window[n / 2]
                                 : 0.5 * (window[n / 2 - 1] + window[n / 2]);
    // median/M is the slice rate at which a nominal window holds exactly M
    // events; below it windows are over-dense.
    double theta = median / double(target_count);
    return std::clamp(theta, policy.theta_min, policy.theta_max);
}

namespace {

// first index with events[i].t >= t
std::size_t lower_index(const std::vector<Event>& events, std::uint64_t t) {
    return std::size_t(std::lower_bound(events.begin(), events.end(), t,
                                        [](const Event& e, std::uint64_t v) {
                                            return e.t < v;
                                        }) -
                       events.begin());
}

} // namespace

SliceResult slice_stream(const EventStream& stream, const TcbConfig& cfg,
                         std::optional<std::uint64_t> t_origin) {
    if (!(cfg.slices_per_second > 0))
        fail("slice rate F must be > 0");
    if (cfg.slices_per_second > 1e6)
        fail("slice rate F may not exceed 1e6 (sub-microsecond windows)");
    if (!(cfg.theta.theta_min <= cfg.theta.theta_max))
        fail("theta_min must be <= theta_max");
    if (cfg.theta.kind == ThetaPolicy::Kind::AdaptiveMedian && cfg.theta.window_k < 1)
        fail("adaptive theta needs window_k >= 1");
    ValidationReport report = validate_stream(stream);
    if (!report.ok())
        fail("invalid event stream: " + std::to_string(report.violations.size()) +
             " violation(s), first at index " +
             std::to_string(report.violations.front().index) + " (" +
             report.violations.front().rule + ")");

    SliceResult result;
    if (stream.empty())
        return result;

    const auto& events = stream.events();
    const std::uint64_t first_t = events.front().t;
    const std::uint64_t last_t = events.back().t;
    const std::uint64_t origin = t_origin.value_or(first_t);
    if (origin > first_t)
        fail("t_origin " + std::to_string(origin) + " is after the first event at " +
             std::to_string(first_t));

    const std::int64_t m = target_events_per_slice(stream.geometry(), cfg.alpha);
    const double f = cfg.slices_per_second;
    const std::size_t n = events.size();
    const std::size_t npx = std::size_t(stream.geometry().pixel_count());

    std::vector<double> densities; // raw window density of emitted slices, ev/s

    for (int i = 0;; ++i) {
        const std::uint64_t t_start =
            origin + std::uint64_t(std::llround(double(i) * 1e6 / f));
        if (t_start > last_t)
            break;
        const std::uint64_t t_end =
            origin + std::uint64_t(std::llround(double(i + 1) * 1e6 / f));

        const std::size_t lo = lower_index(events, t_start);
        const std::size_t window_end = lower_index(events, t_end);
        const std::size_t first_m_end = std::min(n, lo + std::size_t(m));

        const double theta = effective_theta(densities, m, cfg.theta);
        const Regime regime = f < theta ? Regime::Intersect : Regime::Union;
        const std::size_t members_end = regime == Regime::Intersect
                                            ? std::min(window_end, first_m_end)
                                            : std::max(window_end, first_m_end);

        PolaritySlice slice;
        slice.index = i;
        slice.t_start_us = t_start;
        slice.t_end_us = t_end;
        slice.regime = regime;
        slice.theta_used = theta;
        slice.target_count = m;
        slice.members_begin = lo;
        slice.members_end = members_end;
        slice.event_count = members_end - lo;
        slice.geometry = stream.geometry();
        slice.phi.assign(npx, 0);
        for (std::size_t k = lo; k < members_end; ++k)
            slice.phi[std::size_t(events[k].y) * stream.geometry().width + events[k].x] +=
                events[k].p;

        // density history uses the raw window count, not |Omega|, so the
        // estimate tracks the data regardless of regime
        densities.push_back(double(window_end - lo) /
                            (double(t_end - t_start) / 1e6));
        if (cfg.theta.window_k > 0 && densities.size() > std::size_t(cfg.theta.window_k))
            densities.erase(densities.begin());

        SliceRecord rec;
        rec.index = i;
        rec.t_start_us = t_start;
        rec.t_end_us = t_end;
        rec.regime = regime;
        rec.theta = theta;
        rec.target_count = m;
        rec.event_count = slice.event_count;
        result.manifest.records.push_back(rec);
        result.slices.push_back(std::move(slice));
    }
    return result;
}

ImageU8 render_slice(const PolaritySlice& slice, RenderMode mode) {
    if (mode.magnitude && mode.phi_max <= 0)
        fail("magnitude rendering requires phi_max > 0");
    ImageU8 img = ImageU8::make(slice.geometry.width, slice.geometry.height, 3);
    for (std::size_t i = 0; i < slice.phi.size(); ++i) {
        const std::int32_t phi = slice.phi[i];
        if (phi == 0)
            continue;
        std::uint8_t value = 255;
        if (mode.magnitude) {
            std::int64_t mag = std::min<std::int64_t>(std::abs(std::int64_t(phi)),
                                                      mode.phi_max);
            value = std::uint8_t(std::llround(255.0 * double(mag) / double(mode.phi_max)));
        }
        img.pixels[i * 3 + (phi > 0 ? 1 : 0)] = value;
    }
    return img;
}

} // namespace evslice
