#include "evslice/event_core.hpp"

#include <algorithm>
#include <cmath>

#include "evslice/error.hpp"

namespace evslice {

EventStream EventStream::create(SensorGeometry geometry, std::vector<Event> events,
                                UnsortedPolicy policy) {
    if (geometry.width < 1 || geometry.height < 1)
        fail("sensor geometry must be at least 1x1, got " + std::to_string(geometry.width) +
             "x" + std::to_string(geometry.height));

    bool sorted = std::is_sorted(events.begin(), events.end(),
                                 [](const Event& a, const Event& b) { return a.t < b.t; });
    if (!sorted) {
        if (policy == UnsortedPolicy::Reject)
            fail("event timestamps are not non-decreasing");
        std::stable_sort(events.begin(), events.end(),
                         [](const Event& a, const Event& b) { return a.t < b.t; });
    }

    for (std::size_t i = 0; i < events.size(); ++i) {
        const Event& e = events[i];
        if (e.x >= geometry.width)
            fail("event " + std::to_string(i) + ": x=" + std::to_string(e.x) +
                 " outside width " + std::to_string(geometry.width));
        if (e.y >= geometry.height)
            fail("event " + std::to_string(i) + ": y=" + std::to_string(e.y) +
                 " outside height " + std::to_string(geometry.height));
        if (e.p != -1 && e.p != 1)
            fail("event " + std::to_string(i) + ": polarity must be -1 or +1, got " +
                 std::to_string(int(e.p)));
    }

    EventStream s;
    s.geometry_ = geometry;
    s.events_ = std::move(events);
    return s;
}

EventStream EventStream::unchecked(SensorGeometry geometry, std::vector<Event> events) {
    EventStream s;
    s.geometry_ = geometry;
    s.events_ = std::move(events);
    return s;
}

ValidationReport validate_stream(const EventStream& stream) {
    ValidationReport report;
    const auto& ev = stream.events();
    const auto& g = stream.geometry();
    for (std::size_t i = 0; i < ev.size(); ++i) {
        if (i > 0 && ev[i].t < ev[i - 1].t)
            report.violations.push_back({i, "timestamp order"});
        if (ev[i].x >= g.width)
            report.violations.push_back({i, "x bound"});
        if (ev[i].y >= g.height)
            report.violations.push_back({i, "y bound"});
        if (ev[i].p != -1 && ev[i].p != 1)
            report.violations.push_back({i, "polarity"});
    }
    return report;
}

StreamStats stream_stats(const EventStream& stream) {
    StreamStats st;
    const auto& ev = stream.events();
    st.count = ev.size();
    if (ev.empty())
        return st;
    st.duration_us = ev.back().t - ev.front().t;
    if (st.duration_us > 0)
        st.mean_rate_events_per_s =
            double(st.count) / (double(st.duration_us) / 1e6);
    std::int64_t pos = 0, neg = 0;
    for (const Event& e : ev)
        (e.p > 0 ? pos : neg)++;
    st.polarity_balance = double(pos - neg) / double(st.count);
    return st;
}

std::int64_t round_us_ties_even(double us) {
    double f = std::floor(us);
    double frac = us - f;
    if (frac > 0.5) {
        f += 1.0;
    } else if (frac == 0.5) {
        // tie: pick the even neighbour
        if (std::fmod(f, 2.0) != 0.0)
            f += 1.0;
    }
    return static_cast<std::int64_t>(f);
}

} // namespace evslice
