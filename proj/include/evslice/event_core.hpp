#ifndef EVSLICE_EVENT_CORE_HPP
#define EVSLICE_EVENT_CORE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace evslice {

struct SensorGeometry {
    int width = 0;
    int height = 0;

    bool contains(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }
    std::int64_t pixel_count() const {
        return static_cast<std::int64_t>(width) * height;
    }
    bool operator==(const SensorGeometry&) const = default;
};

// A single polarity spike. Timestamps are integer microseconds; polarity is
// exactly -1 or +1, zero is rejected everywhere.
struct Event {
    std::uint64_t t = 0;
    std::uint16_t x = 0;
    std::uint16_t y = 0;
    std::int8_t p = 0;

    bool operator==(const Event&) const = default;
};

enum class UnsortedPolicy {
    Reject,     // out-of-order timestamps are an error
    StableSort, // sort by t, preserving relative order of equal timestamps
};

// Time-ordered event sequence over a fixed sensor geometry. Immutable after
// construction; safe for concurrent readers.
class EventStream {
public:
    EventStream() = default;

    // Validates geometry, bounds, polarity and timestamp order. Throws Error
    // on any violation (or sorts, per policy).
    static EventStream create(SensorGeometry geometry, std::vector<Event> events,
                              UnsortedPolicy policy = UnsortedPolicy::Reject);

    // No validation; for raw data that will go through validate_stream.
    static EventStream unchecked(SensorGeometry geometry, std::vector<Event> events);

    const SensorGeometry& geometry() const { return geometry_; }
    const std::vector<Event>& events() const { return events_; }
    std::size_t size() const { return events_.size(); }
    bool empty() const { return events_.empty(); }

private:
    SensorGeometry geometry_;
    std::vector<Event> events_;
};

struct Violation {
    std::size_t index = 0;
    std::string rule; // "timestamp order", "x bound", "y bound", "polarity"
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

// Enumerates every event that breaks an invariant. Violations are data,
// not failures: this never throws.
ValidationReport validate_stream(const EventStream& stream);

struct StreamStats {
    std::uint64_t count = 0;
    std::uint64_t duration_us = 0;     // t_last - t_first, 0 for < 2 events
    double mean_rate_events_per_s = 0; // count / duration, 0 when duration is 0
    double polarity_balance = 0;       // (#positive - #negative) / count, 0 for empty
};

StreamStats stream_stats(const EventStream& stream);

// Sub-microsecond times are rounded to the nearest integer microsecond,
// ties to even.
std::int64_t round_us_ties_even(double us);

} // namespace evslice

#endif
