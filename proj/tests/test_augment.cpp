#include <doctest.h>

#include <random>

#include "evslice/augment.hpp"
#include "evslice/error.hpp"
#include "evslice/rng.hpp"

using namespace evslice;

namespace {

Event ev(std::uint64_t t, std::uint16_t x, std::uint16_t y, int p) {
    return Event{t, x, y, std::int8_t(p)};
}

// what the global draw for this seed/spec produces
std::pair<int, int> global_shift(std::uint64_t seed, int max_dx, int max_dy) {
    SplitMix64 rng(seed);
    const int dx = int(rng.next_in(-max_dx, max_dx));
    const int dy = int(rng.next_in(-max_dy, max_dy));
    return {dx, dy};
}

std::uint64_t seed_with_shift(int want_dx, int want_dy, int max_dx, int max_dy) {
    for (std::uint64_t seed = 0; seed < 100'000; ++seed) {
        auto [dx, dy] = global_shift(seed, max_dx, max_dy);
        if (dx == want_dx && dy == want_dy)
            return seed;
    }
    FAIL("no seed found for the requested shift");
    return 0;
}

} // namespace

TEST_CASE("translate_events: zero bounds are the identity") {
    auto stream = EventStream::create(
        {8, 8}, {ev(1, 0, 0, 1), ev(2, 7, 7, -1), ev(3, 3, 4, 1)});
    TranslationSpec spec;
    spec.seed = 12345;
    auto out = translate_events(stream, spec);
    CHECK(out.events() == stream.events());
}

TEST_CASE("translate_events: off-sensor events are dropped") {
    const std::uint64_t seed = seed_with_shift(-1, 0, 1, 1);
    auto stream = EventStream::create({4, 4}, {ev(0, 0, 0, 1)});
    TranslationSpec spec;
    spec.max_dx = 1;
    spec.max_dy = 1;
    spec.seed = seed;
    auto out = translate_events(stream, spec);
    CHECK(out.empty());
}

TEST_CASE("translate_events: forced global shift, survivors recomputed independently") {
    const int dx = 3, dy = -2;
    const std::uint64_t seed = seed_with_shift(dx, dy, 5, 5);

    std::mt19937_64 rng(900);
    std::vector<Event> events;
    for (int i = 0; i < 1000; ++i)
        events.push_back(ev(std::uint64_t(i), std::uint16_t(rng() % 32),
                            std::uint16_t(rng() % 32), rng() % 2 ? 1 : -1));
    auto stream = EventStream::create({32, 32}, events);

    TranslationSpec spec;
    spec.max_dx = 5;
    spec.max_dy = 5;
    spec.seed = seed;
    auto out = translate_events(stream, spec);

    // independent filter pass
    std::size_t survivors = 0;
    for (const Event& e : stream.events())
        if (int(e.x) + dx < 32 && int(e.y) + dy >= 0)
            survivors++;
    CHECK(out.size() == survivors);
    for (const Event& e : out.events()) {
        CHECK(int(e.x) >= dx); // x' = x + 3 implies x' >= 3
        CHECK(int(e.y) < 32 + dy);
    }
    // order and timestamps preserved
    CHECK(validate_stream(out).ok());
}

TEST_CASE("translate_events: inverse shift restores the stream when nothing drops") {
    const std::uint64_t fwd_seed = seed_with_shift(2, 1, 3, 3);
    const std::uint64_t inv_seed = seed_with_shift(-2, -1, 3, 3);
    // events keep a 3-pixel margin so neither pass drops
    auto stream = EventStream::create(
        {16, 16}, {ev(5, 4, 4, 1), ev(6, 8, 9, -1), ev(7, 12, 12, 1)});
    TranslationSpec fwd;
    fwd.max_dx = fwd.max_dy = 3;
    fwd.seed = fwd_seed;
    TranslationSpec inv = fwd;
    inv.seed = inv_seed;
    auto roundtrip = translate_events(translate_events(stream, fwd), inv);
    CHECK(roundtrip.events() == stream.events());
}

TEST_CASE("translate_events: per-slice mode draws one shift per manifest window") {
    SliceManifest manifest;
    manifest.records.push_back({0, 0, 100, Regime::Intersect, 30, 10, 0, ""});
    manifest.records.push_back({1, 100, 200, Regime::Intersect, 30, 10, 0, ""});

    std::vector<Event> events;
    for (int i = 0; i < 50; ++i)
        events.push_back(ev(std::uint64_t(i * 4), 8, 8, 1));
    auto stream = EventStream::create({17, 17}, events);

    TranslationSpec spec;
    spec.max_dx = spec.max_dy = 4;
    spec.per_slice = true;
    spec.seed = 5;
    auto out = translate_events(stream, spec, &manifest);

    // within one window every event moves identically
    REQUIRE(out.size() == stream.size()); // 4-pixel shifts cannot push (8,8) off a 17x17 sensor
    std::pair<int, int> shift0{}, shift1{};
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Event& moved = out.events()[i];
        const Event& orig = stream.events()[i];
        std::pair<int, int> d{int(moved.x) - int(orig.x), int(moved.y) - int(orig.y)};
        if (orig.t < 100) {
            if (i == 0)
                shift0 = d;
            CHECK(d == shift0);
        } else {
            if (orig.t == 100)
                shift1 = d;
            CHECK(d == shift1);
        }
    }

    CHECK_THROWS_AS(translate_events(stream, spec, nullptr), Error);

    // events outside every window are data errors
    SliceManifest short_manifest;
    short_manifest.records.push_back({0, 0, 50, Regime::Intersect, 30, 10, 0, ""});
    CHECK_THROWS_AS(translate_events(stream, spec, &short_manifest), Error);
}

TEST_CASE("translate_events: deterministic per seed") {
    std::mt19937_64 rng(321);
    std::vector<Event> events;
    for (int i = 0; i < 200; ++i)
        events.push_back(ev(std::uint64_t(i), std::uint16_t(rng() % 20),
                            std::uint16_t(rng() % 20), 1));
    auto stream = EventStream::create({20, 20}, events);
    TranslationSpec spec;
    spec.max_dx = 6;
    spec.max_dy = 6;
    spec.seed = 0xDEADBEEF;
    auto a = translate_events(stream, spec);
    auto b = translate_events(stream, spec);
    CHECK(a.events() == b.events());
}

TEST_CASE("translate_events: rejects bounds as large as the sensor") {
    auto stream = EventStream::create({4, 4}, {ev(0, 1, 1, 1)});
    TranslationSpec spec;
    spec.max_dx = 4;
    CHECK_THROWS_AS(translate_events(stream, spec), Error);
}

TEST_CASE("crop_reference: full-size crop is the whole image") {
    auto img = ImageU8::make(10, 8, 3);
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        img.pixels[i] = std::uint8_t(i * 7);
    CropSpec spec;
    spec.out_w = 10;
    spec.out_h = 8;
    spec.protected_region = {2, 2, 3, 3};
    spec.seed = 9;
    auto result = crop_reference(img, spec);
    CHECK(result.applied == Rect{0, 0, 10, 8});
    CHECK(result.image == img);
}

TEST_CASE("crop_reference: infeasible placements are an error") {
    auto img = ImageU8::make(10, 10, 1);
    CropSpec spec;
    spec.out_w = 6;
    spec.out_h = 6;
    spec.protected_region = {0, 0, 10, 10}; // whole image protected
    CHECK_THROWS_AS(crop_reference(img, spec), Error);

    spec.protected_region = {0, 0, 2, 10}; // taller than the crop
    CHECK_THROWS_AS(crop_reference(img, spec), Error);
}

TEST_CASE("crop_reference: 500 seeded draws always contain the protected rect") {
    auto img = ImageU8::make(100, 100, 3);
    std::mt19937_64 fill(4);
    for (auto& p : img.pixels)
        p = std::uint8_t(fill());
    CropSpec spec;
    spec.out_w = 60;
    spec.out_h = 60;
    spec.protected_region = {40, 40, 20, 20};
    for (int seed = 0; seed < 500; ++seed) {
        spec.seed = std::uint64_t(seed);
        auto result = crop_reference(img, spec);
        const Rect& a = result.applied;
        // feasible x0 range is [0, 40]
        CHECK(a.x0 >= 0);
        CHECK(a.x0 <= 40);
        CHECK(a.y0 >= 0);
        CHECK(a.y0 <= 40);
        // independent containment check
        CHECK(a.x0 <= 40);
        CHECK(a.x0 + a.w >= 60);
        CHECK(a.y0 + a.h >= 60);
        // protected pixels are copied verbatim at translated coordinates
        for (int y = 40; y < 60; y += 7)
            for (int x = 40; x < 60; x += 7)
                for (int c = 0; c < 3; ++c)
                    CHECK(result.image.at(x - a.x0, y - a.y0, c) == img.at(x, y, c));
    }
}

TEST_CASE("crop_reference: deterministic per seed") {
    auto img = ImageU8::make(50, 40, 1);
    std::mt19937_64 fill(8);
    for (auto& p : img.pixels)
        p = std::uint8_t(fill());
    CropSpec spec;
    spec.out_w = 30;
    spec.out_h = 20;
    spec.protected_region = {10, 10, 5, 5};
    spec.seed = 77;
    auto a = crop_reference(img, spec);
    auto b = crop_reference(img, spec);
    CHECK(a.applied == b.applied);
    CHECK(a.image == b.image);
}
