#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "topotrack/errors.hpp"
#include "topotrack/rng.hpp"
#include "topotrack/tracks.hpp"

using namespace topotrack;

namespace {

Track make_track(const std::string& id, std::size_t n, double step = 1.0) {
    Track t;
    t.id = id;
    t.label = "c";
    for (std::size_t i = 0; i < n; ++i)
        t.points.push_back({static_cast<std::int64_t>(i), step * static_cast<double>(i),
                            0.5 * step * static_cast<double>(i)});
    return t;
}

}  // namespace

TEST_CASE("subtrack count is N - nstar") {
    Track t = make_track("a", 120);
    auto subs = extract_subtracks(t, 100);
    CHECK(subs.size() == 20);
    CHECK(subs.front().window_index == 1);
    CHECK(subs.back().window_index == 20);
    for (const SubTrack& s : subs) CHECK(s.points.size() == 100);
}

TEST_CASE("two-point track yields one window holding the first point") {
    Track t = make_track("a", 2);
    auto subs = extract_subtracks(t, 1);
    REQUIRE(subs.size() == 1);
    REQUIRE(subs[0].points.size() == 1);
    CHECK(subs[0].points[0].x == t.points[0].x);
    CHECK(subs[0].points[0].y == t.points[0].y);
}

TEST_CASE("stride-1 windows cover consecutive slices") {
    Track t = make_track("a", 5);
    auto subs = extract_subtracks(t, 3);
    REQUIRE(subs.size() == 2);
    // windows [1..3] and [2..4] in 1-based parent indexing
    CHECK(subs[0].points[0].x == t.points[0].x);
    CHECK(subs[0].points[2].x == t.points[2].x);
    CHECK(subs[1].points[0].x == t.points[1].x);
    CHECK(subs[1].points[2].x == t.points[3].x);
}

TEST_CASE("window first elements replay the parent prefix") {
    Track t = make_track("a", 37);
    auto subs = extract_subtracks(t, 12);
    for (std::size_t k = 0; k < subs.size(); ++k) {
        CHECK(subs[k].points[0].x == t.points[k].x);
        CHECK(subs[k].points[0].y == t.points[k].y);
    }
}

TEST_CASE("too-short track is rejected with id and length in the message") {
    Track t = make_track("obj-7", 50);
    CHECK_THROWS_AS(extract_subtracks(t, 50), InputError);
    CHECK_THROWS_AS(extract_subtracks(t, 120), InputError);
    try {
        extract_subtracks(t, 50);
    } catch (const InputError& e) {
        std::string msg = e.what();
        CHECK(msg.find("obj-7") != std::string::npos);
        CHECK(msg.find("50") != std::string::npos);
    }
    CHECK_THROWS_AS(extract_subtracks(t, 0), ConfigError);
}

TEST_CASE("normalization maps each axis onto [0,1]") {
    SubTrack s{"a", 1, {{0, 7}, {2, 7}, {4, 7}}};
    NormalizedSubTrack n = normalize_subtrack(s);
    CHECK(n.points[0].x == 0.0);
    CHECK(n.points[1].x == 0.5);
    CHECK(n.points[2].x == 1.0);
    // constant axis maps to all zeros
    for (const Vec2& p : n.points) CHECK(p.y == 0.0);
}

TEST_CASE("normalization is translation invariant") {
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        SubTrack s{"a", 1, {}};
        std::size_t len = 2 + rng.below(30);
        for (std::size_t i = 0; i < len; ++i)
            s.points.push_back({rng.uniform(-50, 50), rng.uniform(-50, 50)});
        SubTrack shifted = s;
        double dx = rng.uniform(-100, 100), dy = rng.uniform(-100, 100);
        for (Vec2& p : shifted.points) {
            p.x += dx;
            p.y += dy;
        }
        NormalizedSubTrack a = normalize_subtrack(s);
        NormalizedSubTrack b = normalize_subtrack(shifted);
        for (std::size_t i = 0; i < len; ++i) {
            CHECK(a.points[i].x == doctest::Approx(b.points[i].x).epsilon(1e-12));
            CHECK(a.points[i].y == doctest::Approx(b.points[i].y).epsilon(1e-12));
        }
    }
}

TEST_CASE("normalization is invariant to positive per-axis scaling") {
    Rng rng(100);
    for (int trial = 0; trial < 200; ++trial) {
        SubTrack s{"a", 1, {}};
        std::size_t len = 2 + rng.below(30);
        for (std::size_t i = 0; i < len; ++i)
            s.points.push_back({rng.uniform(-50, 50), rng.uniform(-50, 50)});
        SubTrack scaled = s;
        double cx = rng.uniform(0.1, 10.0), cy = rng.uniform(0.1, 10.0);
        for (Vec2& p : scaled.points) {
            p.x *= cx;
            p.y *= cy;
        }
        NormalizedSubTrack a = normalize_subtrack(s);
        NormalizedSubTrack b = normalize_subtrack(scaled);
        for (std::size_t i = 0; i < len; ++i) {
            CHECK(std::abs(a.points[i].x - b.points[i].x) < 1e-12);
            CHECK(std::abs(a.points[i].y - b.points[i].y) < 1e-12);
        }
    }
}

TEST_CASE("projection dots normalized coordinates with v") {
    ProjectionVector v{0.5, 0.5, 0};
    NormalizedSubTrack n{"a", 1, {{1, 1}, {0, 0}}};
    ProjectedSeries s = project(n, v);
    CHECK(s.values[0] == 1.0);
    CHECK(s.values[1] == 0.0);

    ProjectionVector v2{0.25, 0.75, 0};
    NormalizedSubTrack n2{"a", 1, {{0, 0}, {1, 0}, {1, 1}}};
    ProjectedSeries s2 = project(n2, v2);
    CHECK(s2.values[0] == doctest::Approx(0.0));
    CHECK(s2.values[1] == doctest::Approx(0.25));
    CHECK(s2.values[2] == doctest::Approx(1.0));
}

TEST_CASE("projected values stay within [0, vx+vy]") {
    Rng rng(7);
    ProjectionVector v = draw_projection_vector(123);
    CHECK(v.vx > 0.0);
    CHECK(v.vx <= 1.0);
    CHECK(v.vy > 0.0);
    CHECK(v.vy <= 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        SubTrack s{"a", 1, {}};
        for (int i = 0; i < 20; ++i) s.points.push_back({rng.uniform(-9, 9), rng.uniform(-9, 9)});
        ProjectedSeries series = project(normalize_subtrack(s), v);
        for (double val : series.values) {
            CHECK(val >= 0.0);
            CHECK(val <= v.vx + v.vy);
        }
    }
}

TEST_CASE("projection vector is reproducible from its seed") {
    ProjectionVector a = draw_projection_vector(42);
    ProjectionVector b = draw_projection_vector(42);
    CHECK(a.vx == b.vx);
    CHECK(a.vy == b.vy);
    CHECK(a.seed == 42);
}

TEST_CASE("track CSV round-trips and reports bad rows by line") {
    std::string csv =
        "track_id,label,frame,x,y\n"
        "a,target,0,1.5,2.5\n"
        "a,target,1,1.6,2.6\n"
        "a,target,1,9.9,9.9\n"      // duplicate frame -> rejected
        "b,confuser,0,oops,2.0\n"   // bad coordinate -> rejected
        "b,confuser,1,3.0,4.0\n"
        "b,confuser,2,3.5\n";       // wrong field count -> rejected
    std::istringstream in(csv);
    IngestResult r = read_track_csv(in);
    REQUIRE(r.tracks.size() == 2);
    CHECK(r.tracks[0].points.size() == 2);
    CHECK(r.tracks[1].points.size() == 1);
    REQUIRE(r.errors.size() == 3);
    CHECK(r.errors[0].line == 4);
    CHECK(r.errors[1].line == 5);
    CHECK(r.errors[2].line == 7);

    std::ostringstream out;
    write_track_csv(out, r.tracks);
    std::istringstream in2(out.str());
    IngestResult r2 = read_track_csv(in2);
    CHECK(r2.errors.empty());
    REQUIRE(r2.tracks.size() == 2);
    CHECK(r2.tracks[0].points[1].x == r.tracks[0].points[1].x);
}

TEST_CASE("track CSV rejects missing header and out-of-order ids") {
    std::istringstream empty("");
    CHECK_THROWS_AS(read_track_csv(empty), InputError);

    std::istringstream bad_header("id,label,frame,x,y\n");
    CHECK_THROWS_AS(read_track_csv(bad_header), InputError);

    std::string csv =
        "track_id,label,frame,x,y\n"
        "b,x,0,1,1\n"
        "a,y,0,1,1\n"   // out of order -> rejected
        "c,z,0,1,1\n"
        "b,x,1,2,2\n";  // returning to b -> rejected
    std::istringstream in(csv);
    IngestResult r = read_track_csv(in);
    CHECK(r.tracks.size() == 2);
    CHECK(r.errors.size() == 2);
}
