#include "topotrack/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "topotrack/errors.hpp"
#include "topotrack/rng.hpp"

namespace topotrack {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double param(const ClassSpec& spec, const std::string& name, double fallback) {
    auto it = spec.params.find(name);
    return it == spec.params.end() ? fallback : it->second;
}

struct Pose {
    double x0, y0;     // start position
    double ux, uy;     // heading unit vector
};

Pose random_pose(Rng& rng) {
    Pose p;
    p.x0 = rng.uniform(100.0, 900.0);
    p.y0 = rng.uniform(100.0, 900.0);
    double theta = rng.uniform(0.0, kTwoPi);
    p.ux = std::cos(theta);
    p.uy = std::sin(theta);
    return p;
}

std::vector<Vec2> gen_arc_oscillator(const ClassSpec& spec, int n, Rng& rng) {
    const double speed = param(spec, "speed", 0.8);
    const double curvature = param(spec, "curvature", 0.0001);
    const double amp = param(spec, "amp", 4.0);
    const double period = param(spec, "period", 12.0);
    const double amp2_ratio = param(spec, "amp2_ratio", 0.45);
    Pose pose = random_pose(rng);
    const double phase = rng.uniform(0.0, kTwoPi);
    const double phase2 = rng.uniform(0.0, kTwoPi);
    const double bend = rng.uniform01() < 0.5 ? 1.0 : -1.0;
    // perpendicular to the heading
    const double nx = -pose.uy, ny = pose.ux;

    std::vector<Vec2> pts(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) {
        double along = speed * t;
        double across = bend * 0.5 * curvature * t * t +
                        amp * std::sin(kTwoPi * t / period + phase) +
                        amp * amp2_ratio * std::sin(2.0 * kTwoPi * t / period + phase2);
        pts[static_cast<std::size_t>(t)] = {pose.x0 + pose.ux * along + nx * across,
                                            pose.y0 + pose.uy * along + ny * across};
    }
    return pts;
}

std::vector<Vec2> gen_linear_transit(const ClassSpec& spec, int n, Rng& rng) {
    const double speed = param(spec, "speed", 1.2);
    Pose pose = random_pose(rng);
    std::vector<Vec2> pts(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t)
        pts[static_cast<std::size_t>(t)] = {pose.x0 + pose.ux * speed * t, pose.y0 + pose.uy * speed * t};
    return pts;
}

// momentum walk tethered to its start point, so the object loiters around a
// spot instead of wandering off
std::vector<Vec2> gen_random_walk(const ClassSpec& spec, int n, Rng& rng) {
    const double step_sd = param(spec, "step_sd", 0.4);
    const double momentum = param(spec, "momentum", 0.85);
    const double pull = param(spec, "pull", 0.02);
    Pose pose = random_pose(rng);
    std::vector<Vec2> pts(static_cast<std::size_t>(n));
    double x = pose.x0, y = pose.y0;
    double vx = 0.0, vy = 0.0;
    for (int t = 0; t < n; ++t) {
        pts[static_cast<std::size_t>(t)] = {x, y};
        vx = momentum * vx - pull * (x - pose.x0) + rng.normal(0.0, step_sd);
        vy = momentum * vy - pull * (y - pose.y0) + rng.normal(0.0, step_sd);
        x += vx;
        y += vy;
    }
    return pts;
}

std::vector<Vec2> gen_flutter(const ClassSpec& spec, int n, Rng& rng) {
    const double speed = param(spec, "speed", 0.8);
    const double amp = param(spec, "amp", 4.0);
    const double period = param(spec, "period", 12.0);
    Pose pose = random_pose(rng);
    const double phase = rng.uniform(0.0, kTwoPi);
    const double nx = -pose.uy, ny = pose.ux;
    std::vector<Vec2> pts(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) {
        double along = speed * t;
        double across = amp * std::sin(kTwoPi * t / period + phase);
        pts[static_cast<std::size_t>(t)] = {pose.x0 + pose.ux * along + nx * across,
                                            pose.y0 + pose.uy * along + ny * across};
    }
    return pts;
}

std::vector<Vec2> gen_dwell_transit(const ClassSpec& spec, int n, Rng& rng) {
    const double speed = param(spec, "speed", 1.5);
    const int seg_min = static_cast<int>(param(spec, "segment_min", 10.0));
    const int seg_max = static_cast<int>(param(spec, "segment_max", 24.0));
    const int dwell_min = static_cast<int>(param(spec, "dwell_min", 4.0));
    const int dwell_max = static_cast<int>(param(spec, "dwell_max", 12.0));
    const double turn_sd = param(spec, "turn_sd", 0.8);
    Pose pose = random_pose(rng);
    double theta = std::atan2(pose.uy, pose.ux);

    std::vector<Vec2> pts;
    pts.reserve(static_cast<std::size_t>(n));
    double x = pose.x0, y = pose.y0;
    bool moving = false;  // flips to a moving leg on the first step
    int remaining = 0;
    while (static_cast<int>(pts.size()) < n) {
        if (remaining == 0) {
            moving = !moving;
            if (moving) {
                theta += rng.normal(0.0, turn_sd);
                remaining = seg_min + static_cast<int>(rng.below(static_cast<std::uint64_t>(seg_max - seg_min + 1)));
            } else {
                remaining = dwell_min + static_cast<int>(rng.below(static_cast<std::uint64_t>(dwell_max - dwell_min + 1)));
            }
        }
        pts.push_back({x, y});
        if (moving) {
            x += speed * std::cos(theta);
            y += speed * std::sin(theta);
        }
        --remaining;
    }
    return pts;
}

std::vector<Vec2> generate_points(const ClassSpec& spec, int n, Rng& rng) {
    if (spec.kind == "arc_oscillator") return gen_arc_oscillator(spec, n, rng);
    if (spec.kind == "linear_transit") return gen_linear_transit(spec, n, rng);
    if (spec.kind == "random_walk") return gen_random_walk(spec, n, rng);
    if (spec.kind == "flutter") return gen_flutter(spec, n, rng);
    if (spec.kind == "dwell_transit") return gen_dwell_transit(spec, n, rng);
    throw ConfigError("unknown dynamics kind '" + spec.kind + "'");
}

void validate_spec(const ClassSpec& spec) {
    if (spec.label.empty()) throw ConfigError("class label must be non-empty");
    if (spec.noise_sd < 0.0) throw ConfigError("noise_sd must be >= 0 for class '" + spec.label + "'");
    if (spec.length_min < 2 || spec.length_max < spec.length_min)
        throw ConfigError("bad track length range for class '" + spec.label + "'");
}

}  // namespace

ScenarioConfig default_scenario() {
    ScenarioConfig c;
    c.seed = 1;
    c.n_targets = 2;
    c.n_confusers_per_class = 2;
    c.target_label = "target";
    c.classes = {
        {"arc_oscillator", "target", 0.25, 240, 300, {}},
        {"linear_transit", "transit", 0.25, 240, 300, {}},
        {"random_walk", "loiter", 0.25, 240, 300, {}},
        {"flutter", "flutter", 0.25, 240, 300, {}},
        {"dwell_transit", "stopgo", 0.25, 240, 300, {}},
    };
    return c;
}

std::vector<Track> generate_tracks(const ScenarioConfig& config) {
    if (config.classes.empty()) throw ConfigError("scenario has no classes");
    if (config.n_targets < 1 || config.n_confusers_per_class < 1)
        throw ConfigError("scenario needs at least one track per class");

    std::vector<Track> tracks;
    for (std::size_t ci = 0; ci < config.classes.size(); ++ci) {
        const ClassSpec& spec = config.classes[ci];
        validate_spec(spec);
        const bool is_target = spec.label == config.target_label;
        const int count = is_target ? config.n_targets : config.n_confusers_per_class;
        for (int i = 0; i < count; ++i) {
            Rng rng(derive_seed(config.seed, "track:" + spec.label, static_cast<std::uint64_t>(i)));
            const int n = spec.length_min +
                          static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.length_max - spec.length_min + 1)));
            std::vector<Vec2> pts = generate_points(spec, n, rng);

            Track t;
            char buf[16];
            std::snprintf(buf, sizeof(buf), "-%03d", i);
            t.id = spec.label + buf;
            t.label = spec.label;
            t.points.reserve(pts.size());
            for (int f = 0; f < n; ++f) {
                double nx = spec.noise_sd > 0.0 ? rng.normal(0.0, spec.noise_sd) : 0.0;
                double ny = spec.noise_sd > 0.0 ? rng.normal(0.0, spec.noise_sd) : 0.0;
                t.points.push_back({f, pts[static_cast<std::size_t>(f)].x + nx,
                                    pts[static_cast<std::size_t>(f)].y + ny});
            }
            tracks.push_back(std::move(t));
        }
    }
    std::sort(tracks.begin(), tracks.end(), [](const Track& a, const Track& b) { return a.id < b.id; });
    return tracks;
}

}  // namespace topotrack
