#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "topotrack/tracks.hpp"

namespace topotrack {

// Built-in dynamics kinds:
//   arc_oscillator - quasi-ballistic arc plus a small transverse two-harmonic
//                    oscillation (the target class)
//   linear_transit - constant-velocity crossing; collinear at zero noise
//   random_walk    - loitering momentum walk
//   flutter        - linear transit plus a pure-sine transverse bob at the
//                    target's oscillation frequency (the hard confuser)
//   dwell_transit  - piecewise-linear legs separated by dwell stops
struct ClassSpec {
    std::string kind;
    std::string label;
    double noise_sd = 0.25;                  // white pixel noise on both axes
    int length_min = 240;
    int length_max = 300;
    std::map<std::string, double> params;    // kind-specific, defaulted per kind
};

struct ScenarioConfig {
    std::uint64_t seed = 1;
    int n_targets = 2;
    int n_confusers_per_class = 2;
    std::string target_label = "target";     // classes with this label count as targets
    std::vector<ClassSpec> classes;
};

// One target class plus the four confuser classes, tuned so the experiment
// grid separates cleanly at the default settings.
ScenarioConfig default_scenario();

// Deterministic given config.seed; per-track sub-seeds make generation order
// independent. Tracks come back sorted by id, ready for the track CSV.
std::vector<Track> generate_tracks(const ScenarioConfig& config);

}  // namespace topotrack
