#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "topotrack/classify.hpp"
#include "topotrack/embedding.hpp"
#include "topotrack/persistence.hpp"
#include "topotrack/synth.hpp"
#include "topotrack/tracks.hpp"
#include "topotrack/vectorization.hpp"

namespace topotrack {

// Feature methods of the experiment grid: the projected sub-track statistic
// itself, and the H0 persistence vector of its delay embedding.
inline constexpr const char* kMethodStatistic = "statistic";
inline constexpr const char* kMethodPersistence = "persistence";

struct RunConfig {
    std::uint64_t seed = 42;
    std::vector<int> lengths = {100, 75, 50};
    std::vector<std::string> methods = {kMethodStatistic, kMethodPersistence};
    int k = 5;
    double train_fraction = 0.5;
    SplitMode split_mode = SplitMode::shuffled;
    DelayParams embedding;          // D = 2, tau = 1 defaults
    bool auto_params = false;       // estimate (tau, D) per length via MI/FNN
    int pi_resolution = 25;
    double pi_sigma_scale = 0.05;   // sigma = sigma_scale * p_max
    int jobs = 0;                   // 0 = library default thread count
    std::string target_label = "target";
    std::string tracks_csv;                   // external input...
    std::optional<ScenarioConfig> scenario;   // ...or generated (exactly one)

    void validate() const;  // throws ConfigError
};

// JSON round-trip for config files; parse throws ConfigError on unknown or
// ill-typed fields.
RunConfig parse_run_config_json(const std::string& text);
std::string run_config_to_json(const RunConfig& config);
std::string run_config_schema();  // field-by-field schema description (JSON)

// Standalone scenario files for the `synth` subcommand (same schema as the
// config's embedded `scenario` block).
ScenarioConfig parse_scenario_json(const std::string& text);

struct CellResult {
    int length = 0;
    std::string method;
    ConfusionMatrix matrix;
    double p_max = 0.0;   // persistence cells only
    double sigma = 0.0;
    DelayParams embedding_used;
    double seconds = 0.0;
};

struct ObjectInfo {
    std::string id;
    std::string label;
    std::size_t length = 0;
};

struct RunManifest {
    std::string config_json;                 // canonical snapshot
    ProjectionVector projection;
    std::vector<ObjectInfo> objects;
    std::vector<CellResult> cells;
    std::vector<std::string> rejected;       // "L<length>: <track id>: <reason>"
    double total_seconds = 0.0;
};

// Full experiment loop: tracks -> sub-tracks -> projection -> (embedding ->
// persistence -> vectors | raw statistic) -> k-NN -> confusion matrices, for
// every (length, method) cell. Writes tracks.csv, per-length feature/diagram
// CSVs and confusion JSONs, and manifest.json under out_dir. Everything but
// the recorded timings is a pure function of (config, input bytes).
RunManifest run_experiment(const RunConfig& config, const std::string& out_dir);

// Renders per-object example data from a finished run directory: normalized
// sub-track, embedded cloud, H0 barcode, and (when the run had a persistence
// cell) the persistence vector, one CSV each per object.
void export_plots(const std::string& run_dir, const std::string& out_dir);

// FNV-1a over file bytes, hex; used for the manifest input digests.
std::string digest_file(const std::string& path);
std::string digest_bytes(std::string_view bytes);

}  // namespace topotrack
