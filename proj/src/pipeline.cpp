#include "topotrack/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <json.hpp>

#include "topotrack/errors.hpp"
#include "topotrack/rng.hpp"

namespace topotrack {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const json& require_field(const json& j, const char* name, const char* where) {
    auto it = j.find(name);
    if (it == j.end())
        throw ConfigError(std::string(where) + " is missing required field '" + name + "'");
    return *it;
}

template <typename T>
T get_or(const json& j, const char* name, T fallback) {
    auto it = j.find(name);
    if (it == j.end()) return fallback;
    try {
        return it->get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("field '") + name + "': " + e.what());
    }
}

void reject_unknown_fields(const json& j, std::initializer_list<const char*> known, const char* where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) ok = true;
        if (!ok) throw ConfigError(std::string(where) + " has unknown field '" + it.key() + "'");
    }
}

ScenarioConfig scenario_from_json(const json& j) {
    reject_unknown_fields(j,
                          {"seed", "n_targets", "n_confusers_per_class", "target_label", "classes"},
                          "scenario");
    ScenarioConfig c;
    c.seed = get_or<std::uint64_t>(j, "seed", 0);  // 0 = derive from run seed
    c.n_targets = get_or<int>(j, "n_targets", 2);
    c.n_confusers_per_class = get_or<int>(j, "n_confusers_per_class", 2);
    c.target_label = get_or<std::string>(j, "target_label", "target");
    if (j.contains("classes")) {
        if (!j["classes"].is_array()) throw ConfigError("scenario.classes must be an array");
        for (const json& cj : j["classes"]) {
            reject_unknown_fields(cj, {"kind", "label", "noise_sd", "length_min", "length_max", "params"},
                                  "scenario class");
            ClassSpec spec;
            spec.kind = require_field(cj, "kind", "scenario class").get<std::string>();
            spec.label = require_field(cj, "label", "scenario class").get<std::string>();
            spec.noise_sd = get_or<double>(cj, "noise_sd", 0.25);
            spec.length_min = get_or<int>(cj, "length_min", 240);
            spec.length_max = get_or<int>(cj, "length_max", 300);
            if (cj.contains("params")) {
                for (auto it = cj["params"].begin(); it != cj["params"].end(); ++it)
                    spec.params[it.key()] = it.value().get<double>();
            }
            c.classes.push_back(std::move(spec));
        }
    } else {
        c.classes = default_scenario().classes;
    }
    return c;
}

json scenario_to_json(const ScenarioConfig& c) {
    json j;
    j["seed"] = c.seed;
    j["n_targets"] = c.n_targets;
    j["n_confusers_per_class"] = c.n_confusers_per_class;
    j["target_label"] = c.target_label;
    j["classes"] = json::array();
    for (const ClassSpec& spec : c.classes) {
        json cj;
        cj["kind"] = spec.kind;
        cj["label"] = spec.label;
        cj["noise_sd"] = spec.noise_sd;
        cj["length_min"] = spec.length_min;
        cj["length_max"] = spec.length_max;
        if (!spec.params.empty()) cj["params"] = spec.params;
        j["classes"].push_back(std::move(cj));
    }
    return j;
}

std::string split_mode_name(SplitMode mode) {
    return mode == SplitMode::shuffled ? "shuffled" : "block";
}

SplitMode split_mode_from_name(const std::string& name) {
    if (name == "shuffled") return SplitMode::shuffled;
    if (name == "block") return SplitMode::block;
    throw ConfigError("split_mode must be 'shuffled' or 'block', got '" + name + "'");
}

json config_to_json_obj(const RunConfig& c) {
    json j;
    j["seed"] = c.seed;
    j["lengths"] = c.lengths;
    j["methods"] = c.methods;
    j["k"] = c.k;
    j["train_fraction"] = c.train_fraction;
    j["split_mode"] = split_mode_name(c.split_mode);
    j["embedding"] = {{"dim", c.embedding.dim}, {"tau", c.embedding.tau}, {"auto_params", c.auto_params}};
    j["persistence_image"] = {{"resolution", c.pi_resolution}, {"sigma_scale", c.pi_sigma_scale}};
    j["jobs"] = c.jobs;
    j["target_label"] = c.target_label;
    if (!c.tracks_csv.empty()) j["tracks_csv"] = c.tracks_csv;
    if (c.scenario) j["scenario"] = scenario_to_json(*c.scenario);
    return j;
}

}  // namespace

void RunConfig::validate() const {
    if (lengths.empty()) throw ConfigError("lengths must be non-empty");
    for (int l : lengths)
        if (l < 1) throw ConfigError("every sub-track length must be >= 1");
    if (methods.empty()) throw ConfigError("methods must be non-empty");
    for (const std::string& m : methods)
        if (m != kMethodStatistic && m != kMethodPersistence)
            throw ConfigError("unknown feature method '" + m + "' (expected 'statistic' or 'persistence')");
    if (std::set<std::string>(methods.begin(), methods.end()).size() != methods.size())
        throw ConfigError("duplicate entries in methods");
    if (std::set<int>(lengths.begin(), lengths.end()).size() != lengths.size())
        throw ConfigError("duplicate entries in lengths");
    if (k < 1) throw ConfigError("k must be >= 1");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw ConfigError("train_fraction must be in (0, 1)");
    if (embedding.dim < 1 || embedding.tau < 1) throw ConfigError("embedding dim and tau must be >= 1");
    if (!auto_params) {
        for (int l : lengths) {
            if ((embedding.dim - 1) * embedding.tau >= l)
                throw ConfigError("embedding (D=" + std::to_string(embedding.dim) + ", tau=" +
                                  std::to_string(embedding.tau) + ") needs series longer than " +
                                  std::to_string((embedding.dim - 1) * embedding.tau) +
                                  ", but length " + std::to_string(l) + " is requested");
        }
    }
    if (pi_resolution < 1) throw ConfigError("persistence_image.resolution must be >= 1");
    if (!(pi_sigma_scale > 0.0)) throw ConfigError("persistence_image.sigma_scale must be > 0");
    if (jobs < 0) throw ConfigError("jobs must be >= 0");
    if (target_label.empty()) throw ConfigError("target_label must be non-empty");
    if (tracks_csv.empty() && !scenario)
        throw ConfigError("config needs either 'tracks_csv' or a 'scenario' block");
    if (!tracks_csv.empty() && scenario)
        throw ConfigError("config must not set both 'tracks_csv' and 'scenario'");
}

RunConfig parse_run_config_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    reject_unknown_fields(j,
                          {"seed", "lengths", "methods", "k", "train_fraction", "split_mode", "embedding",
                           "persistence_image", "jobs", "target_label", "tracks_csv", "scenario"},
                          "config");

    RunConfig c;
    c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
    c.lengths = get_or<std::vector<int>>(j, "lengths", c.lengths);
    c.methods = get_or<std::vector<std::string>>(j, "methods", c.methods);
    c.k = get_or<int>(j, "k", c.k);
    c.train_fraction = get_or<double>(j, "train_fraction", c.train_fraction);
    c.split_mode = split_mode_from_name(get_or<std::string>(j, "split_mode", "shuffled"));
    if (j.contains("embedding")) {
        const json& e = j["embedding"];
        reject_unknown_fields(e, {"dim", "tau", "auto_params"}, "embedding");
        c.embedding.dim = get_or<int>(e, "dim", 2);
        c.embedding.tau = get_or<int>(e, "tau", 1);
        c.auto_params = get_or<bool>(e, "auto_params", false);
    }
    if (j.contains("persistence_image")) {
        const json& p = j["persistence_image"];
        reject_unknown_fields(p, {"resolution", "sigma_scale"}, "persistence_image");
        c.pi_resolution = get_or<int>(p, "resolution", 25);
        c.pi_sigma_scale = get_or<double>(p, "sigma_scale", 0.05);
    }
    c.jobs = get_or<int>(j, "jobs", 0);
    c.target_label = get_or<std::string>(j, "target_label", c.target_label);
    c.tracks_csv = get_or<std::string>(j, "tracks_csv", "");
    if (j.contains("scenario")) c.scenario = scenario_from_json(j["scenario"]);
    c.validate();
    return c;
}

std::string run_config_to_json(const RunConfig& config) { return config_to_json_obj(config).dump(2) + "\n"; }

ScenarioConfig parse_scenario_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("scenario root must be a JSON object");
    return scenario_from_json(j);
}

std::string run_config_schema() {
    json s;
    s["seed"] = "uint64: root seed; every random stream derives from it (default 42)";
    s["lengths"] = "int array: sub-track lengths N* to evaluate (default [100,75,50])";
    s["methods"] = "string array: any of 'statistic', 'persistence' (default both)";
    s["k"] = "int >= 1: k-NN neighbor count (default 5)";
    s["train_fraction"] = "real in (0,1): per-object train share (default 0.5)";
    s["split_mode"] = "'shuffled' (seeded per-object shuffle) or 'block' (train = earliest windows, "
                      "test = later, phase-shifted windows)";
    s["embedding"] = {{"dim", "int >= 1 (default 2)"},
                      {"tau", "int >= 1 (default 1)"},
                      {"auto_params", "bool: estimate (tau, dim) per length via mutual information "
                                      "and false nearest neighbors (default false)"}};
    s["persistence_image"] = {{"resolution", "int >= 1: vector length (default 25)"},
                              {"sigma_scale", "real > 0: sigma = sigma_scale * p_max (default 0.05)"}};
    s["jobs"] = "int >= 0: worker threads, 0 = library default";
    s["target_label"] = "string: class counted as 'target'; all others pool as confusers";
    s["tracks_csv"] = "string: path to input track CSV (exclusive with 'scenario')";
    s["scenario"] = {{"seed", "uint64: generator seed; 0 derives one from the run seed"},
                     {"n_targets", "int >= 1: tracks for the target class"},
                     {"n_confusers_per_class", "int >= 1: tracks per confuser class"},
                     {"target_label", "string: which class label is the target"},
                     {"classes", "array of {kind, label, noise_sd, length_min, length_max, params{}}; "
                                 "kinds: arc_oscillator, linear_transit, random_walk, flutter, "
                                 "dwell_transit; omit for the built-in five-class scenario"}};
    return s.dump(2) + "\n";
}

std::string digest_bytes(std::string_view bytes) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

std::string digest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "' for digesting");
    std::ostringstream ss;
    ss << in.rdbuf();
    return digest_bytes(ss.str());
}

namespace {

struct FeatureRows {
    std::vector<ProjectedSeries> series;       // one per sub-track, row order
    std::vector<std::string> labels;           // parallel to series
};

// windows every track at length nstar; too-short tracks are recorded and
// skipped rather than aborting the run
FeatureRows build_series(const std::vector<Track>& tracks, int nstar, const ProjectionVector& v,
                         std::vector<std::string>& rejected) {
    FeatureRows rows;
    for (const Track& t : tracks) {
        std::vector<SubTrack> subs;
        try {
            subs = extract_subtracks(t, nstar);
        } catch (const InputError& e) {
            rejected.push_back("L" + std::to_string(nstar) + ": " + t.id + ": " + e.what());
            continue;
        }
        for (const SubTrack& s : subs) {
            rows.series.push_back(project(normalize_subtrack(s), v));
            rows.labels.push_back(t.label);
        }
    }
    return rows;
}

json confusion_to_json(const ConfusionMatrix& m) {
    json j;
    j["classes"] = {"confuser", "target"};
    j["counts"] = {{m.counts[0][0], m.counts[0][1]}, {m.counts[1][0], m.counts[1][1]}};
    // NaN rows (no predictions of that class) serialize as null
    j["row_normalized"] = {{m.row_normalized[0][0], m.row_normalized[0][1]},
                           {m.row_normalized[1][0], m.row_normalized[1][1]}};
    j["row_defined"] = {m.row_defined[0], m.row_defined[1]};
    return j;
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << text;
}

// diagrams for a whole length cell, with provenance columns
void write_diagrams_csv(const fs::path& path, const std::vector<PersistenceDiagram>& diagrams,
                        const std::vector<Provenance>& provenance) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << "track_id,window_index,dim,birth,death\n";
    for (std::size_t i = 0; i < diagrams.size(); ++i) {
        for (const PersistencePair& p : diagrams[i].pairs) {
            out << provenance[i].parent_id << ',' << provenance[i].window_index << ','
                << diagrams[i].dim << ',' << format_double(p.birth) << ','
                << (p.essential() ? "inf" : format_double(p.death)) << '\n';
        }
    }
}

DelayParams auto_embedding_params(std::span<const double> series) {
    const int n = static_cast<int>(series.size());
    DelayParams params{1, 1};
    TauEstimate tau = estimate_tau_mutual_information(series, std::max(1, n / 4));
    params.tau = tau.tau;
    int max_dim = std::min(6, (n - 10) / params.tau + 1);
    if (max_dim >= 1) {
        DimEstimate dim = estimate_dim_fnn(series, params.tau, max_dim);
        params.dim = dim.dim;
    }
    // guarantee a valid embedding for this length
    while (params.dim > 1 && (params.dim - 1) * params.tau >= n) --params.dim;
    return params;
}

}  // namespace

RunManifest run_experiment(const RunConfig& config, const std::string& out_dir) {
    config.validate();
    const double t_start = now_seconds();

#ifdef _OPENMP
    if (config.jobs > 0) omp_set_num_threads(config.jobs);
#endif

    fs::create_directories(out_dir);
    const fs::path out(out_dir);

    RunManifest manifest;
    manifest.config_json = run_config_to_json(config);

    // --- input tracks ---
    std::vector<Track> tracks;
    std::string input_digest;
    if (config.scenario) {
        ScenarioConfig scenario = *config.scenario;
        if (scenario.seed == 0) scenario.seed = derive_seed(config.seed, "scenario");
        tracks = generate_tracks(scenario);
    } else {
        IngestResult ingest = read_track_csv_file(config.tracks_csv);
        if (!ingest.errors.empty()) {
            std::string report = "rejected rows in '" + config.tracks_csv + "':";
            for (const RowError& e : ingest.errors)
                report += "\n  line " + std::to_string(e.line) + ": " + e.message;
            throw InputError(report);
        }
        input_digest = digest_file(config.tracks_csv);
        tracks = std::move(ingest.tracks);
    }
    if (tracks.empty()) throw InputError("no input tracks");
    write_track_csv_file((out / "tracks.csv").string(), tracks);

    for (const Track& t : tracks) manifest.objects.push_back({t.id, t.label, t.length()});

    manifest.projection = draw_projection_vector(derive_seed(config.seed, "projection"));

    // --- experiment grid ---
    for (int length : config.lengths) {
        const fs::path cell_dir = out / ("L" + std::to_string(length));
        fs::create_directories(cell_dir);

        FeatureRows rows = build_series(tracks, length, manifest.projection, manifest.rejected);
        if (rows.series.empty())
            throw InputError("no track is long enough for sub-track length " + std::to_string(length));

        std::vector<Provenance> provenance;
        provenance.reserve(rows.series.size());
        for (const ProjectedSeries& s : rows.series) provenance.push_back(s.provenance);

        SplitIndices split_idx =
            split_indices(provenance, config.train_fraction, derive_seed(config.seed, "split"),
                          config.split_mode);

        // persistence artifacts shared by the cell
        std::vector<PersistenceDiagram> diagrams;
        DelayParams embed_params = config.embedding;

        for (const std::string& method : config.methods) {
            const double t_cell = now_seconds();
            CellResult cell;
            cell.length = length;
            cell.method = method;

            Dataset dataset;
            dataset.rows.resize(rows.series.size());

            if (method == kMethodStatistic) {
                cell.embedding_used = DelayParams{0, 0};  // not applicable
                for (std::size_t i = 0; i < rows.series.size(); ++i) {
                    dataset.rows[i] = {rows.series[i].values, rows.labels[i], provenance[i]};
                }
            } else {
                if (config.auto_params) embed_params = auto_embedding_params(rows.series[0].values);
                cell.embedding_used = embed_params;

                if (diagrams.empty()) {
                    std::vector<PointCloud> clouds(rows.series.size());
                    std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(dynamic)
                    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(rows.series.size()); ++i) {
                        try {
                            clouds[static_cast<std::size_t>(i)] =
                                delay_embed(rows.series[static_cast<std::size_t>(i)].values, embed_params);
                        } catch (...) {
#pragma omp critical
                            if (!failure) failure = std::current_exception();
                        }
                    }
                    if (failure) std::rethrow_exception(failure);
                    diagrams = vr_persistence_h0_batch(clouds);
                }

                // persistence range comes from the training split only
                double p_max = 0.0;
                for (std::size_t i : split_idx.train)
                    for (const PersistencePair& p : diagrams[i].pairs)
                        if (!p.essential()) p_max = std::max(p_max, p.persistence());
                if (!(p_max > 0.0))
                    throw InputError("training split has zero maximum persistence at length " +
                                     std::to_string(length) +
                                     "; the embedded clouds are degenerate (constant tracks?)");
                cell.p_max = p_max;
                cell.sigma = config.pi_sigma_scale * p_max;

                PIParams pi{config.pi_resolution, cell.sigma, p_max};
                std::vector<PersistenceVector> vectors(diagrams.size());
#pragma omp parallel for schedule(static)
                for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(diagrams.size()); ++i) {
                    vectors[static_cast<std::size_t>(i)] =
                        diagram_to_vector(diagrams[static_cast<std::size_t>(i)], pi);
                    vectors[static_cast<std::size_t>(i)].provenance = provenance[static_cast<std::size_t>(i)];
                }
                for (std::size_t i = 0; i < vectors.size(); ++i)
                    dataset.rows[i] = {vectors[i].values, rows.labels[i], provenance[i]};

                write_diagrams_csv(cell_dir / "diagrams.csv", diagrams, provenance);
            }

            // features CSV, one row per sub-track in row order
            {
                std::vector<PersistenceVector> feature_rows(dataset.rows.size());
                for (std::size_t i = 0; i < dataset.rows.size(); ++i)
                    feature_rows[i] = {dataset.rows[i].features, dataset.rows[i].provenance};
                std::ofstream fout(cell_dir / ("features_" + method + ".csv"), std::ios::binary);
                if (!fout) throw InputError("cannot write features CSV");
                write_vectors_csv(fout, feature_rows, rows.labels);
            }

            Dataset train, test;
            for (std::size_t i : split_idx.train) train.rows.push_back(dataset.rows[i]);
            for (std::size_t i : split_idx.test) test.rows.push_back(dataset.rows[i]);
            cell.matrix = evaluate(train, test, config.k, config.target_label);

            json cj = confusion_to_json(cell.matrix);
            cj["k"] = config.k;
            cj["seed"] = config.seed;
            cj["track_length"] = length;
            cj["feature_method"] = method;
            cj["split_mode"] = split_mode_name(config.split_mode);
            cj["train_fraction"] = config.train_fraction;
            write_text_file(cell_dir / ("confusion_" + method + ".json"), cj.dump(2) + "\n");

            cell.seconds = now_seconds() - t_cell;
            manifest.cells.push_back(std::move(cell));
        }
    }

    manifest.total_seconds = now_seconds() - t_start;

    // --- manifest ---
    json mj;
    mj["config"] = json::parse(manifest.config_json);
    mj["projection"] = {{"vx", manifest.projection.vx},
                        {"vy", manifest.projection.vy},
                        {"seed", manifest.projection.seed}};
    mj["objects"] = json::array();
    for (const ObjectInfo& o : manifest.objects)
        mj["objects"].push_back({{"id", o.id}, {"label", o.label}, {"length", o.length}});
    mj["digests"] = json::object();
    mj["digests"]["tracks_csv"] = digest_file((out / "tracks.csv").string());
    if (!input_digest.empty()) mj["digests"]["tracks_input"] = input_digest;
    mj["digests"]["config"] = digest_bytes(manifest.config_json);
    mj["cells"] = json::array();
    for (const CellResult& c : manifest.cells) {
        json cj;
        cj["length"] = c.length;
        cj["method"] = c.method;
        cj["confusion"] = confusion_to_json(c.matrix);
        if (c.method == kMethodPersistence) {
            cj["p_max"] = c.p_max;
            cj["sigma"] = c.sigma;
            cj["embedding"] = {{"dim", c.embedding_used.dim}, {"tau", c.embedding_used.tau}};
            cj["diagrams_file"] = "L" + std::to_string(c.length) + "/diagrams.csv";
        }
        cj["confusion_file"] = "L" + std::to_string(c.length) + "/confusion_" + c.method + ".json";
        cj["features_file"] = "L" + std::to_string(c.length) + "/features_" + c.method + ".csv";
        cj["seconds"] = c.seconds;
        mj["cells"].push_back(std::move(cj));
    }
    mj["rejected_tracks"] = manifest.rejected;
    mj["timings"] = {{"total_seconds", manifest.total_seconds}};
    write_text_file(out / "manifest.json", mj.dump(2) + "\n");

    return manifest;
}

void export_plots(const std::string& run_dir, const std::string& out_dir) {
    const fs::path run(run_dir);
    std::ifstream min(run / "manifest.json");
    if (!min) throw InputError("no manifest.json under '" + run_dir + "'");
    json mj;
    try {
        mj = json::parse(min);
    } catch (const json::exception& e) {
        throw InputError(std::string("manifest.json is not valid JSON: ") + e.what());
    }

    if (!mj.contains("objects") || mj["objects"].empty())
        throw InputError("manifest lists no objects; nothing to export");

    RunConfig config = parse_run_config_json(mj["config"].dump());
    ProjectionVector v;
    v.vx = mj["projection"]["vx"].get<double>();
    v.vy = mj["projection"]["vy"].get<double>();
    v.seed = mj["projection"]["seed"].get<std::uint64_t>();

    const int length = config.lengths.front();

    // the persistence cell at the first length, when the run had one
    bool have_pi = false;
    PIParams pi;
    DelayParams embed_params = config.embedding;
    for (const json& cj : mj["cells"]) {
        if (cj["method"] == kMethodPersistence && cj["length"].get<int>() == length) {
            pi = PIParams{config.pi_resolution, cj["sigma"].get<double>(), cj["p_max"].get<double>()};
            embed_params = DelayParams{cj["embedding"]["dim"].get<int>(), cj["embedding"]["tau"].get<int>()};
            have_pi = true;
        }
    }

    IngestResult ingest = read_track_csv_file((run / "tracks.csv").string());
    if (!ingest.errors.empty()) throw InputError("run tracks.csv no longer parses cleanly");

    fs::create_directories(out_dir);
    const fs::path out(out_dir);

    std::size_t exported = 0;
    for (const Track& t : ingest.tracks) {
        std::vector<SubTrack> subs;
        try {
            subs = extract_subtracks(t, length);
        } catch (const InputError&) {
            continue;  // was rejected during the run as well
        }
        const SubTrack& s = subs.front();
        NormalizedSubTrack norm = normalize_subtrack(s);

        {
            std::ofstream f(out / (t.id + "_subtrack.csv"), std::ios::binary);
            if (!f) throw InputError("cannot write under '" + out_dir + "'");
            f << "x,y\n";
            for (const Vec2& p : norm.points) f << format_double(p.x) << ',' << format_double(p.y) << '\n';
        }

        ProjectedSeries series = project(norm, v);
        PointCloud cloud = delay_embed(series.values, embed_params);
        {
            std::ofstream f(out / (t.id + "_cloud.csv"), std::ios::binary);
            for (int c = 0; c < cloud.dim; ++c) f << (c ? "," : "") << "z" << c;
            f << '\n';
            for (std::size_t i = 0; i < cloud.size(); ++i) {
                auto pt = cloud.point(i);
                for (int c = 0; c < cloud.dim; ++c)
                    f << (c ? "," : "") << format_double(pt[static_cast<std::size_t>(c)]);
                f << '\n';
            }
        }

        PersistenceDiagram diagram = vr_persistence_h0(pairwise_distances(cloud));
        write_diagram_csv_file((out / (t.id + "_barcode.csv")).string(), diagram);

        if (have_pi) {
            PersistenceVector vec = diagram_to_vector(diagram, pi);
            vec.provenance = {t.id, s.window_index};
            std::ofstream f(out / (t.id + "_vector.csv"), std::ios::binary);
            write_vectors_csv(f, {vec}, {t.label});
        }
        ++exported;
    }
    if (exported == 0) throw InputError("no object in the run is long enough to export examples");
}

}  // namespace topotrack
