#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "topotrack/errors.hpp"
#include "topotrack/pipeline.hpp"
#include "topotrack/rng.hpp"

namespace {

using namespace topotrack;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void print_matrix(const ConfusionMatrix& m) {
    auto cell = [](double v, bool defined) {
        char buf[16];
        if (!defined) return std::string("   -  ");
        std::snprintf(buf, sizeof(buf), "%6.3f", v);
        return std::string(buf);
    };
    std::printf("    pred\\true   confuser  target\n");
    std::printf("    confuser    %s    %s   (n=%lld)\n", cell(m.row_normalized[0][0], m.row_defined[0]).c_str(),
                cell(m.row_normalized[0][1], m.row_defined[0]).c_str(), m.counts[0][0] + m.counts[0][1]);
    std::printf("    target      %s    %s   (n=%lld)\n", cell(m.row_normalized[1][0], m.row_defined[1]).c_str(),
                cell(m.row_normalized[1][1], m.row_defined[1]).c_str(), m.counts[1][0] + m.counts[1][1]);
}

int cmd_synth(const std::string& config_path, const std::string& out_path, std::uint64_t seed,
              bool seed_given) {
    ScenarioConfig scenario =
        config_path.empty() ? default_scenario() : parse_scenario_json(read_file(config_path));
    if (seed_given) scenario.seed = seed;
    if (scenario.seed == 0) scenario.seed = 1;
    std::vector<Track> tracks = generate_tracks(scenario);
    write_track_csv_file(out_path, tracks);
    std::printf("wrote %zu tracks to %s (seed %llu)\n", tracks.size(), out_path.c_str(),
                static_cast<unsigned long long>(scenario.seed));
    return 0;
}

struct RunOverrides {
    std::vector<int> lengths;
    std::vector<std::string> methods;
    std::string tracks_csv;
    std::string split_mode;
    int k = -1;
    int jobs = -1;
    int embed_dim = -1;
    int embed_tau = -1;
    bool auto_params = false;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

int cmd_run(const std::string& config_path, const std::string& out_dir, const RunOverrides& o) {
    RunConfig config;
    if (!config_path.empty()) {
        config = parse_run_config_json(read_file(config_path));
    } else {
        config.scenario = default_scenario();
        config.scenario->seed = 0;  // derive from the run seed
    }
    if (o.seed_given) config.seed = o.seed;
    if (!o.lengths.empty()) config.lengths = o.lengths;
    if (!o.methods.empty()) config.methods = o.methods;
    if (o.k > 0) config.k = o.k;
    if (o.jobs >= 0) config.jobs = o.jobs;
    if (o.embed_dim > 0) config.embedding.dim = o.embed_dim;
    if (o.embed_tau > 0) config.embedding.tau = o.embed_tau;
    if (o.auto_params) config.auto_params = true;
    if (!o.split_mode.empty())
        config.split_mode = o.split_mode == "block" ? SplitMode::block : SplitMode::shuffled;
    if (!o.tracks_csv.empty()) {
        config.tracks_csv = o.tracks_csv;
        config.scenario.reset();
    }

    RunManifest manifest = run_experiment(config, out_dir);

    for (const CellResult& cell : manifest.cells) {
        std::printf("length %d, method %s  (%.2fs)\n", cell.length, cell.method.c_str(), cell.seconds);
        print_matrix(cell.matrix);
    }
    for (const std::string& r : manifest.rejected) std::fprintf(stderr, "rejected: %s\n", r.c_str());
    std::printf("manifest: %s/manifest.json  (%.2fs total)\n", out_dir.c_str(), manifest.total_seconds);
    return 0;
}

int cmd_validate(const std::string& config_path, bool show_schema) {
    if (show_schema || config_path.empty()) {
        std::fputs(run_config_schema().c_str(), stdout);
        return 0;
    }
    RunConfig config = parse_run_config_json(read_file(config_path));
    std::printf("OK: %s parses and validates\n", config_path.c_str());
    std::fputs(run_config_to_json(config).c_str(), stdout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"topological motion-track classification pipeline"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic track CSV from a scenario");
    std::string synth_config, synth_out = "tracks.csv";
    std::uint64_t synth_seed = 0;
    synth->add_option("--config", synth_config, "scenario JSON (defaults to the built-in scenario)");
    synth->add_option("--out", synth_out, "output track CSV path");
    auto* synth_seed_opt = synth->add_option("--seed", synth_seed, "override the scenario seed")
                               ->envname("TOPOTRACK_SEED");

    // run
    auto* run = app.add_subcommand("run", "run the experiment grid and write a run directory");
    std::string run_config, run_out = "run_out";
    RunOverrides o;
    run->add_option("--config", run_config, "run config JSON (see `validate` for the schema)")
        ->envname("TOPOTRACK_CONFIG");
    run->add_option("--out", run_out, "output directory")->envname("TOPOTRACK_OUT");
    run->add_option("--tracks", o.tracks_csv, "input track CSV (replaces any scenario)");
    run->add_option("--lengths", o.lengths, "sub-track lengths to evaluate");
    run->add_option("--methods", o.methods, "feature methods: statistic persistence");
    run->add_option("--k", o.k, "k-NN neighbor count");
    auto* run_seed_opt = run->add_option("--seed", o.seed, "root seed")->envname("TOPOTRACK_SEED");
    run->add_option("--jobs", o.jobs, "worker threads (0 = default)")->envname("TOPOTRACK_JOBS");
    run->add_option("--split-mode", o.split_mode, "shuffled | block")
        ->check(CLI::IsMember({"shuffled", "block"}));
    run->add_option("--embed-dim", o.embed_dim, "embedding dimension D");
    run->add_option("--embed-tau", o.embed_tau, "embedding delay tau");
    run->add_flag("--auto-params", o.auto_params, "estimate (tau, D) via MI / false nearest neighbors");

    // export
    auto* exp = app.add_subcommand("export", "write per-object example CSVs from a run directory");
    std::string exp_run, exp_out = "plots";
    exp->add_option("--run", exp_run, "run directory containing manifest.json")->required();
    exp->add_option("--out", exp_out, "output directory");

    // validate
    auto* val = app.add_subcommand("validate", "validate a config file or print the schema");
    std::string val_config;
    bool val_schema = false;
    val->add_option("--config", val_config, "config JSON to validate");
    val->add_flag("--schema", val_schema, "print the config schema");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (synth->parsed()) return cmd_synth(synth_config, synth_out, synth_seed, synth_seed_opt->count() > 0);
        if (run->parsed()) {
            o.seed_given = run_seed_opt->count() > 0;
            return cmd_run(run_config, run_out, o);
        }
        if (exp->parsed()) {
            topotrack::export_plots(exp_run, exp_out);
            std::printf("exported example CSVs to %s\n", exp_out.c_str());
            return 0;
        }
        if (val->parsed()) return cmd_validate(val_config, val_schema);
    } catch (const topotrack::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const topotrack::InputError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 3;
    } catch (const topotrack::InvariantError& e) {
        std::fprintf(stderr, "internal invariant failure: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 4;
    }
    return 0;
}
