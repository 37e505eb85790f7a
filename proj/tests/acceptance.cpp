// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "topotrack/classify.hpp"
#include "topotrack/embedding.hpp"
#include "topotrack/errors.hpp"
#include "topotrack/persistence.hpp"
#include "topotrack/pipeline.hpp"
#include "topotrack/rng.hpp"
#include "topotrack/synth.hpp"
#include "topotrack/tracks.hpp"
#include "topotrack/vectorization.hpp"

using namespace topotrack;
namespace fs = std::filesystem;

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

struct Harness {
    bool all_ok = true;

    void run(int number, const std::string& name, double budget_seconds,
             const std::function<bool(std::string&)>& body) {
        std::string detail;
        bool ok = false;
        double t0 = now_seconds();
        try {
            ok = body(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double elapsed = now_seconds() - t0;
        if (budget_seconds > 0.0 && elapsed >= budget_seconds) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
        }
        std::printf("[%s] criterion %d: %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", number, name.c_str(),
                    elapsed, detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
        all_ok = all_ok && ok;
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw InputError("missing " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool approx_equal(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// ---- criterion bodies ----

bool h0_oracle_equivalence(std::string& detail) {
    Rng rng(1001);
    int clouds = 0;
    for (int trial = 0; trial < 220; ++trial) {
        std::size_t n = 1 + rng.below(12);
        int dim = 1 + static_cast<int>(rng.below(3));
        PointCloud cloud = oracles::random_cloud(rng, n, dim);
        DistanceMatrix dist = pairwise_distances(cloud);
        auto got = vr_persistence_h0(dist).finite_deaths();
        auto expected = oracles::h0_deaths_by_component_tracking(dist);
        if (got.size() != expected.size()) {
            detail = "death count mismatch at trial " + std::to_string(trial);
            return false;
        }
        for (std::size_t i = 0; i < got.size(); ++i) {
            if (!approx_equal(got[i], expected[i], 1e-12)) {
                detail = "death value mismatch at trial " + std::to_string(trial);
                return false;
            }
        }
        ++clouds;
    }
    detail = std::to_string(clouds) + " clouds";
    return true;
}

bool mst_cross_check(std::string& detail) {
    Rng rng(1002);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 2 + rng.below(199);
        PointCloud cloud = oracles::random_cloud(rng, n, 1 + static_cast<int>(rng.below(3)));
        DistanceMatrix dist = pairwise_distances(cloud);
        auto deaths = vr_persistence_h0(dist).finite_deaths();
        auto mst = oracles::mst_edge_weights(dist);
        if (deaths.size() != mst.size()) {
            detail = "size mismatch at trial " + std::to_string(trial);
            return false;
        }
        for (std::size_t i = 0; i < deaths.size(); ++i) {
            if (!approx_equal(deaths[i], mst[i], 1e-12)) {
                detail = "weight mismatch at trial " + std::to_string(trial);
                return false;
            }
        }
    }
    detail = "50 clouds";
    return true;
}

bool embedding_shape_law(std::string& detail) {
    Rng rng(1003);
    int checked = 0;
    while (checked < 1000) {
        int n = 2 + static_cast<int>(rng.below(500));
        int dim = 1 + static_cast<int>(rng.below(8));
        int tau = 1 + static_cast<int>(rng.below(12));
        if ((dim - 1) * tau >= n) continue;

        std::vector<double> series(static_cast<std::size_t>(n));
        for (double& v : series) v = rng.uniform(-10, 10);
        PointCloud cloud = delay_embed(series, {dim, tau});
        if (cloud.size() != static_cast<std::size_t>(n - (dim - 1) * tau)) {
            detail = "wrong point count";
            return false;
        }
        for (std::size_t p = 0; p < cloud.size(); ++p) {
            for (int j = 0; j < dim; ++j) {
                if (cloud.point(p)[static_cast<std::size_t>(j)] !=
                    series[p + static_cast<std::size_t>(j * tau)]) {
                    detail = "delayed slice mismatch";
                    return false;
                }
            }
        }
        ++checked;
    }
    detail = "1000 triples";
    return true;
}

bool normalization_invariances(std::string& detail) {
    Rng rng(1004);
    for (int trial = 0; trial < 1000; ++trial) {
        SubTrack sub{"x", 1, {}};
        std::size_t len = 2 + rng.below(120);
        for (std::size_t i = 0; i < len; ++i)
            sub.points.push_back({rng.uniform(-500, 500), rng.uniform(-500, 500)});

        NormalizedSubTrack base = normalize_subtrack(sub);

        SubTrack moved = sub;
        double dx = rng.uniform(-1000, 1000), dy = rng.uniform(-1000, 1000);
        for (Vec2& p : moved.points) {
            p.x += dx;
            p.y += dy;
        }
        NormalizedSubTrack translated = normalize_subtrack(moved);

        SubTrack scaled = sub;
        double cx = rng.uniform(0.05, 20.0), cy = rng.uniform(0.05, 20.0);
        for (Vec2& p : scaled.points) {
            p.x *= cx;
            p.y *= cy;
        }
        NormalizedSubTrack rescaled = normalize_subtrack(scaled);

        for (std::size_t i = 0; i < len; ++i) {
            if (!approx_equal(base.points[i].x, translated.points[i].x, 1e-12) ||
                !approx_equal(base.points[i].y, translated.points[i].y, 1e-12)) {
                detail = "translation invariance broken at trial " + std::to_string(trial);
                return false;
            }
            if (!approx_equal(base.points[i].x, rescaled.points[i].x, 1e-12) ||
                !approx_equal(base.points[i].y, rescaled.points[i].y, 1e-12)) {
                detail = "scale invariance broken at trial " + std::to_string(trial);
                return false;
            }
        }
    }
    detail = "1000 sub-tracks";
    return true;
}

bool persistence_vector_laws(std::string& detail) {
    Rng rng(1005);
    PIParams params{25, 0.04, 2.0};

    // additivity + nonnegativity over random diagrams
    for (int trial = 0; trial < 100; ++trial) {
        PersistenceDiagram a, b, both;
        a.dim = b.dim = both.dim = 0;
        std::size_t na = rng.below(10), nb = rng.below(10);
        for (std::size_t i = 0; i < na; ++i) {
            double w = rng.uniform(0.0, 2.4);
            a.pairs.push_back({0.0, w});
            both.pairs.push_back({0.0, w});
        }
        for (std::size_t i = 0; i < nb; ++i) {
            double w = rng.uniform(0.0, 2.4);
            b.pairs.push_back({0.0, w});
            both.pairs.push_back({0.0, w});
        }
        auto va = diagram_to_vector(a, params).values;
        auto vb = diagram_to_vector(b, params).values;
        auto vu = diagram_to_vector(both, params).values;
        for (std::size_t i = 0; i < vu.size(); ++i) {
            if (vu[i] < 0.0 || va[i] < 0.0 || vb[i] < 0.0) {
                detail = "negative entry";
                return false;
            }
            if (!approx_equal(vu[i], va[i] + vb[i], 1e-12)) {
                detail = "additivity broken";
                return false;
            }
        }
    }

    // zero-persistence pairs carry zero weight
    PersistenceDiagram zeros;
    zeros.dim = 0;
    for (int i = 0; i < 5; ++i) zeros.pairs.push_back({0.0, 0.0});
    for (double v : diagram_to_vector(zeros, params).values) {
        if (v != 0.0) {
            detail = "zero-persistence pair leaked mass";
            return false;
        }
    }

    // single-pair mass against the quadrature oracle
    PersistenceDiagram one;
    one.dim = 0;
    one.pairs.push_back({0.0, 1.0});  // p = p_max / 2
    auto vec = diagram_to_vector(one, params).values;
    double total = 0.0;
    for (double v : vec) total += v;
    double oracle = params.weight(1.0) * oracles::gaussian_integral_simpson(1.0, params.sigma, 0.0, 2.0);
    if (!approx_equal(total, 0.5, 1e-3) || !approx_equal(total, oracle, 1e-3)) {
        detail = "single-pair mass off: total=" + std::to_string(total);
        return false;
    }
    return true;
}

struct CellView {
    int length = 0;
    std::string method;
    double conf_row_correct = 0.0;
    double target_row_correct = 0.0;
    double error = 0.0;
};

std::vector<CellView> run_grid(SplitMode mode, const fs::path& dir) {
    RunConfig config;
    config.seed = 20240901;
    config.lengths = {100, 75, 50};
    config.methods = {kMethodStatistic, kMethodPersistence};
    config.k = 5;
    config.split_mode = mode;
    config.scenario = default_scenario();
    RunManifest manifest = run_experiment(config, dir.string());

    std::vector<CellView> views;
    for (const CellResult& cell : manifest.cells) {
        CellView v;
        v.length = cell.length;
        v.method = cell.method;
        v.conf_row_correct = cell.matrix.row_normalized[0][0];
        v.target_row_correct = cell.matrix.row_normalized[1][1];
        v.error = cell.matrix.error_rate();
        views.push_back(v);
    }
    return views;
}

bool table_shaped_experiment(std::string& detail) {
    fs::path base = fs::temp_directory_path() / "topotrack_acceptance_grid";
    fs::remove_all(base);

    // default split: persistence rows must clear the thresholds at every length
    std::vector<CellView> shuffled = run_grid(SplitMode::shuffled, base / "shuffled");
    std::ostringstream summary;
    for (const CellView& v : shuffled) {
        if (v.method != kMethodPersistence) continue;
        summary << " L" << v.length << "[conf " << v.conf_row_correct << ", tgt "
                << v.target_row_correct << "]";
        if (!(v.conf_row_correct >= 0.98) || !(v.target_row_correct >= 0.95)) {
            detail = "threshold miss:" + summary.str();
            return false;
        }
    }

    // phase-shifted split: persistence total error <= baseline at every length
    std::vector<CellView> block = run_grid(SplitMode::block, base / "block");
    for (int length : {100, 75, 50}) {
        double stat_err = -1.0, pers_err = -1.0;
        for (const CellView& v : block) {
            if (v.length != length) continue;
            (v.method == kMethodStatistic ? stat_err : pers_err) = v.error;
        }
        summary << " shift-L" << length << "[stat " << stat_err << " vs pers " << pers_err << "]";
        if (pers_err > stat_err) {
            detail = "ordering broken:" + summary.str();
            return false;
        }
    }
    fs::remove_all(base);
    detail = summary.str();
    return true;
}

bool determinism(std::string& detail) {
    fs::path base = fs::temp_directory_path() / "topotrack_acceptance_det";
    fs::remove_all(base);

    RunConfig config;
    config.seed = 555;
    config.lengths = {50};
    config.scenario = default_scenario();
    config.scenario->n_targets = 1;
    config.scenario->n_confusers_per_class = 1;
    run_experiment(config, (base / "a").string());
    run_experiment(config, (base / "b").string());

    for (const char* rel : {"tracks.csv", "L50/confusion_statistic.json", "L50/confusion_persistence.json",
                            "L50/features_statistic.csv", "L50/features_persistence.csv",
                            "L50/diagrams.csv"}) {
        if (slurp(base / "a" / rel) != slurp(base / "b" / rel)) {
            detail = std::string("differs: ") + rel;
            return false;
        }
    }
    fs::remove_all(base);
    return true;
}

bool degenerate_inputs(std::string& detail) {
    // constant track: normalization zeros it, the pipeline reports the
    // documented zero-persistence input error instead of NaNs
    Track constant;
    constant.id = "flat";
    constant.label = "c";
    for (int i = 0; i < 60; ++i) constant.points.push_back({i, 4.0, 4.0});
    {
        auto subs = extract_subtracks(constant, 20);
        NormalizedSubTrack n = normalize_subtrack(subs.front());
        for (const Vec2& p : n.points) {
            if (p.x != 0.0 || p.y != 0.0) {
                detail = "constant track did not normalize to zeros";
                return false;
            }
        }
        ProjectedSeries s = project(n, draw_projection_vector(9));
        PointCloud cloud = delay_embed(s.values, {2, 1});
        PersistenceDiagram d = vr_persistence_h0(pairwise_distances(cloud));
        for (double w : d.finite_deaths()) {
            if (w != 0.0) {
                detail = "constant cloud produced nonzero deaths";
                return false;
            }
        }
        TauEstimate mi = estimate_tau_mutual_information(s.values, 5);
        if (mi.flag != EstimateFlag::degenerate || mi.tau != 1) {
            detail = "constant series MI flag missing";
            return false;
        }
        DimEstimate fnn = estimate_dim_fnn(s.values, 1, 3);
        if (fnn.dim != 1) {
            detail = "constant series FNN dimension";
            return false;
        }
    }

    // duplicate points keep the n-1 invariant with zero deaths and vectorize finitely
    {
        PointCloud dup;
        dup.dim = 2;
        for (int i = 0; i < 7; ++i) {
            dup.coords.push_back(1.0);
            dup.coords.push_back(2.0);
        }
        PersistenceDiagram d = vr_persistence_h0(pairwise_distances(dup));
        if (d.finite_deaths().size() != 6 || d.essential_count() != 1) {
            detail = "duplicate-point diagram shape";
            return false;
        }
        PersistenceVector v = diagram_to_vector(d, PIParams{25, 0.1, 1.0});
        for (double x : v.values) {
            if (!std::isfinite(x) || x != 0.0) {
                detail = "duplicate points leaked vector mass";
                return false;
            }
        }
    }

    // minimum-length windows: N* = 1 embeds at D = 1 only; D = 2 names the minimum
    {
        Track t;
        t.id = "two";
        t.label = "c";
        t.points = {{0, 0.0, 0.0}, {1, 1.0, 1.0}};
        auto subs = extract_subtracks(t, 1);
        if (subs.size() != 1 || subs[0].points.size() != 1) {
            detail = "minimum window extraction";
            return false;
        }
        ProjectedSeries s = project(normalize_subtrack(subs[0]), draw_projection_vector(9));
        bool threw = false;
        try {
            delay_embed(s.values, {2, 1});
        } catch (const InputError&) {
            threw = true;
        }
        if (!threw) {
            detail = "short series embedding did not error";
            return false;
        }
        PointCloud c1 = delay_embed(s.values, {1, 1});
        if (c1.size() != 1) {
            detail = "D=1 identity embedding";
            return false;
        }
    }

    // all-constant pipeline input: documented error, not a crash
    {
        fs::path dir = fs::temp_directory_path() / "topotrack_acceptance_flat";
        fs::remove_all(dir);
        fs::create_directories(dir);
        std::vector<Track> flats;
        for (int j = 0; j < 2; ++j) {
            Track t;
            t.id = "flat-" + std::to_string(j);
            t.label = j == 0 ? "target" : "c";
            for (int i = 0; i < 80; ++i) t.points.push_back({i, 1.0 * j, 2.0});
            flats.push_back(std::move(t));
        }
        write_track_csv_file((dir / "flat.csv").string(), flats);
        RunConfig config;
        config.lengths = {40};
        config.methods = {kMethodPersistence};
        config.tracks_csv = (dir / "flat.csv").string();
        bool threw = false;
        try {
            run_experiment(config, (dir / "out").string());
        } catch (const InputError& e) {
            threw = std::string(e.what()).find("zero maximum persistence") != std::string::npos;
        }
        fs::remove_all(dir);
        if (!threw) {
            detail = "constant-input run did not raise the documented error";
            return false;
        }
    }

    // single-class dataset: evaluation works and flags the undefined row
    {
        Dataset all;
        Rng rng(31);
        for (int w = 1; w <= 12; ++w) {
            DataRow r;
            r.label = "confuser";
            r.provenance = {"c-only", w};
            r.features = {rng.uniform(0, 1), rng.uniform(0, 1)};
            all.rows.push_back(std::move(r));
        }
        Dataset train, test;
        split(all, 0.5, 4, train, test);
        ConfusionMatrix m = evaluate(train, test, 3, "target");
        if (m.row_defined[1] || !m.row_defined[0]) {
            detail = "single-class rows flagged wrong";
            return false;
        }
        if (m.counts[0][0] != 6) {
            detail = "single-class counts";
            return false;
        }
    }
    return true;
}

}  // namespace

int main() {
    Harness h;
    h.run(1, "H0 union-find equals brute-force component tracking (>=200 clouds)", 5.0,
          h0_oracle_equivalence);
    h.run(2, "H0 finite deaths equal independent MST edge weights (50 clouds)", 10.0, mst_cross_check);
    h.run(3, "delay-embedding shape law over 1000 random triples", 1.0, embedding_shape_law);
    h.run(4, "normalization translation/scale invariance over 1000 sub-tracks", 0.0,
          normalization_invariances);
    h.run(5, "persistence-vector laws (additivity, nonnegativity, mass = weight)", 0.0,
          persistence_vector_laws);
    h.run(6, "table-shaped synthetic experiment with phase-shifted ordering", 60.0,
          table_shaped_experiment);
    h.run(7, "byte-identical reruns (matrices, vectors, diagrams)", 0.0, determinism);
    h.run(8, "degenerate inputs produce documented errors, never NaNs", 0.0, degenerate_inputs);
    return h.all_ok ? 0 : 1;
}
