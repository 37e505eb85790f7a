// Benchmark comparing the OpenMP kernels against the serial reference
// implementations. Checks that both paths agree before reporting timings.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "topotrack/classify.hpp"
#include "topotrack/embedding.hpp"
#include "topotrack/persistence.hpp"
#include "topotrack/reference.hpp"
#include "topotrack/rng.hpp"

using namespace topotrack;

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

template <typename F>
double time_best_of(int reps, F&& f) {
    double best = 1e100;
    for (int r = 0; r < reps; ++r) {
        double t0 = now_seconds();
        f();
        best = std::min(best, now_seconds() - t0);
    }
    return best;
}

void report(const char* kernel, double serial_s, double parallel_s, bool match) {
    std::printf("%-22s %10.1f ms %10.1f ms %8.2fx   %s\n", kernel, serial_s * 1e3, parallel_s * 1e3,
                serial_s / parallel_s, match ? "match" : "MISMATCH");
}

PointCloud random_cloud(Rng& rng, std::size_t n, int dim) {
    PointCloud cloud;
    cloud.dim = dim;
    cloud.coords.resize(n * static_cast<std::size_t>(dim));
    for (double& v : cloud.coords) v = rng.uniform(0.0, 10.0);
    return cloud;
}

bool bench_distances(int scale, int reps) {
    Rng rng(11);
    PointCloud cloud = random_cloud(rng, static_cast<std::size_t>(600) * scale, 2);

    DistanceMatrix serial, parallel;
    double ts = time_best_of(reps, [&] { serial = reference::pairwise_distances(cloud); });
    double tp = time_best_of(reps, [&] { parallel = pairwise_distances(cloud); });
    bool match = serial.d == parallel.d;
    report("pairwise_distances", ts, tp, match);
    return match;
}

bool bench_h0_batch(int scale, int reps) {
    Rng rng(12);
    std::vector<PointCloud> clouds;
    for (int i = 0; i < 128 * scale; ++i) clouds.push_back(random_cloud(rng, 100, 2));

    std::vector<PersistenceDiagram> serial, parallel;
    double ts = time_best_of(reps, [&] { serial = reference::vr_persistence_h0_batch(clouds); });
    double tp = time_best_of(reps, [&] { parallel = vr_persistence_h0_batch(clouds); });
    bool match = serial.size() == parallel.size();
    for (std::size_t i = 0; match && i < serial.size(); ++i)
        match = serial[i].finite_deaths() == parallel[i].finite_deaths();
    report("h0_batch", ts, tp, match);
    return match;
}

bool bench_evaluate(int scale, int reps) {
    Rng rng(13);
    auto make_rows = [&](Dataset& ds, int count, const char* tag) {
        for (int i = 0; i < count; ++i) {
            DataRow row;
            row.label = i % 2 == 0 ? "target" : "confuser";
            row.provenance = {std::string(tag) + (i % 2 == 0 ? "t" : "c"), i + 1};
            row.features.resize(25);
            double shift = i % 2 == 0 ? 1.0 : -1.0;
            for (double& f : row.features) f = rng.normal(shift, 1.0);
            ds.rows.push_back(std::move(row));
        }
    };
    Dataset train, test;
    make_rows(train, 1200 * scale, "train-");
    make_rows(test, 600 * scale, "test-");

    ConfusionMatrix serial, parallel;
    double ts = time_best_of(reps, [&] { serial = reference::evaluate(train, test, 5, "target"); });
    double tp = time_best_of(reps, [&] { parallel = evaluate(train, test, 5, "target"); });
    bool match = true;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) match = match && serial.counts[r][c] == parallel.counts[r][c];
    report("knn_evaluate", ts, tp, match);
    return match;
}

}  // namespace

int main(int argc, char** argv) {
    int scale = 1;
    int reps = 3;
    int jobs = 0;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        auto next = [&]() -> int { return i + 1 < argc ? std::atoi(argv[++i]) : 0; };
        if (arg == "--scale") scale = std::max(1, next());
        else if (arg == "--reps") reps = std::max(1, next());
        else if (arg == "--jobs") jobs = next();
        else {
            std::fprintf(stderr, "usage: %s [--scale N] [--reps N] [--jobs N]\n", argv[0]);
            return 2;
        }
    }

#ifdef _OPENMP
    if (jobs > 0) omp_set_num_threads(jobs);
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    (void)jobs;
    std::printf("built without OpenMP; both paths run serially\n");
#endif

    std::printf("%-22s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");
    bool ok = true;
    ok &= bench_distances(scale, reps);
    ok &= bench_h0_batch(scale, reps);
    ok &= bench_evaluate(scale, reps);
    return ok ? 0 : 1;
}
