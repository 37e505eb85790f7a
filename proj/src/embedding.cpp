#include "topotrack/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "topotrack/errors.hpp"

namespace topotrack {

PointCloud delay_embed(std::span<const double> series, DelayParams params) {
    if (params.dim < 1) throw ConfigError("embedding dimension must be >= 1, got " + std::to_string(params.dim));
    if (params.tau < 1) throw ConfigError("embedding delay must be >= 1, got " + std::to_string(params.tau));
    const std::size_t n = series.size();
    const std::size_t span = static_cast<std::size_t>(params.dim - 1) * static_cast<std::size_t>(params.tau);
    if (n <= span) {
        throw InputError("series of length " + std::to_string(n) + " too short for (D=" +
                         std::to_string(params.dim) + ", tau=" + std::to_string(params.tau) +
                         "); need at least " + std::to_string(span + 1) + " samples");
    }
    const std::size_t m = n - span;
    PointCloud cloud;
    cloud.dim = params.dim;
    cloud.coords.resize(m * static_cast<std::size_t>(params.dim));
    for (std::size_t i = 0; i < m; ++i) {
        for (int j = 0; j < params.dim; ++j) {
            cloud.coords[i * static_cast<std::size_t>(params.dim) + static_cast<std::size_t>(j)] =
                series[i + static_cast<std::size_t>(j) * static_cast<std::size_t>(params.tau)];
        }
    }
    return cloud;
}

double histogram_mutual_information(std::span<const double> a, std::span<const double> b, int bins) {
    if (bins < 1) throw ConfigError("histogram bins must be >= 1");
    if (a.size() != b.size() || a.empty()) throw ConfigError("MI needs two equal-length non-empty samples");

    double lo = a[0], hi = a[0];
    for (double v : a) { lo = std::min(lo, v); hi = std::max(hi, v); }
    for (double v : b) { lo = std::min(lo, v); hi = std::max(hi, v); }
    if (!(hi > lo)) return 0.0;  // constant data carries no information

    const std::size_t n = a.size();
    const int nb = bins;
    auto bin_of = [&](double v) {
        int idx = static_cast<int>((v - lo) / (hi - lo) * nb);
        return std::min(idx, nb - 1);
    };

    std::vector<double> joint(static_cast<std::size_t>(nb) * nb, 0.0);
    std::vector<double> pa(nb, 0.0), pb(nb, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        int ia = bin_of(a[i]);
        int ib = bin_of(b[i]);
        joint[static_cast<std::size_t>(ia) * nb + ib] += 1.0;
        pa[ia] += 1.0;
        pb[ib] += 1.0;
    }
    const double total = static_cast<double>(n);
    double mi = 0.0;
    for (int i = 0; i < nb; ++i) {
        for (int j = 0; j < nb; ++j) {
            double c = joint[static_cast<std::size_t>(i) * nb + j];
            if (c > 0.0) mi += (c / total) * std::log((c * total) / (pa[i] * pb[j]));
        }
    }
    return std::max(mi, 0.0);
}

TauEstimate estimate_tau_mutual_information(std::span<const double> series, int max_tau, int bins) {
    if (max_tau < 1) throw ConfigError("max_tau must be >= 1");
    if (series.size() < 4 * static_cast<std::size_t>(max_tau)) {
        throw InputError("series of length " + std::to_string(series.size()) +
                         " too short for MI estimation: need >= 4*max_tau = " + std::to_string(4 * max_tau));
    }

    TauEstimate est;
    double lo = series[0], hi = series[0];
    for (double v : series) { lo = std::min(lo, v); hi = std::max(hi, v); }
    if (!(hi > lo)) {
        est.tau = 1;
        est.flag = EstimateFlag::degenerate;
        est.mi_curve.assign(static_cast<std::size_t>(max_tau), 0.0);
        return est;
    }

    est.mi_curve.reserve(static_cast<std::size_t>(max_tau));
    for (int tau = 1; tau <= max_tau; ++tau) {
        std::span<const double> head = series.subspan(0, series.size() - static_cast<std::size_t>(tau));
        std::span<const double> tail = series.subspan(static_cast<std::size_t>(tau));
        est.mi_curve.push_back(histogram_mutual_information(head, tail, bins));
    }

    for (int tau = 1; tau < max_tau; ++tau) {
        if (est.mi_curve[static_cast<std::size_t>(tau)] >= est.mi_curve[static_cast<std::size_t>(tau - 1)]) {
            est.tau = tau;
            est.flag = EstimateFlag::ok;
            return est;
        }
    }
    est.tau = max_tau;
    est.flag = EstimateFlag::no_minimum;
    return est;
}

DimEstimate estimate_dim_fnn(std::span<const double> series, int tau, int max_dim,
                             double rtol, double fraction_threshold) {
    if (tau < 1) throw ConfigError("tau must be >= 1");
    if (max_dim < 1) throw ConfigError("max_dim must be >= 1");
    const std::size_t n = series.size();
    const std::size_t span_max = static_cast<std::size_t>(max_dim - 1) * static_cast<std::size_t>(tau);
    if (n < span_max + 10) {
        throw InputError("series of length " + std::to_string(n) + " too short for FNN up to D=" +
                         std::to_string(max_dim) + ": need >= " + std::to_string(span_max + 10));
    }

    DimEstimate est;
    for (int dim = 1; dim <= max_dim; ++dim) {
        // The check for D needs the (D+1)-th delayed coordinate, so only base
        // indices with i + dim*tau < n participate.
        const std::size_t usable = n - static_cast<std::size_t>(dim) * static_cast<std::size_t>(tau);
        if (usable < 2) break;

        std::size_t false_count = 0;
        for (std::size_t i = 0; i < usable; ++i) {
            double best = std::numeric_limits<double>::infinity();
            std::size_t best_j = i;
            for (std::size_t j = 0; j < usable; ++j) {
                if (j == i) continue;
                double d2 = 0.0;
                for (int c = 0; c < dim; ++c) {
                    std::size_t off = static_cast<std::size_t>(c) * static_cast<std::size_t>(tau);
                    double diff = series[i + off] - series[j + off];
                    d2 += diff * diff;
                }
                if (d2 < best) {
                    best = d2;
                    best_j = j;
                }
            }
            std::size_t off = static_cast<std::size_t>(dim) * static_cast<std::size_t>(tau);
            double extra = std::abs(series[i + off] - series[best_j + off]);
            double r = std::sqrt(best);
            bool is_false = r > 0.0 ? (extra / r > rtol) : (extra > 0.0);
            if (is_false) ++false_count;
        }
        double fraction = static_cast<double>(false_count) / static_cast<double>(usable);
        est.fnn_fractions.push_back(fraction);
        if (fraction < fraction_threshold) {
            est.dim = dim;
            est.flag = EstimateFlag::ok;
            return est;
        }
    }
    est.dim = max_dim;
    est.flag = EstimateFlag::no_minimum;
    return est;
}

}  // namespace topotrack
