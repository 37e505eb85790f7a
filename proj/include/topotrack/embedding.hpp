#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace topotrack {

// Delay-embedding parameters. Valid for a series of length N when
// (dim - 1) * tau < N.
struct DelayParams {
    int dim = 2;
    int tau = 1;
};

// M points of dimension `dim`, flat row-major storage.
// Point n (0-based) coordinate j equals series[n + j*tau].
struct PointCloud {
    int dim = 0;
    std::vector<double> coords;

    std::size_t size() const { return dim == 0 ? 0 : coords.size() / static_cast<std::size_t>(dim); }
    std::span<const double> point(std::size_t i) const {
        return {coords.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
    }
};

// Builds the cloud of delayed copies: M = N - (dim-1)*tau points.
// Throws ConfigError on bad params, InputError when the series is too short
// (the message names the required minimum length).
PointCloud delay_embed(std::span<const double> series, DelayParams params);

enum class EstimateFlag { ok, no_minimum, degenerate };

struct TauEstimate {
    int tau = 1;
    EstimateFlag flag = EstimateFlag::ok;
    std::vector<double> mi_curve;  // MI(tau) for tau = 1..max_tau (nats)
};

struct DimEstimate {
    int dim = 1;
    EstimateFlag flag = EstimateFlag::ok;  // no_minimum = hit max_dim
    std::vector<double> fnn_fractions;     // per dim = 1..(last checked)
};

// Histogram mutual information between series[n] and series[n+tau]. Returns
// the smallest tau where the MI curve stops decreasing (its first local
// minimum); max_tau with no_minimum when the curve decreases throughout;
// tau 1 with degenerate for a constant series. Requires N >= 4*max_tau.
TauEstimate estimate_tau_mutual_information(std::span<const double> series, int max_tau, int bins = 16);

// False-nearest-neighbor sweep: smallest dim <= max_dim whose false-neighbor
// fraction is below `fraction_threshold`, else max_dim with no_minimum.
// Requires the max_dim embedding to have at least 10 points.
DimEstimate estimate_dim_fnn(std::span<const double> series, int tau, int max_dim,
                             double rtol = 15.0, double fraction_threshold = 0.01);

// MI between two equal-length samples with equal-width histograms over the
// pooled range; exposed so the estimator internals are testable.
double histogram_mutual_information(std::span<const double> a, std::span<const double> b, int bins);

}  // namespace topotrack
