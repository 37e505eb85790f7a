#include "topotrack/vectorization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "topotrack/errors.hpp"

namespace topotrack {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// integral of a unit Gaussian centered at mu with sd sigma over [lo, hi]
double gaussian_mass(double mu, double sigma, double lo, double hi) {
    double a = (lo - mu) / sigma;
    double b = (hi - mu) / sigma;
    return 0.5 * (std::erf(b * kInvSqrt2) - std::erf(a * kInvSqrt2));
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

double PIParams::weight(double persistence) const {
    if (persistence <= 0.0) return 0.0;
    if (persistence >= p_max) return 1.0;
    return persistence / p_max;
}

void PIParams::validate() const {
    if (resolution < 1) throw ConfigError("persistence-image resolution must be >= 1");
    if (!(sigma > 0.0)) throw ConfigError("persistence-image sigma must be > 0");
    if (!(p_max > 0.0)) throw ConfigError("persistence range p_max must be > 0");
}

// The first and last bins absorb the Gaussian tails, so every pair
// contributes exactly weight(p) of total mass and total mass is monotone in
// persistence.
PersistenceVector diagram_to_vector(const PersistenceDiagram& diagram, const PIParams& params) {
    params.validate();
    PersistenceVector out;
    out.values.assign(static_cast<std::size_t>(params.resolution), 0.0);

    const double inf = std::numeric_limits<double>::infinity();
    const double bin_width = params.p_max / params.resolution;
    for (const PersistencePair& pair : diagram.pairs) {
        if (pair.essential()) continue;
        const double p = pair.persistence();
        const double w = params.weight(p);
        if (w == 0.0) continue;
        for (int b = 0; b < params.resolution; ++b) {
            double lo = b == 0 ? -inf : b * bin_width;
            double hi = b == params.resolution - 1 ? inf : (b + 1) * bin_width;
            out.values[static_cast<std::size_t>(b)] += w * gaussian_mass(p, params.sigma, lo, hi);
        }
    }
    return out;
}

std::vector<double> diagram_to_image(const PersistenceDiagram& diagram, const PIParams& params) {
    params.validate();
    const int r = params.resolution;
    std::vector<double> image(static_cast<std::size_t>(r) * static_cast<std::size_t>(r), 0.0);

    const double inf = std::numeric_limits<double>::infinity();
    const double bin_width = params.p_max / r;
    auto edges = [&](int b, double& lo, double& hi) {
        lo = b == 0 ? -inf : b * bin_width;
        hi = b == r - 1 ? inf : (b + 1) * bin_width;
    };
    for (const PersistencePair& pair : diagram.pairs) {
        if (pair.essential()) continue;
        const double p = pair.persistence();
        const double w = params.weight(p);
        if (w == 0.0) continue;
        // axis-aligned Gaussian: the cell integral factorizes
        for (int bi = 0; bi < r; ++bi) {
            double lo, hi;
            edges(bi, lo, hi);
            double mass_b = gaussian_mass(pair.birth, params.sigma, lo, hi);
            if (mass_b == 0.0) continue;
            for (int pi = 0; pi < r; ++pi) {
                edges(pi, lo, hi);
                double mass_p = gaussian_mass(p, params.sigma, lo, hi);
                image[static_cast<std::size_t>(bi) * r + pi] += w * mass_b * mass_p;
            }
        }
    }
    return image;
}

void write_vectors_csv(std::ostream& out, const std::vector<PersistenceVector>& vectors,
                       const std::vector<std::string>& labels) {
    if (vectors.size() != labels.size())
        throw InvariantError("vector/label count mismatch in CSV export");
    std::size_t width = vectors.empty() ? 0 : vectors[0].values.size();
    out << "track_id,window_index,label";
    for (std::size_t i = 0; i < width; ++i) out << ",v_" << i;
    out << '\n';
    for (std::size_t r = 0; r < vectors.size(); ++r) {
        if (vectors[r].values.size() != width)
            throw InvariantError("ragged feature vectors in CSV export");
        out << vectors[r].provenance.parent_id << ',' << vectors[r].provenance.window_index << ','
            << labels[r];
        for (double v : vectors[r].values) out << ',' << format_double(v);
        out << '\n';
    }
}

}  // namespace topotrack
