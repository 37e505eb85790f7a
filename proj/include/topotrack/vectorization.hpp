#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "topotrack/persistence.hpp"
#include "topotrack/tracks.hpp"

namespace topotrack {

// Persistence-image parameters. The grid spans [0, p_max] with `resolution`
// equal bins; each diagram point contributes a Gaussian of sd `sigma` scaled
// by a linear weight that is 0 at persistence 0 and 1 at p_max (clamped above).
struct PIParams {
    int resolution = 25;
    double sigma = 0.0;
    double p_max = 0.0;

    double weight(double persistence) const;
    void validate() const;  // throws ConfigError
};

// Fixed-length nonnegative feature vector from an H0 diagram.
struct PersistenceVector {
    std::vector<double> values;
    Provenance provenance;
};

// H0 diagram -> vector: each finite pair (0, d) contributes
// weight(d) * integral of Gaussian(d, sigma) over every grid bin. Essential
// pairs are dropped (exactly one per cloud, so no class information is lost).
PersistenceVector diagram_to_vector(const PersistenceDiagram& diagram, const PIParams& params);

// dim >= 1 diagram -> resolution x resolution image over
// [0, p_max] x [0, p_max] in birth-persistence coordinates, row-major with
// image[b * resolution + p]. Essential pairs are dropped.
std::vector<double> diagram_to_image(const PersistenceDiagram& diagram, const PIParams& params);

// CSV: one row per sub-track, `track_id,window_index,label,v_0,...,v_{R-1}`.
void write_vectors_csv(std::ostream& out, const std::vector<PersistenceVector>& vectors,
                       const std::vector<std::string>& labels);

}  // namespace topotrack
