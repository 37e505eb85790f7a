#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "topotrack/embedding.hpp"

namespace topotrack {

// Symmetric nonnegative distance matrix with zero diagonal, full n x n storage.
struct DistanceMatrix {
    std::size_t n = 0;
    std::vector<double> d;  // row-major, d[i*n + j]

    double at(std::size_t i, std::size_t j) const { return d[i * n + j]; }
};

struct PersistencePair {
    double birth = 0.0;
    double death = 0.0;  // +inf marks an essential class

    bool essential() const { return death == std::numeric_limits<double>::infinity(); }
    double persistence() const { return death - birth; }
};

// Multiset of (birth, death) pairs for one homology dimension. Essential
// classes are stored as pairs with death = +inf; finite pairs come first,
// sorted ascending by (birth, death), then essential pairs by birth.
struct PersistenceDiagram {
    int dim = 0;
    std::vector<PersistencePair> pairs;

    std::size_t essential_count() const;
    std::vector<double> finite_deaths() const;  // sorted ascending
};

// Euclidean pairwise distances; parallelized over rows for larger clouds.
DistanceMatrix pairwise_distances(const PointCloud& cloud);

// Zeroth persistent homology of the Vietoris-Rips filtration: union-find over
// edges sorted ascending by (weight, i, j). Every birth is 0; the n-1 finite
// deaths are the minimum-spanning-tree edge weights (zero-persistence pairs
// from duplicate points are retained); exactly one essential class remains.
PersistenceDiagram vr_persistence_h0(const DistanceMatrix& dist);

// One H0 diagram per cloud, parallel across clouds (each diagram computation
// is internally single-threaded); output order matches input order.
std::vector<PersistenceDiagram> vr_persistence_h0_batch(const std::vector<PointCloud>& clouds);

// First persistent homology via boundary-matrix column reduction over Z/2 on
// the filtration restricted to simplices of diameter <= max_scale. Classes
// still alive at the cutoff are reported as essential. Zero-persistence pairs
// are dropped. Throws ConfigError when n exceeds `cap` (the <=2-skeleton would
// not fit memory; subsample the cloud instead).
PersistenceDiagram vr_persistence_h1(const DistanceMatrix& dist, double max_scale, std::size_t cap = 400);

// Number of classes alive at scale eps: pairs with birth <= eps < death plus
// essential pairs with birth <= eps.
std::size_t betti_at_scale(const PersistenceDiagram& diagram, double eps);

// CSV with header `dim,birth,death`; death `inf` marks essential pairs.
void write_diagram_csv(std::ostream& out, const PersistenceDiagram& diagram);
void write_diagram_csv_file(const std::string& path, const PersistenceDiagram& diagram);

}  // namespace topotrack
