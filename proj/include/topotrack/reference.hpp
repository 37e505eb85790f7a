#pragma once

#include <string>
#include <vector>

#include "topotrack/classify.hpp"
#include "topotrack/embedding.hpp"
#include "topotrack/persistence.hpp"

// Plain single-threaded counterparts of the OpenMP kernels. Kept (and built)
// so the tests can assert parallel == serial and the benchmark can time the
// two paths against each other. Not used by the CLI.
namespace topotrack::reference {

DistanceMatrix pairwise_distances(const PointCloud& cloud);

std::vector<PersistenceDiagram> vr_persistence_h0_batch(const std::vector<PointCloud>& clouds);

std::string knn_predict(const Dataset& train, const std::vector<double>& query, int k,
                        const std::string& target_label);

ConfusionMatrix evaluate(const Dataset& train, const Dataset& test, int k,
                         const std::string& target_label);

}  // namespace topotrack::reference
